"""Rewriting, amalgamated free products and codescent for finite ternary rings."""

__version__ = "0.1.0"

from .algebras import (
    Congruence,
    TernaryMap,
    TernaryRing,
    congruences,
    enumerate_ternary_rings,
    evaluate,
    from_unital_ring,
    identity_map,
    is_monomorphism,
    subalgebra_generated,
    ternary_monomorphisms,
    validate_ternary_ring,
)
from .amalgams import (
    Amalgam,
    amalgam_normalize,
    canonical_injection,
    check_strong_amalgamation,
    copies_amalgam,
    equal_in_amalgam,
    mixed_term,
    rewrite_once_amalgam,
    unique_nf_property_test,
    validate_amalgam,
)
from .ideals import (
    ClosureTrace,
    MorphismVerdict,
    ZeroIdeal,
    closure_condition,
    eval_ideal_term,
    has_congruence_extension,
    has_ideal_extension,
    ideal_closure,
    is_effective_codescent,
    is_zero_ideal,
    zero_ideals,
)
from .rewriting import (
    BUILTIN_SYSTEMS,
    COMPLETED_RULES,
    CORE_RULES,
    CriticalPair,
    Rule,
    RuleSystem,
    check_confluence,
    check_shrinking,
    check_variable_coverage,
    critical_pairs,
    is_joinable,
    normalize,
    rewrite_once,
)
from .rings import (
    CommRing,
    as_ternary,
    closure_term_forms_check,
    compare_descent_classes,
    cyclic_ring,
    default_ring_corpus,
    f2_dual_numbers,
    f2_square_zero_pair,
    galois_field_4,
    ideal_translation_check,
    is_pure,
    product_ring,
    ring_ideals,
    unital_ring_monomorphisms,
)
from .terms import (
    App,
    Elem,
    Signature,
    TERNARY_SIGNATURE,
    Var,
    format_term,
    match,
    parse_term,
    positions,
    replace_at,
    substitute,
    subterm_at,
    unify,
    variables_of,
)
