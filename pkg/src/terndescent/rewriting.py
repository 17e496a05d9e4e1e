"""Oriented rewrite rules, normalization strategies, critical pairs.

Ships two built-in systems over the ternary-ring signature:

* ``CORE_RULES`` ("sigma"): the six defining identities of ternary
  rings, oriented left to right and labeled 1.1-1.4, 1.6, 1.7.
* ``COMPLETED_RULES`` ("sigma-prime"): the same plus the four derived
  identities 3.1-3.4 that close its non-joinable critical pairs.

Confluence of a terminating system is decided by joinability of all
critical pairs; non-joinable pairs are reported as canonically renamed
witness classes.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import NonterminationRisk
from .terms import (
    App,
    Elem,
    Position,
    Signature,
    Term,
    TERNARY_SIGNATURE,
    Var,
    is_well_formed,
    match,
    parse_term,
    positions,
    rename_variables,
    replace_at,
    size,
    substitute,
    subterm_at,
    unify,
    variable_multiplicities,
    variables_of,
)

STRATEGIES = ("leftmost-innermost", "leftmost-outermost", "seeded-random")


def _contains_elem(term: Term) -> bool:
    return any(isinstance(s, Elem) for _, s in positions(term))


@dataclass(frozen=True)
class Rule:
    label: str
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if isinstance(self.lhs, Var):
            raise ValueError("rule %s: left side must not be a bare variable" % self.label)
        if _contains_elem(self.lhs) or _contains_elem(self.rhs):
            raise ValueError("rule %s: element constants not allowed in rules" % self.label)
        extra = variables_of(self.rhs) - variables_of(self.lhs)
        if extra:
            raise ValueError(
                "rule %s: right side introduces variables %s" % (self.label, sorted(extra))
            )

    def __str__(self):
        return "%s: %s -> %s" % (self.label, self.lhs, self.rhs)


@dataclass(frozen=True)
class RuleSystem:
    signature: Signature
    rules: tuple

    def __post_init__(self):
        labels = [r.label for r in self.rules]
        if len(labels) != len(set(labels)):
            raise ValueError("duplicate rule labels")
        for r in self.rules:
            if not is_well_formed(r.lhs, self.signature) or not is_well_formed(
                r.rhs, self.signature
            ):
                raise ValueError("rule %s is not well-formed over the signature" % r.label)

    def rule(self, label: str) -> Rule:
        for r in self.rules:
            if r.label == label:
                return r
        raise KeyError(label)


def _rules(labeled: list) -> tuple:
    return tuple(Rule(label, parse_term(lhs), parse_term(rhs)) for label, lhs, rhs in labeled)


CORE_RULES = RuleSystem(
    TERNARY_SIGNATURE,
    _rules(
        [
            ("1.1", "(t 0 x y)", "y"),
            ("1.2", "(t x 0 y)", "y"),
            ("1.3", "(t 1 x 0)", "x"),
            ("1.4", "(t x 1 0)", "x"),
            ("1.6", "(q x y (t x y z))", "z"),
            ("1.7", "(t x y (q x y z))", "z"),
        ]
    ),
)

COMPLETED_RULES = RuleSystem(
    TERNARY_SIGNATURE,
    CORE_RULES.rules
    + _rules(
        [
            ("3.1", "(q 0 x y)", "y"),
            ("3.2", "(q x 0 y)", "y"),
            ("3.3", "(q 1 x x)", "0"),
            ("3.4", "(q x 1 x)", "0"),
        ]
    ),
)

BUILTIN_SYSTEMS = {"sigma": CORE_RULES, "sigma-prime": COMPLETED_RULES}


# ---------------------------------------------------------------------------
# single steps and normalization


def rewrite_once(system: RuleSystem, term: Term) -> set:
    """All one-step reducts of ``term``: a set of (position, label, result)
    triples.  Empty iff ``term`` is a normal form."""
    out = set()
    for pos, sub in positions(term):
        for rule in system.rules:
            binding = match(rule.lhs, sub)
            if binding is not None:
                out.add((pos, rule.label, replace_at(term, pos, substitute(rule.rhs, binding))))
    return out


@dataclass(frozen=True)
class Step:
    position: Position
    label: str
    term: Term  # the whole term after this step


def _postorder(term: Term, prefix: Position = ()) -> Iterator[tuple]:
    if isinstance(term, App):
        for i, arg in enumerate(term.args, start=1):
            yield from _postorder(arg, prefix + (i,))
    yield prefix, term


def _first_step(system: RuleSystem, term: Term, innermost: bool) -> Optional[Step]:
    walk = _postorder(term) if innermost else positions(term)
    for pos, sub in walk:
        for rule in system.rules:
            binding = match(rule.lhs, sub)
            if binding is not None:
                return Step(pos, rule.label, replace_at(term, pos, substitute(rule.rhs, binding)))
    return None


def normalize(
    system: RuleSystem,
    term: Term,
    strategy: str = "leftmost-innermost",
    seed: int = 0,
) -> tuple:
    """Rewrite ``term`` to a normal form, returning (normal form, trace).

    Refuses to start unless every rule of the system shrinks (see
    :func:`check_shrinking`), which guarantees termination.  The trace is
    a tuple of :class:`Step`; replaying it from ``term`` reproduces the
    result.
    """
    if strategy not in STRATEGIES:
        raise ValueError("unknown strategy %r" % strategy)
    if not check_shrinking(system).ok:
        raise NonterminationRisk(
            "system has non-shrinking rules; normalization may not terminate"
        )
    rng = random.Random(seed) if strategy == "seeded-random" else None
    trace = []
    while True:
        if rng is not None:
            options = sorted(rewrite_once(system, term), key=lambda o: (o[0], o[1]))
            step = None
            if options:
                pos, label, result = options[rng.randrange(len(options))]
                step = Step(pos, label, result)
        else:
            step = _first_step(system, term, innermost=strategy == "leftmost-innermost")
        if step is None:
            return term, tuple(trace)
        trace.append(step)
        term = step.term


def is_joinable(system: RuleSystem, pair: tuple) -> bool:
    """True iff both terms of the pair normalize to the same term."""
    left, _ = normalize(system, pair[0])
    right, _ = normalize(system, pair[1])
    return left == right


# ---------------------------------------------------------------------------
# rule-form side conditions


@dataclass(frozen=True)
class RuleCheck:
    label: str
    ok: bool
    detail: str


@dataclass(frozen=True)
class ConditionReport:
    ok: bool
    per_rule: tuple

    def __bool__(self):
        return self.ok


def check_shrinking(system: RuleSystem) -> ConditionReport:
    """Per rule: no variable occurs more often on the right than on the
    left, and the left side has strictly more nodes.

    Systems passing this terminate, since every rewrite step strictly
    decreases the node count of the whole term.
    """
    checks = []
    for rule in system.rules:
        left_counts = variable_multiplicities(rule.lhs)
        right_counts = variable_multiplicities(rule.rhs)
        bad_vars = sorted(
            v for v, k in right_counts.items() if k > left_counts.get(v, 0)
        )
        shrinks = size(rule.lhs) > size(rule.rhs)
        if bad_vars:
            checks.append(
                RuleCheck(rule.label, False, "variables duplicated: %s" % ", ".join(bad_vars))
            )
        elif not shrinks:
            checks.append(
                RuleCheck(
                    rule.label,
                    False,
                    "size does not decrease (%d -> %d)" % (size(rule.lhs), size(rule.rhs)),
                )
            )
        else:
            checks.append(
                RuleCheck(rule.label, True, "size %d -> %d" % (size(rule.lhs), size(rule.rhs)))
            )
    return ConditionReport(all(c.ok for c in checks), tuple(checks))


def check_variable_coverage(system: RuleSystem) -> ConditionReport:
    """Per rule: every subterm of the left side that is neither a variable
    nor a nullary symbol carries the full variable set of the left side."""
    checks = []
    for rule in system.rules:
        all_vars = variables_of(rule.lhs)
        bad = None
        for pos, sub in positions(rule.lhs):
            if isinstance(sub, Var):
                continue
            if isinstance(sub, App) and not sub.args:
                continue
            if variables_of(sub) != all_vars:
                bad = (pos, sub)
                break
        if bad is None:
            checks.append(RuleCheck(rule.label, True, "all inner subterms cover the variables"))
        else:
            checks.append(
                RuleCheck(
                    rule.label,
                    False,
                    "subterm %s at %r misses variables" % (bad[1], list(bad[0])),
                )
            )
    return ConditionReport(all(c.ok for c in checks), tuple(checks))


# ---------------------------------------------------------------------------
# critical pairs and confluence


@dataclass(frozen=True)
class CriticalPair:
    peak: Term
    left: Term  # reduct by the outer rule at the root
    right: Term  # reduct by the inner rule at ``position``
    outer_label: str
    inner_label: str
    position: Position

    def __str__(self):
        return "<%s, %s> from %s/%s at %r on peak %s" % (
            self.left,
            self.right,
            self.outer_label,
            self.inner_label,
            list(self.position),
            self.peak,
        )


def _rename_apart(rule: Rule, taken: set) -> Rule:
    names = sorted(variables_of(rule.lhs))
    avoid = set(taken) | set(names)
    fresh = ("x%d" % k for k in itertools.count(1))
    mapping = {}
    for name in names:
        new = next(fresh)
        while new in avoid:
            new = next(fresh)
        mapping[name] = new
        avoid.add(new)
    return Rule(rule.label, rename_variables(rule.lhs, mapping), rename_variables(rule.rhs, mapping))


def critical_pairs(system: RuleSystem) -> list:
    """All critical pairs between (renamed-apart) rules of the system.

    Overlaps are taken at every non-variable position of the outer left
    side; the root overlap of a rule with itself is skipped, root
    overlaps of distinct rules are kept.
    """
    pairs = []
    for i, outer in enumerate(system.rules):
        taken = variables_of(outer.lhs)
        for j, inner_raw in enumerate(system.rules):
            inner = _rename_apart(inner_raw, taken)
            for pos, sub in positions(outer.lhs):
                if isinstance(sub, Var):
                    continue
                if i == j and pos == ():
                    continue
                mgu = unify(sub, inner.lhs)
                if mgu is None:
                    continue
                peak = substitute(outer.lhs, mgu)
                left = substitute(outer.rhs, mgu)
                right = replace_at(peak, pos, substitute(inner.rhs, mgu))
                pairs.append(CriticalPair(peak, left, right, outer.label, inner.label, pos))
    return pairs


def canonical_pair(u: Term, v: Term) -> tuple:
    """The (u, v) pair with variables renamed to v1, v2, ... in order of
    first occurrence, taken up to swapping the two components."""

    def relabel(a: Term, b: Term) -> tuple:
        mapping: dict = {}
        for _, sub in itertools.chain(positions(a), positions(b)):
            if isinstance(sub, Var) and sub.name not in mapping:
                mapping[sub.name] = "v%d" % (len(mapping) + 1)
        return rename_variables(a, mapping), rename_variables(b, mapping)

    return min(relabel(u, v), relabel(v, u), key=lambda p: (str(p[0]), str(p[1])))


@dataclass(frozen=True)
class ConfluenceVerdict:
    status: str  # "confluent" | "not-confluent" | "unknown"
    witnesses: tuple  # canonical non-joinable pair classes, normalized
    pair_count: int

    def __bool__(self):
        return self.status == "confluent"


def check_confluence(system: RuleSystem) -> ConfluenceVerdict:
    """Decide confluence of a shrinking system by joinability of all its
    critical pairs.

    Witness classes pair the normal forms of the two reducts of each
    non-joinable critical pair, canonically renamed and deduplicated.
    If the system is not shrinking the verdict is "unknown".
    """
    if not check_shrinking(system).ok:
        return ConfluenceVerdict("unknown", (), 0)
    pairs = critical_pairs(system)
    witnesses = []
    for cp in pairs:
        left, _ = normalize(system, cp.left)
        right, _ = normalize(system, cp.right)
        if left != right:
            cls = canonical_pair(left, right)
            if cls not in witnesses:
                witnesses.append(cls)
    if witnesses:
        return ConfluenceVerdict("not-confluent", tuple(witnesses), len(pairs))
    return ConfluenceVerdict("confluent", (), len(pairs))
