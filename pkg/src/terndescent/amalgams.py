"""Amalgamated free products of finite ternary rings, by rewriting.

An amalgam is a family of table algebras sharing a common subalgebra.
Elements of the free product are represented by mixed terms: operation
symbols over element constants tagged by the algebra they come from
(tag ``B`` for shared elements, which count as members of every
algebra).  Two kinds of rewrite step reduce a mixed term:

* clause C: an instance of a rewrite rule, with variables standing for
  arbitrary mixed terms;
* clause C1: an operation symbol applied to constants all carried by one
  member algebra collapses to its table value.

Both kinds strictly decrease (node count, symbol count), so every mixed
term has a normal form; with the completed rule set the normal form is
unique, which decides equality in the free product.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .algebras import TernaryRing, validate_ternary_ring
from .errors import ForeignElement, NonterminationRisk, NotASubalgebra
from .rewriting import (
    COMPLETED_RULES,
    RuleSystem,
    Step,
    check_shrinking,
)
from .terms import (
    App,
    Elem,
    Term,
    Var,
    match,
    positions,
    replace_at,
    substitute,
)

SHARED_TAG = "B"


class Amalgam:
    """Validated family of algebras over a shared subalgebra.

    ``members`` is a list of (tag, algebra) pairs; ``shared`` names the
    elements of the common subalgebra; ``maps`` optionally embeds each
    shared name into each member (identity by default).  Raises
    NotASubalgebra when the data does not describe an amalgam.
    """

    def __init__(self, members, shared, maps=None, name=""):
        self.name = name
        self.members = dict(members)
        if SHARED_TAG in self.members:
            raise NotASubalgebra("tag %r is reserved for shared elements" % SHARED_TAG)
        if not self.members:
            raise NotASubalgebra("an amalgam needs at least one member algebra")
        self.tags = tuple(self.members)
        self.shared = tuple(shared)
        if len(set(self.shared)) != len(self.shared):
            raise NotASubalgebra("duplicate shared element names")
        if maps is None:
            maps = {tag: {b: b for b in self.shared} for tag in self.tags}
        self.maps = {tag: dict(maps[tag]) for tag in self.tags}
        self.inverse = {}
        for tag in self.tags:
            algebra = self.members[tag]
            verdict = validate_ternary_ring(algebra)
            if not verdict.valid:
                raise NotASubalgebra(
                    "member %r violates %s at %r" % (tag, verdict.axiom, verdict.witness)
                )
            emb = self.maps[tag]
            if set(emb) != set(self.shared):
                raise NotASubalgebra("embedding for %r must be total on the shared set" % tag)
            values = list(emb.values())
            if len(set(values)) != len(values):
                raise NotASubalgebra("embedding for %r is not injective" % tag)
            stray = set(values) - set(algebra.carrier)
            if stray:
                raise NotASubalgebra("embedding for %r hits non-elements %s" % (tag, sorted(stray)))
            self.inverse[tag] = {v: k for k, v in emb.items()}
        self._check_shared_structure()

    def _check_shared_structure(self):
        zeros = set()
        ones = set()
        for tag in self.tags:
            algebra = self.members[tag]
            inv = self.inverse[tag]
            if algebra.zero not in inv or algebra.one not in inv:
                raise NotASubalgebra(
                    "shared set misses a distinguished element of member %r" % tag
                )
            zeros.add(inv[algebra.zero])
            ones.add(inv[algebra.one])
        if len(zeros) != 1 or len(ones) != 1:
            raise NotASubalgebra("members disagree on the shared 0 or 1")
        self.b_zero = zeros.pop()
        self.b_one = ones.pop()

        t_table = {}
        q_table = {}
        for tag in self.tags:
            algebra = self.members[tag]
            emb, inv = self.maps[tag], self.inverse[tag]
            for x in self.shared:
                for y in self.shared:
                    for z in self.shared:
                        for op, table in (("t", t_table), ("q", q_table)):
                            fn = algebra.t if op == "t" else algebra.q
                            value = fn(emb[x], emb[y], emb[z])
                            if value not in inv:
                                raise NotASubalgebra(
                                    "shared set not closed: %s(%s,%s,%s)=%s in member %r"
                                    % (op, x, y, z, value, tag)
                                )
                            back = inv[value]
                            prior = table.setdefault((x, y, z), back)
                            if prior != back:
                                raise NotASubalgebra(
                                    "members induce different shared %s at (%s,%s,%s)"
                                    % (op, x, y, z)
                                )
        self.shared_ring = TernaryRing(
            self.shared, t_table, q_table, self.b_zero, self.b_one, name="shared"
        )

    def __repr__(self):
        label = self.name or "+".join(self.tags)
        return "Amalgam(%s over %d shared elements)" % (label, len(self.shared))

    def inject(self, tag: str, element: str) -> Elem:
        """Canonical constant for a member element (shared elements get
        the shared tag)."""
        if tag == SHARED_TAG:
            if element not in self.shared:
                raise ForeignElement("%r is not a shared element" % element)
            return Elem(SHARED_TAG, element)
        if tag not in self.members:
            raise ForeignElement("unknown member tag %r" % tag)
        if element not in self.members[tag].index:
            raise ForeignElement("%r is not an element of member %r" % (element, tag))
        back = self.inverse[tag].get(element)
        if back is not None:
            return Elem(SHARED_TAG, back)
        return Elem(tag, element)

    def leaves(self) -> list:
        """All canonical element constants, shared ones first."""
        out = [Elem(SHARED_TAG, b) for b in self.shared]
        for tag in self.tags:
            emb_image = set(self.inverse[tag])
            out.extend(
                Elem(tag, x) for x in self.members[tag].carrier if x not in emb_image
            )
        return out


@dataclass(frozen=True)
class AmalgamVerdict:
    valid: bool
    reason: Optional[str] = None

    def __bool__(self):
        return self.valid


def validate_amalgam(members, shared, maps=None) -> AmalgamVerdict:
    """Verdict form of the Amalgam constructor checks."""
    try:
        Amalgam(members, shared, maps)
    except (NotASubalgebra, ForeignElement) as exc:
        return AmalgamVerdict(False, str(exc))
    return AmalgamVerdict(True)


def copies_amalgam(algebra: TernaryRing, count: int, shared, name="") -> Amalgam:
    """Amalgam of ``count`` copies of one algebra over a shared subset,
    with identity embeddings; copies are tagged 1, 2, ..."""
    members = [(str(i + 1), algebra) for i in range(count)]
    return Amalgam(members, shared, name=name or "%d copies of %s" % (count, algebra.name))


# ---------------------------------------------------------------------------
# mixed terms


def mixed_term(amalgam: Amalgam, term: Term) -> Term:
    """Canonicalize a parsed term into a mixed term: variables are
    rejected, nullary symbols become the shared constants, and every
    element constant gets its canonical tag."""
    if isinstance(term, Var):
        raise ForeignElement("mixed terms cannot contain variables (%s)" % term.name)
    if isinstance(term, Elem):
        return amalgam.inject(term.tag, term.name)
    if term.symbol == "0":
        return Elem(SHARED_TAG, amalgam.b_zero)
    if term.symbol == "1":
        return Elem(SHARED_TAG, amalgam.b_one)
    return App(term.symbol, tuple(mixed_term(amalgam, a) for a in term.args))


def _specialized_rules(amalgam: Amalgam, system: RuleSystem) -> tuple:
    """Rule patterns with nullary symbols replaced by the shared
    constants, so they match canonicalized mixed terms."""

    def ground(term: Term) -> Term:
        if isinstance(term, App):
            if term.symbol == "0":
                return Elem(SHARED_TAG, amalgam.b_zero)
            if term.symbol == "1":
                return Elem(SHARED_TAG, amalgam.b_one)
            return App(term.symbol, tuple(ground(a) for a in term.args))
        return term

    return tuple((rule.label, ground(rule.lhs), ground(rule.rhs)) for rule in system.rules)


def _clauses(amalgam: Amalgam, system: RuleSystem) -> tuple:
    cache = amalgam.__dict__.setdefault("_cache", {})
    if system not in cache:
        cache[system] = _specialized_rules(amalgam, system)
    return cache[system]


def _collapse(amalgam: Amalgam, term: Term) -> Optional[Elem]:
    """Clause C1 value of an operation applied to constants of one member
    algebra (shared constants belong to every member), or None."""
    if not isinstance(term, App):
        return None
    if term.symbol == "0":
        return Elem(SHARED_TAG, amalgam.b_zero)
    if term.symbol == "1":
        return Elem(SHARED_TAG, amalgam.b_one)
    if not all(isinstance(a, Elem) for a in term.args):
        return None
    tags = {a.tag for a in term.args} - {SHARED_TAG}
    if len(tags) > 1:
        return None
    if not tags:
        ring = amalgam.shared_ring
        args = [a.name for a in term.args]
        fn = ring.t if term.symbol == "t" else ring.q
        return Elem(SHARED_TAG, fn(*args))
    tag = tags.pop()
    ring = amalgam.members[tag]
    emb = amalgam.maps[tag]
    args = [emb[a.name] if a.tag == SHARED_TAG else a.name for a in term.args]
    fn = ring.t if term.symbol == "t" else ring.q
    return amalgam.inject(tag, fn(*args))


def rewrite_once_amalgam(
    amalgam: Amalgam, term: Term, system: RuleSystem = COMPLETED_RULES
) -> set:
    """All one-step reducts of a mixed term: (position, label, result)
    triples, with labels ``C:<rule>`` for rule steps and ``C1`` for table
    collapses."""
    out = set()
    for pos, sub in positions(term):
        for label, lhs, rhs in _clauses(amalgam, system):
            binding = match(lhs, sub)
            if binding is not None:
                out.add(
                    (pos, "C:" + label, replace_at(term, pos, substitute(rhs, binding)))
                )
        value = _collapse(amalgam, sub)
        if value is not None:
            out.add((pos, "C1", replace_at(term, pos, value)))
    return out


def _postorder(term: Term, prefix=()):
    if isinstance(term, App):
        for i, arg in enumerate(term.args, start=1):
            yield from _postorder(arg, prefix + (i,))
    yield prefix, term


def _first_amalgam_step(amalgam, term, clauses, innermost: bool) -> Optional[Step]:
    walk = _postorder(term) if innermost else positions(term)
    for pos, sub in walk:
        for label, lhs, rhs in clauses:
            binding = match(lhs, sub)
            if binding is not None:
                return Step(pos, "C:" + label, replace_at(term, pos, substitute(rhs, binding)))
        value = _collapse(amalgam, sub)
        if value is not None:
            return Step(pos, "C1", replace_at(term, pos, value))
    return None


def amalgam_normalize(
    amalgam: Amalgam,
    term: Term,
    strategy: str = "leftmost-innermost",
    seed: int = 0,
    system: RuleSystem = COMPLETED_RULES,
) -> tuple:
    """Rewrite a mixed term to a normal form; returns (normal form, trace).

    Terminates for any shrinking rule system: rule steps strictly drop
    the node count and table collapses strictly drop (node count, symbol
    count).
    """
    if not check_shrinking(system).ok:
        raise NonterminationRisk("system has non-shrinking rules")
    term = mixed_term(amalgam, term)
    clauses = _clauses(amalgam, system)
    rng = random.Random(seed) if strategy == "seeded-random" else None
    if rng is None and strategy not in ("leftmost-innermost", "leftmost-outermost"):
        raise ValueError("unknown strategy %r" % strategy)
    trace = []
    while True:
        if rng is not None:
            options = sorted(
                rewrite_once_amalgam(amalgam, term, system), key=lambda o: (o[0], o[1])
            )
            step = None
            if options:
                pos, label, result = options[rng.randrange(len(options))]
                step = Step(pos, label, result)
        else:
            step = _first_amalgam_step(
                amalgam, term, clauses, innermost=strategy == "leftmost-innermost"
            )
        if step is None:
            return term, tuple(trace)
        trace.append(step)
        term = step.term


def canonical_injection(amalgam: Amalgam, tag: str, element: str) -> Elem:
    """Normal form of a member element in the free product.  Constants
    are already normal, so this is the canonical tagged constant."""
    return amalgam.inject(tag, element)


def equal_in_amalgam(amalgam: Amalgam, left: Term, right: Term) -> bool:
    """Equality in the free product, decided by comparing normal forms."""
    nf_left, _ = amalgam_normalize(amalgam, left)
    nf_right, _ = amalgam_normalize(amalgam, right)
    return nf_left == nf_right


# ---------------------------------------------------------------------------
# randomized unique-normal-form testing


def random_mixed_term(amalgam: Amalgam, rng: random.Random, depth: int) -> Term:
    """Uniform choice among the operation symbols and all tagged
    constants, cut off at the depth bound."""
    leaves = amalgam.leaves()
    if depth <= 0:
        return leaves[rng.randrange(len(leaves))]
    choices = ["t", "q"] + leaves
    pick = choices[rng.randrange(len(choices))]
    if isinstance(pick, Elem):
        return pick
    return App(pick, tuple(random_mixed_term(amalgam, rng, depth - 1) for _ in range(3)))


@dataclass(frozen=True)
class UniqueNfReport:
    passed: bool
    samples: int
    runs: int
    depth: int
    seed: int
    witness: Optional[tuple] = None  # (term, normal form A, normal form B)

    def __bool__(self):
        return self.passed


def unique_nf_property_test(
    amalgam: Amalgam,
    system: RuleSystem = COMPLETED_RULES,
    samples: int = 500,
    depth: int = 5,
    seed: int = 0,
    runs: int = 2,
) -> UniqueNfReport:
    """Sample mixed terms and normalize each one under several randomized
    strategies; pass iff every sample always reaches the same normal form.

    A failure witness carries the sampled term and two distinct normal
    forms reached from it.  The sampled terms depend only on the seed and
    the sample index, not on the run count.
    """
    master = random.Random(seed)
    for _ in range(samples):
        term_seed = master.getrandbits(32)
        term = random_mixed_term(amalgam, random.Random(term_seed), depth)
        first = None
        for run in range(max(2, runs)):
            nf, _ = amalgam_normalize(
                amalgam,
                term,
                strategy="seeded-random",
                seed=(term_seed << 32) | run,
                system=system,
            )
            if first is None:
                first = nf
            elif nf != first:
                return UniqueNfReport(
                    False, samples, runs, depth, seed, (term, first, nf)
                )
    return UniqueNfReport(True, samples, runs, depth, seed)


# ---------------------------------------------------------------------------
# strong amalgamation


@dataclass(frozen=True)
class StrongAmalgamationReport:
    holds: bool
    injectivity: dict  # tag -> (ok, witness or None)
    intersections: dict  # (tag, tag) -> (ok, sorted overlap)

    def __bool__(self):
        return self.holds


def check_strong_amalgamation(amalgam: Amalgam) -> StrongAmalgamationReport:
    """Each member embeds injectively in the free product, and the images
    of two distinct members meet exactly in the shared subalgebra."""
    injectivity = {}
    images = {}
    for tag in amalgam.tags:
        algebra = amalgam.members[tag]
        forms = {}
        ok, witness = True, None
        for x in algebra.carrier:
            nf = canonical_injection(amalgam, tag, x)
            if nf in forms:
                ok, witness = False, (forms[nf], x)
                break
            forms[nf] = x
        injectivity[tag] = (ok, witness)
        images[tag] = set(forms)
    shared_forms = {Elem(SHARED_TAG, b) for b in amalgam.shared}
    intersections = {}
    holds = all(ok for ok, _ in injectivity.values())
    for i, tag_a in enumerate(amalgam.tags):
        for tag_b in amalgam.tags[i + 1 :]:
            overlap = images[tag_a] & images[tag_b]
            ok = overlap == shared_forms
            holds = holds and ok
            intersections[(tag_a, tag_b)] = (ok, tuple(sorted(str(e) for e in overlap)))
    return StrongAmalgamationReport(holds, injectivity, intersections)
