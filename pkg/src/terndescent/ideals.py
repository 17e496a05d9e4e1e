"""0-ideals of finite ternary rings and the codescent decision procedure.

A nonempty subset is a 0-ideal iff it is closed under three fixed terms
(parameters a range over the whole algebra, parameters h over the subset):

    w1(a1,h1)             = q(1, t(1,a1,h1), a1)
    w2(a1,a2,a3,h1)       = q(1, a3, q(a1, a2, t(1, t(a1,a2,a3), h1)))
    w3(a1,a2,a3,h1,h2,h3) = q(1, t(a1,a2,a3),
                              t(t(1,a1,h1), t(1,a2,h2), t(1,a3,h3)))

Iterating these from a seed set yields the smallest 0-ideal containing
it.  A monomorphism is an effective codescent morphism iff every 0-ideal
of the source is recovered by pulling back the closure of its image in
the target; on small carriers this is cross-checked against the
congruence extension and ideal extension properties, which are
equivalent to it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .algebras import (
    DEFAULT_ENUM_BOUND,
    TernaryMap,
    TernaryRing,
    congruences,
    is_monomorphism,
)
from .errors import BoundExceeded, ForeignElement, NotAMonomorphism
from .terms import parse_term

#: Above this carrier size the exhaustive subset scan is skipped and
#: 0-ideals are read off congruence 0-blocks only.
SUBSET_SCAN_BOUND = 6

#: Defining terms of the closure operators, usable for display and for
#: slow-path evaluation through the generic term evaluator.
IDEAL_TERMS = {
    1: parse_term("(q 1 (t 1 x1 y1) x1)"),
    2: parse_term("(q 1 x3 (q x1 x2 (t 1 (t x1 x2 x3) y1)))"),
    3: parse_term("(q 1 (t x1 x2 x3) (t (t 1 x1 y1) (t 1 x2 y2) (t 1 x3 y3)))"),
}

IDEAL_TERM_ARITY = {1: 2, 2: 4, 3: 6}


class _Ops:
    """Index-based evaluators for the three closure terms of one algebra."""

    def __init__(self, algebra: TernaryRing):
        t, q = algebra.t_idx, algebra.q_idx
        one = algebra.one_i
        n = len(algebra.carrier)
        self.t = t
        self.q1 = q[one]
        # u[a][h] = t(1,a,h), the recurring building block
        self.u = tuple(tuple(t[one][a][h] for h in range(n)) for a in range(n))
        self.q = q
        self.one = one

    def w1(self, a1, h1):
        return self.q1[self.u[a1][h1]][a1]

    def w2(self, a1, a2, a3, h1):
        inner = self.q[a1][a2][self.u[self.t[a1][a2][a3]][h1]]
        return self.q1[a3][inner]

    def w3(self, a1, a2, a3, h1, h2, h3):
        u = self.u
        return self.q1[self.t[a1][a2][a3]][self.t[u[a1][h1]][u[a2][h2]][u[a3][h3]]]


def _ops(algebra: TernaryRing) -> _Ops:
    cache = algebra.__dict__.setdefault("_cache", {})
    if "ideal_ops" not in cache:
        cache["ideal_ops"] = _Ops(algebra)
    return cache["ideal_ops"]


def eval_ideal_term(algebra: TernaryRing, which: int, args) -> str:
    """Evaluate closure term 1, 2 or 3 on named elements."""
    if which not in IDEAL_TERM_ARITY:
        raise ValueError("no closure term %r" % which)
    args = tuple(args)
    if len(args) != IDEAL_TERM_ARITY[which]:
        raise ValueError(
            "closure term %d takes %d arguments, got %d"
            % (which, IDEAL_TERM_ARITY[which], len(args))
        )
    foreign = [a for a in args if a not in algebra.index]
    if foreign:
        raise ForeignElement("not carrier elements: %s" % foreign)
    ops = _ops(algebra)
    idx = [algebra.index[a] for a in args]
    fn = (None, ops.w1, ops.w2, ops.w3)[which]
    return algebra.carrier[fn(*idx)]


def is_zero_ideal(algebra: TernaryRing, subset) -> tuple:
    """(ok, witness): closure of the subset under all three terms, with
    a parameters ranging over the carrier and h parameters over the
    subset.  The witness is the first escaping instance (which, args,
    value)."""
    members = frozenset(subset)
    if not members:
        raise ValueError("the empty set is not a 0-ideal candidate")
    foreign = members - set(algebra.carrier)
    if foreign:
        raise ForeignElement("not carrier elements: %s" % sorted(foreign))
    ops = _ops(algebra)
    names = algebra.carrier
    inside = [False] * len(names)
    for x in members:
        inside[algebra.index[x]] = True
    hs = sorted(algebra.index[x] for x in members)
    rng = range(len(names))

    for a1 in rng:
        for h1 in hs:
            v = ops.w1(a1, h1)
            if not inside[v]:
                return False, (1, (names[a1], names[h1]), names[v])
    for a1 in rng:
        for a2 in rng:
            for a3 in rng:
                for h1 in hs:
                    v = ops.w2(a1, a2, a3, h1)
                    if not inside[v]:
                        return False, (
                            2,
                            (names[a1], names[a2], names[a3], names[h1]),
                            names[v],
                        )
    for a1 in rng:
        for a2 in rng:
            for a3 in rng:
                u1 = ops.u[a1]
                u2 = ops.u[a2]
                u3 = ops.u[a3]
                row = ops.q1[ops.t[a1][a2][a3]]
                t = ops.t
                for h1 in hs:
                    m1 = u1[h1]
                    for h2 in hs:
                        plane = t[m1][u2[h2]]
                        for h3 in hs:
                            v = row[plane[u3[h3]]]
                            if not inside[v]:
                                return False, (
                                    3,
                                    (
                                        names[a1],
                                        names[a2],
                                        names[a3],
                                        names[h1],
                                        names[h2],
                                        names[h3],
                                    ),
                                    names[v],
                                )
    return True, None


@dataclass(frozen=True)
class ZeroIdeal:
    algebra: TernaryRing
    elements: frozenset

    def __contains__(self, x):
        return x in self.elements

    def sorted(self) -> tuple:
        return tuple(sorted(self.elements, key=self.algebra.index.get))


@dataclass(frozen=True)
class ClosureTrace:
    """Stages of the closure iteration.  Stages are strictly increasing;
    the last one is the fixpoint.  ``provenance[i]`` records, for each
    element first reached at stage i+1, one witnessing instance
    (element, which, args)."""

    algebra: TernaryRing
    stages: tuple  # of frozensets
    provenance: tuple  # len(stages) - 1 tuples of (element, which, args)

    @property
    def final(self) -> frozenset:
        return self.stages[-1]

    def __len__(self):
        return len(self.stages)


def ideal_closure(algebra: TernaryRing, seed) -> ClosureTrace:
    """Iterate the closure terms from the seed until the set stabilizes.

    The final stage is the smallest 0-ideal containing the seed.  Each
    stage applies the terms with h parameters drawn from the previous
    stage only.
    """
    current = frozenset(seed)
    if not current:
        raise ValueError("closure needs a nonempty seed")
    foreign = current - set(algebra.carrier)
    if foreign:
        raise ForeignElement("not carrier elements: %s" % sorted(foreign))
    ops = _ops(algebra)
    names = algebra.carrier
    rng = range(len(names))
    stages = [current]
    provenance = []
    while True:
        known = set(algebra.index[x] for x in current)
        hs = sorted(known)
        added: dict = {}

        def record(v, which, arg_idx):
            if v not in known and v not in added:
                added[v] = (which, tuple(names[i] for i in arg_idx))

        for a1 in rng:
            for h1 in hs:
                record(ops.w1(a1, h1), 1, (a1, h1))
        for a1 in rng:
            for a2 in rng:
                for a3 in rng:
                    for h1 in hs:
                        record(ops.w2(a1, a2, a3, h1), 2, (a1, a2, a3, h1))
        for a1 in rng:
            for a2 in rng:
                for a3 in rng:
                    for h1 in hs:
                        for h2 in hs:
                            for h3 in hs:
                                record(
                                    ops.w3(a1, a2, a3, h1, h2, h3),
                                    3,
                                    (a1, a2, a3, h1, h2, h3),
                                )
        if not added:
            break
        provenance.append(
            tuple((names[v], which, args) for v, (which, args) in sorted(added.items()))
        )
        current = current | {names[v] for v in added}
        stages.append(current)
    return ClosureTrace(algebra, tuple(stages), tuple(provenance))


def congruence_zero_blocks(algebra: TernaryRing, bound: int = DEFAULT_ENUM_BOUND) -> list:
    """The block of 0 in each congruence (duplicates kept, for the
    uniqueness cross-check)."""
    return [frozenset(c.block_of(algebra.zero)) for c in congruences(algebra, bound)]


def zero_ideals(algebra: TernaryRing, bound: int = DEFAULT_ENUM_BOUND) -> list:
    """All 0-ideals.

    Carriers up to SUBSET_SCAN_BOUND are scanned subset by subset; up to
    ``bound`` they are also (or only) read off congruence 0-blocks.  When
    both routes run their results must agree.
    """
    n = len(algebra.carrier)
    if n > bound and n > SUBSET_SCAN_BOUND:
        raise BoundExceeded("carrier size %d exceeds ideal enumeration bounds" % n)
    cache = algebra.__dict__.setdefault("_cache", {})
    if "zero_ideals" in cache:
        return list(cache["zero_ideals"])

    by_scan = None
    if n <= SUBSET_SCAN_BOUND:
        by_scan = set()
        for mask in range(1, 2 ** n):
            subset = frozenset(
                algebra.carrier[i] for i in range(n) if mask & (1 << i)
            )
            ok, _ = is_zero_ideal(algebra, subset)
            if ok:
                by_scan.add(subset)
    by_blocks = None
    if n <= bound:
        by_blocks = set(congruence_zero_blocks(algebra, bound))
    if by_scan is not None and by_blocks is not None and by_scan != by_blocks:
        raise RuntimeError(
            "0-ideal routes disagree on %r: scan %s vs blocks %s"
            % (algebra, sorted(map(sorted, by_scan)), sorted(map(sorted, by_blocks)))
        )
    subsets = by_scan if by_scan is not None else by_blocks
    result = [
        ZeroIdeal(algebra, s)
        for s in sorted(subsets, key=lambda s: (len(s), sorted(s)))
    ]
    cache["zero_ideals"] = tuple(result)
    return result


# ---------------------------------------------------------------------------
# extension properties along a monomorphism


def _require_mono(p: TernaryMap) -> None:
    ok, witness = is_monomorphism(p)
    if not ok:
        raise NotAMonomorphism("map %s is not a monomorphism: %r" % (p.name, witness))


def _restrict_blocks(blocks, image: set) -> frozenset:
    return frozenset(
        frozenset(b for b in block if b in image) for block in blocks
    ) - {frozenset()}


def has_congruence_extension(p: TernaryMap, bound: int = DEFAULT_ENUM_BOUND) -> tuple:
    """(ok, witnesses): every congruence of the source is the restriction
    of some congruence of the target.  Witnesses map source congruences
    to extending target congruences; on failure the second component is
    the unextendable congruence."""
    _require_mono(p)
    image = p.image()
    source_congruences = congruences(p.source, bound)
    target_congruences = congruences(p.target, bound)
    witnesses = {}
    for theta in source_congruences:
        pushed = frozenset(frozenset(p(b) for b in block) for block in theta.blocks)
        for theta_prime in target_congruences:
            if _restrict_blocks(theta_prime.blocks, image) == pushed:
                witnesses[theta] = theta_prime
                break
        else:
            return False, theta
    return True, witnesses


def has_ideal_extension(p: TernaryMap, bound: int = DEFAULT_ENUM_BOUND) -> tuple:
    """(ok, witnesses): every 0-ideal of the source is the preimage of
    some 0-ideal of the target."""
    _require_mono(p)
    image = p.image()
    target_ideals = zero_ideals(p.target, bound)
    witnesses = {}
    for ideal in zero_ideals(p.source, bound):
        pushed = frozenset(p(x) for x in ideal.elements)
        for candidate in target_ideals:
            if candidate.elements & image == pushed:
                witnesses[ideal.sorted()] = candidate.sorted()
                break
        else:
            return False, ideal.sorted()
    return True, witnesses


def closure_condition(p: TernaryMap, bound: int = DEFAULT_ENUM_BOUND) -> tuple:
    """(ok, traces, counterexample): for each 0-ideal I of the source,
    close its image in the target and pull back; the pullback must be I.

    Needs only the source's ideal lattice, so the target may exceed the
    enumeration bound.
    """
    _require_mono(p)
    traces = {}
    counterexample = None
    ok = True
    for ideal in zero_ideals(p.source, bound):
        pushed = {p(x) for x in ideal.elements}
        trace = ideal_closure(p.target, pushed)
        traces[ideal.sorted()] = trace
        pullback = frozenset(x for x in p.source.carrier if p(x) in trace.final)
        if pullback != ideal.elements:
            ok = False
            counterexample = {
                "ideal": ideal.sorted(),
                "closure": tuple(sorted(trace.final, key=p.target.index.get)),
                "pullback": tuple(sorted(pullback, key=p.source.index.get)),
            }
            break
    return ok, traces, counterexample


@dataclass
class MorphismVerdict:
    morphism: TernaryMap
    effective: bool
    condition_v: bool
    condition_iii: Optional[bool] = None
    condition_iv: Optional[bool] = None
    witnesses: dict = field(default_factory=dict)
    counterexample: Optional[dict] = None
    traces: dict = field(default_factory=dict)

    def __bool__(self):
        return self.effective


def is_effective_codescent(p: TernaryMap, bound: int = DEFAULT_ENUM_BOUND) -> MorphismVerdict:
    """Decide effective codescent for a monomorphism via the closure
    condition; within enumeration bounds the congruence and ideal
    extension properties are computed too and must agree with it."""
    _require_mono(p)
    ok_v, traces, counterexample = closure_condition(p, bound)
    witnesses = {}
    if ok_v:
        witnesses = {
            ideal: tuple(sorted(trace.final, key=p.target.index.get))
            for ideal, trace in traces.items()
        }
    verdict = MorphismVerdict(
        morphism=p,
        effective=ok_v,
        condition_v=ok_v,
        witnesses=witnesses,
        counterexample=counterexample,
        traces=traces,
    )
    if len(p.source.carrier) <= bound and len(p.target.carrier) <= bound:
        ok_iii, _ = has_congruence_extension(p, bound)
        ok_iv, _ = has_ideal_extension(p, bound)
        verdict.condition_iii = ok_iii
        verdict.condition_iv = ok_iv
        if not ok_iii == ok_iv == ok_v:
            raise RuntimeError(
                "equivalent codescent conditions disagree on %s: "
                "congruence-extension=%s ideal-extension=%s closure=%s"
                % (p.name, ok_iii, ok_iv, ok_v)
            )
    return verdict
