"""Finite commutative rings viewed as ternary rings.

Every unital ring gives a ternary ring via t(a,b,c) = ab + c, and under
this translation the 0-ideals are exactly the ring ideals; the three
closure terms specialize to

    w1(x,y) = -y      w2(x1,x2,x3,y) = y
    w3(x1,x2,x3,y1,y2,y3) = x1*y2 + y1*x2 + y1*y2 + y3.

This module checks both facts exhaustively on a corpus of small rings,
decides purity of ring monomorphisms (for finite modules, purity is
equivalent to the source being a direct summand, i.e. to the existence
of a module retraction), and compares the class of pure monomorphisms
with the class of monomorphisms that are effective codescent as
ternary-ring maps: on rings the latter is exactly the classical ideal
extension property.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .algebras import TernaryMap, TernaryRing, from_unital_ring
from .errors import BoundExceeded, NotARing
from .ideals import (
    eval_ideal_term,
    has_ideal_extension,
    is_effective_codescent,
    zero_ideals,
)

#: Ring ideal enumeration scans all subsets; 2^n gets silly beyond this.
RING_IDEAL_BOUND = 10


class CommRing:
    """Commutative associative unitary ring given by full tables."""

    def __init__(self, carrier, add, mul, zero, one, name=""):
        self.name = name
        self.carrier = tuple(carrier)
        self.index = {x: i for i, x in enumerate(self.carrier)}
        self.zero = zero
        self.one = one
        self.add = dict(add)
        self.mul = dict(mul)
        for a, b in itertools.product(self.carrier, repeat=2):
            if self.mul[(a, b)] != self.mul[(b, a)]:
                raise NotARing("multiplication not commutative at (%s,%s)" % (a, b))
        self.neg = {}
        for a in self.carrier:
            for b in self.carrier:
                if self.add[(a, b)] == zero:
                    self.neg[a] = b
                    break
        # full ring axioms (associativity, distributivity, identities,
        # inverses) are re-checked by the ternary translation below
        self._ternary = from_unital_ring(
            self.carrier, self.add, self.mul, zero, one, name=name
        )

    def __repr__(self):
        return "CommRing(%s, order %d)" % (self.name or "anonymous", len(self.carrier))

    def __len__(self):
        return len(self.carrier)

    def plus(self, a, b):
        return self.add[(a, b)]

    def times(self, a, b):
        return self.mul[(a, b)]

    def minus(self, a):
        return self.neg[a]


def as_ternary(ring: CommRing) -> TernaryRing:
    """The table translation t(a,b,c) = ab + c, q(a,b,c) = c - ab."""
    return ring._ternary


# ---------------------------------------------------------------------------
# bundled constructors


def cyclic_ring(n: int) -> CommRing:
    carrier = [str(i) for i in range(n)]
    add = {(str(a), str(b)): str((a + b) % n) for a in range(n) for b in range(n)}
    mul = {(str(a), str(b)): str((a * b) % n) for a in range(n) for b in range(n)}
    return CommRing(carrier, add, mul, "0", "1", name="Z%d" % n)


def product_ring(left: CommRing, right: CommRing, name="") -> CommRing:
    carrier = [
        "(%s,%s)" % (a, b) for a in left.carrier for b in right.carrier
    ]

    def pair(a, b):
        return "(%s,%s)" % (a, b)

    add = {}
    mul = {}
    for a1, b1 in itertools.product(left.carrier, right.carrier):
        for a2, b2 in itertools.product(left.carrier, right.carrier):
            key = (pair(a1, b1), pair(a2, b2))
            add[key] = pair(left.plus(a1, a2), right.plus(b1, b2))
            mul[key] = pair(left.times(a1, a2), right.times(b1, b2))
    return CommRing(
        carrier,
        add,
        mul,
        pair(left.zero, right.zero),
        pair(left.one, right.one),
        name=name or "%sx%s" % (left.name, right.name),
    )


def _f2_vector_ring(basis, mul_rule, name) -> CommRing:
    """Ring structure on F2-vectors over a basis whose first entry is 1;
    mul_rule maps a pair of basis indices to a set of basis indices."""
    dim = len(basis)
    vectors = list(itertools.product((0, 1), repeat=dim))

    def label(vec):
        parts = [basis[i] for i, bit in enumerate(vec) if bit]
        return "+".join(parts) if parts else "0"

    def vec_add(u, v):
        return tuple((a + b) % 2 for a, b in zip(u, v))

    def vec_mul(u, v):
        out = [0] * dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                for k in mul_rule[(i, j)]:
                    out[k] = (out[k] + 1) % 2
        return tuple(out)

    names = {v: label(v) for v in vectors}
    carrier = [names[v] for v in vectors]
    add = {}
    mul = {}
    for u in vectors:
        for v in vectors:
            add[(names[u], names[v])] = names[vec_add(u, v)]
            mul[(names[u], names[v])] = names[vec_mul(u, v)]
    one = names[(1,) + (0,) * (dim - 1)]
    return CommRing(carrier, add, mul, "0", one, name=name)


def galois_field_4() -> CommRing:
    # basis (1, a) with a^2 = a + 1
    rule = {(0, 0): (0,), (0, 1): (1,), (1, 0): (1,), (1, 1): (0, 1)}
    return _f2_vector_ring(["1", "a"], rule, "F4")


def f2_dual_numbers() -> CommRing:
    # basis (1, e) with e^2 = 0
    rule = {(0, 0): (0,), (0, 1): (1,), (1, 0): (1,), (1, 1): ()}
    return _f2_vector_ring(["1", "e"], rule, "F2[e]")


def f2_square_zero_pair() -> CommRing:
    # basis (1, a, b) with a^2 = b^2 = ab = 0
    rule = {
        (0, 0): (0,),
        (0, 1): (1,),
        (0, 2): (2,),
        (1, 0): (1,),
        (2, 0): (2,),
        (1, 1): (),
        (1, 2): (),
        (2, 1): (),
        (2, 2): (),
    }
    return _f2_vector_ring(["1", "a", "b"], rule, "F2[a,b]")


def _ring_canonical_form(ring: CommRing) -> tuple:
    from .algebras import _constant_normal_permutations

    n = len(ring.carrier)
    idx = ring.index
    add_idx = [[idx[ring.plus(a, b)] for b in ring.carrier] for a in ring.carrier]
    mul_idx = [[idx[ring.times(a, b)] for b in ring.carrier] for a in ring.carrier]
    best = None
    for perm in _constant_normal_permutations(n, idx[ring.zero], idx[ring.one]):
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p] = i
        key = tuple(
            (perm[add_idx[inv[a]][inv[b]]], perm[mul_idx[inv[a]][inv[b]]])
            for a in range(n)
            for b in range(n)
        )
        if best is None or key < best:
            best = key
    return best


def default_ring_corpus(max_order: int = 8) -> list:
    """Every ring of order <= max_order expressible from the bundled
    constructors (cyclic rings, F4, the two square-zero quotients, and
    products thereof), deduplicated up to isomorphism."""
    base = [cyclic_ring(n) for n in range(2, max_order + 1)]
    base += [galois_field_4(), f2_dual_numbers(), f2_square_zero_pair()]
    pool = {}

    def register(ring):
        if len(ring) > max_order:
            return False
        key = (len(ring), _ring_canonical_form(ring))
        if key in pool:
            return False
        pool[key] = ring
        return True

    for ring in base:
        register(ring)
    changed = True
    while changed:
        changed = False
        current = list(pool.values())
        for left in current:
            for right in current:
                if len(left) * len(right) <= max_order:
                    changed = register(product_ring(left, right)) or changed
    return sorted(pool.values(), key=lambda r: (len(r), r.name))


# ---------------------------------------------------------------------------
# ideals and the translation checks


def ring_ideals(ring: CommRing) -> list:
    """All ideals: subsets containing 0, closed under addition and under
    multiplication by arbitrary ring elements."""
    n = len(ring.carrier)
    if n > RING_IDEAL_BOUND:
        raise BoundExceeded("ring ideal scan bounded to order %d" % RING_IDEAL_BOUND)
    zero_bit = 1 << ring.index[ring.zero]
    out = []
    for mask in range(1, 2 ** n):
        if not mask & zero_bit:
            continue
        subset = [ring.carrier[i] for i in range(n) if mask & (1 << i)]
        inside = set(subset)
        ok = all(ring.plus(a, b) in inside for a in subset for b in subset) and all(
            ring.times(a, r) in inside for a in subset for r in ring.carrier
        )
        if ok:
            out.append(frozenset(inside))
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def ideal_translation_check(ring: CommRing) -> tuple:
    """(ok, witness): the 0-ideals of the ternary translation coincide
    with the ring ideals, as sets of subsets."""
    as_ring = {frozenset(i) for i in ring_ideals(ring)}
    as_ternary_sets = {i.elements for i in zero_ideals(as_ternary(ring))}
    if as_ring == as_ternary_sets:
        return True, None
    return False, {
        "ring_only": sorted(map(sorted, as_ring - as_ternary_sets)),
        "ternary_only": sorted(map(sorted, as_ternary_sets - as_ring)),
    }


def closure_term_forms_check(ring: CommRing) -> tuple:
    """(ok, witness): the generic closure terms agree with their ring
    closed forms on every argument tuple."""
    algebra = as_ternary(ring)
    elems = ring.carrier
    for x, y in itertools.product(elems, repeat=2):
        if eval_ideal_term(algebra, 1, (x, y)) != ring.minus(y):
            return False, (1, (x, y))
    for args in itertools.product(elems, repeat=4):
        if eval_ideal_term(algebra, 2, args) != args[3]:
            return False, (2, args)
    plus, times = ring.plus, ring.times
    for args in itertools.product(elems, repeat=6):
        x1, x2, x3, y1, y2, y3 = args
        expected = plus(
            plus(plus(times(x1, y2), times(y1, x2)), times(y1, y2)), y3
        )
        if eval_ideal_term(algebra, 3, args) != expected:
            return False, (3, args)
    return True, None


# ---------------------------------------------------------------------------
# monomorphisms, purity, class comparison


@dataclass(frozen=True)
class RingMono:
    source: CommRing
    target: CommRing
    mapping: tuple  # of (source element, target element) pairs

    @property
    def name(self):
        return "%s>->%s[%s]" % (
            self.source.name,
            self.target.name,
            ",".join("%s:%s" % pair for pair in self.mapping),
        )

    def as_dict(self) -> dict:
        return dict(self.mapping)

    def __call__(self, x):
        return self.as_dict()[x]

    def as_ternary_map(self) -> TernaryMap:
        return TernaryMap(
            as_ternary(self.source), as_ternary(self.target), self.as_dict(), name=self.name
        )


def unital_ring_monomorphisms(source: CommRing, target: CommRing) -> list:
    """All injective unital ring homomorphisms, by brute force over
    injections fixing 0 and 1."""
    if len(source) > len(target):
        return []
    free_src = [x for x in source.carrier if x not in (source.zero, source.one)]
    free_dst = [y for y in target.carrier if y not in (target.zero, target.one)]
    out = []
    for images in itertools.permutations(free_dst, len(free_src)):
        mapping = {source.zero: target.zero, source.one: target.one}
        mapping.update(zip(free_src, images))
        ok = True
        for a, b in itertools.product(source.carrier, repeat=2):
            if mapping[source.plus(a, b)] != target.plus(mapping[a], mapping[b]):
                ok = False
                break
            if mapping[source.times(a, b)] != target.times(mapping[a], mapping[b]):
                ok = False
                break
        if ok:
            out.append(
                RingMono(source, target, tuple(sorted(mapping.items())))
            )
    return out


def _additive_closure(ring: CommRing, seed) -> set:
    span = set(seed) | {ring.zero}
    while True:
        new = {ring.plus(a, b) for a in span for b in span} - span
        if not new:
            return span
        span |= new


def _additive_generators(ring: CommRing) -> list:
    span = {ring.zero}
    gens = []
    for x in ring.carrier:
        if x not in span:
            gens.append(x)
            span = _additive_closure(ring, span | {x})
    return gens


def _extend_additively(ring: CommRing, assignment: dict, target: CommRing) -> Optional[dict]:
    """Extend a map defined on additive generators of ``ring`` to the
    whole carrier by following sums; None if the extension is inconsistent.

    The values live in ``target``.
    """
    values = {ring.zero: target.zero}
    values.update(assignment)
    changed = True
    while changed:
        changed = False
        known = list(values.items())
        for (a, va), (b, vb) in itertools.product(known, repeat=2):
            s = ring.plus(a, b)
            vs = target.plus(va, vb)
            if s in values:
                if values[s] != vs:
                    return None
            else:
                values[s] = vs
                changed = True
    if len(values) != len(ring.carrier):
        return None
    return values


def is_pure(mono: RingMono) -> tuple:
    """(ok, retraction): purity of a monomorphism of finite rings, decided
    by searching for a source-module retraction of it.

    For finite modules pure submodules are exactly direct summands, so
    purity holds iff some additive, source-linear left inverse exists.
    The search assigns values on additive generators of the target and
    extends by additivity.
    """
    p = mono.as_dict()
    source, target = mono.source, mono.target
    gens = _additive_generators(target)
    for images in itertools.product(source.carrier, repeat=len(gens)):
        candidate = _extend_additively(target, dict(zip(gens, images)), source)
        if candidate is None:
            continue
        ok = all(candidate[p[a]] == a for a in source.carrier) and all(
            candidate[target.times(p[a], s)] == source.times(a, candidate[s])
            for a in source.carrier
            for s in target.carrier
        )
        if ok:
            return True, dict(candidate)
    return False, None


@dataclass
class ClassEntry:
    mono: RingMono
    pure: bool
    ideal_extension: bool
    effective_codescent: bool


@dataclass
class ClassComparisonReport:
    entries: list = field(default_factory=list)
    containment_ok: bool = True  # pure implies ideal extension throughout
    strict: list = field(default_factory=list)  # ideal extension but not pure

    def __bool__(self):
        return self.containment_ok


def compare_descent_classes(monos) -> ClassComparisonReport:
    """Tag every monomorphism with (pure, ideal-extension, effective) and
    check the containment pure => ideal-extension.

    Entries with the ideal extension property that are not pure are
    collected in ``strict``; an empty list is a legitimate outcome at
    these orders and is reported as such.
    """
    report = ClassComparisonReport()
    for mono in monos:
        pure, _ = is_pure(mono)
        tmap = mono.as_ternary_map()
        extends, _ = has_ideal_extension(tmap)
        verdict = is_effective_codescent(tmap)
        entry = ClassEntry(mono, pure, extends, verdict.effective)
        report.entries.append(entry)
        if pure and not extends:
            report.containment_ok = False
        if extends and not pure:
            report.strict.append(entry)
    return report
