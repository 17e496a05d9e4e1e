"""Finite ternary rings given by full operation tables.

A finite ternary ring is a carrier with two ternary operation tables
``t`` and ``q`` and two distinguished elements ``0`` and ``1`` such that

    t(0,x,y) = y     t(x,0,y) = y     t(1,x,0) = x     t(x,1,0) = x
    q(x,y,t(x,y,z)) = z              t(x,y,q(x,y,z)) = z

hold on all tuples.  The last two identities make x -> t(a,b,x) a
bijection for every a, b, with q(a,b,-) its inverse; every unital ring
gives one via t(a,b,c) = ab + c.

Carriers are tuples of element names; tables are kept both name-keyed
(for the API) and index-based (for the exhaustive inner loops elsewhere).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import BoundExceeded, ForeignElement, MalformedTable, NotARing
from .terms import App, Elem, Term, Var

#: Default cap on carrier size for congruence/ideal lattice enumeration.
DEFAULT_ENUM_BOUND = 8


class TernaryRing:
    """Immutable table-backed algebra.  Do not mutate after construction."""

    def __init__(self, carrier, t_table, q_table, zero, one, name=""):
        self.name = name
        self.carrier = tuple(carrier)
        if len(set(self.carrier)) != len(self.carrier):
            raise MalformedTable("duplicate carrier elements")
        self.index = {x: i for i, x in enumerate(self.carrier)}
        if zero not in self.index or one not in self.index:
            raise MalformedTable("distinguished elements must lie in the carrier")
        self.zero = zero
        self.one = one
        self.zero_i = self.index[zero]
        self.one_i = self.index[one]
        self.t_idx = self._to_index_table(t_table, "t")
        self.q_idx = self._to_index_table(q_table, "q")

    def _to_index_table(self, table, opname):
        n = len(self.carrier)
        out = [[[None] * n for _ in range(n)] for _ in range(n)]
        for (a, b, c) in itertools.product(self.carrier, repeat=3):
            try:
                value = table[(a, b, c)]
            except KeyError:
                raise MalformedTable("%s-table misses entry (%s,%s,%s)" % (opname, a, b, c))
            if value not in self.index:
                raise MalformedTable(
                    "%s(%s,%s,%s)=%r is not a carrier element" % (opname, a, b, c, value)
                )
            out[self.index[a]][self.index[b]][self.index[c]] = self.index[value]
        return tuple(tuple(tuple(row) for row in plane) for plane in out)

    def __repr__(self):
        label = self.name or "anonymous"
        return "TernaryRing(%s, order %d)" % (label, len(self.carrier))

    def __len__(self):
        return len(self.carrier)

    def t(self, a, b, c):
        i = self.index
        return self.carrier[self.t_idx[i[a]][i[b]][i[c]]]

    def q(self, a, b, c):
        i = self.index
        return self.carrier[self.q_idx[i[a]][i[b]][i[c]]]

    def t_by_index(self, a, b, c):
        return self.t_idx[a][b][c]

    def q_by_index(self, a, b, c):
        return self.q_idx[a][b][c]

    def table_dict(self, op: str) -> dict:
        idx = self.t_idx if op == "t" else self.q_idx
        return {
            (a, b, c): self.carrier[idx[i][j][k]]
            for (i, a), (j, b), (k, c) in itertools.product(
                enumerate(self.carrier), repeat=3
            )
        }


@dataclass(frozen=True)
class Verdict:
    valid: bool
    axiom: Optional[str] = None
    witness: Optional[tuple] = None

    def __bool__(self):
        return self.valid


#: identity label -> (argument count, checker).  Checkers take the algebra
#: and an argument tuple of indices and return the two sides as indices.
_T_AXIOM_CHECKS = (
    ("1.1", 2, lambda A, x, y: (A.t_idx[A.zero_i][x][y], y)),
    ("1.2", 2, lambda A, x, y: (A.t_idx[x][A.zero_i][y], y)),
    ("1.3", 2, lambda A, x, y: (A.t_idx[A.one_i][x][A.zero_i], x)),
    ("1.4", 2, lambda A, x, y: (A.t_idx[x][A.one_i][A.zero_i], x)),
)

_Q_AXIOM_CHECKS = (
    ("1.6", 3, lambda A, x, y, z: (A.q_idx[x][y][A.t_idx[x][y][z]], z)),
    ("1.7", 3, lambda A, x, y, z: (A.t_idx[x][y][A.q_idx[x][y][z]], z)),
)

_DERIVED_CHECKS = (
    ("3.1", lambda A, x, y: (A.q_idx[A.zero_i][x][y], y)),
    ("3.2", lambda A, x, y: (A.q_idx[x][A.zero_i][y], y)),
    ("3.3", lambda A, x, y: (A.q_idx[A.one_i][x][x], A.zero_i)),
    ("3.4", lambda A, x, y: (A.q_idx[x][A.one_i][x], A.zero_i)),
)


def validate_ternary_ring(algebra: TernaryRing) -> Verdict:
    """Check all defining identities, unique solvability of t(a,b,x)=c,
    and distinctness of 0 and 1 on nontrivial carriers.

    The four derived identities 3.1-3.4 are consequences of the defining
    ones; a violation among them is reported as ``internal:<label>`` and
    indicates an inconsistency in the checker itself.
    """
    n = len(algebra.carrier)
    rng = range(n)
    for label, argc, check in _T_AXIOM_CHECKS:
        for args in itertools.product(rng, repeat=argc):
            lhs, rhs = check(algebra, *args)
            if lhs != rhs:
                witness = tuple(algebra.carrier[i] for i in args)
                return Verdict(False, label, witness)
    for a in rng:
        for b in rng:
            if len({algebra.t_idx[a][b][c] for c in rng}) != n:
                return Verdict(
                    False, "unique-solvability", (algebra.carrier[a], algebra.carrier[b])
                )
    for label, argc, check in _Q_AXIOM_CHECKS:
        for args in itertools.product(rng, repeat=argc):
            lhs, rhs = check(algebra, *args)
            if lhs != rhs:
                witness = tuple(algebra.carrier[i] for i in args)
                return Verdict(False, label, witness)
    if n > 1 and algebra.zero == algebra.one:
        return Verdict(False, "zero-one", (algebra.zero,))
    for label, check in _DERIVED_CHECKS:
        for x, y in itertools.product(rng, repeat=2):
            lhs, rhs = check(algebra, x, y)
            if lhs != rhs:
                witness = (algebra.carrier[x], algebra.carrier[y])
                return Verdict(False, "internal:" + label, witness)
    return Verdict(True)


def _negatives(carrier, add, zero):
    neg = {}
    for a in carrier:
        for b in carrier:
            if add[(a, b)] == zero:
                neg[a] = b
                break
        else:
            raise NotARing("element %r has no additive inverse" % a)
    return neg


def check_ring_axioms(carrier, add, mul, zero, one) -> None:
    """Raise NotARing unless (carrier, add, mul, 0, 1) is an associative
    unitary ring (commutativity of mul not required)."""
    elems = tuple(carrier)
    for table, opname in ((add, "add"), (mul, "mul")):
        for pair in itertools.product(elems, repeat=2):
            if pair not in table:
                raise MalformedTable("%s-table misses entry %r" % (opname, pair))
            if table[pair] not in set(elems):
                raise MalformedTable("%s%r out of carrier" % (opname, pair))
    for a, b in itertools.product(elems, repeat=2):
        if add[(a, b)] != add[(b, a)]:
            raise NotARing("addition not commutative at (%s,%s)" % (a, b))
    for a in elems:
        if add[(zero, a)] != a:
            raise NotARing("0 is not an additive identity at %s" % a)
        if mul[(one, a)] != a or mul[(a, one)] != a:
            raise NotARing("1 is not a multiplicative identity at %s" % a)
    for a, b, c in itertools.product(elems, repeat=3):
        if add[(add[(a, b)], c)] != add[(a, add[(b, c)])]:
            raise NotARing("addition not associative at (%s,%s,%s)" % (a, b, c))
        if mul[(mul[(a, b)], c)] != mul[(a, mul[(b, c)])]:
            raise NotARing("multiplication not associative at (%s,%s,%s)" % (a, b, c))
        if mul[(a, add[(b, c)])] != add[(mul[(a, b)], mul[(a, c)])]:
            raise NotARing("left distributivity fails at (%s,%s,%s)" % (a, b, c))
        if mul[(add[(a, b)], c)] != add[(mul[(a, c)], mul[(b, c)])]:
            raise NotARing("right distributivity fails at (%s,%s,%s)" % (a, b, c))
    _negatives(elems, add, zero)


def from_unital_ring(carrier, add, mul, zero, one, name="") -> TernaryRing:
    """The ternary ring with t(a,b,c) = ab + c and q(a,b,c) = c - ab."""
    check_ring_axioms(carrier, add, mul, zero, one)
    neg = _negatives(carrier, add, zero)
    t_table = {}
    q_table = {}
    for a, b, c in itertools.product(carrier, repeat=3):
        ab = mul[(a, b)]
        t_table[(a, b, c)] = add[(ab, c)]
        q_table[(a, b, c)] = add[(c, neg[ab])]
    algebra = TernaryRing(carrier, t_table, q_table, zero, one, name=name)
    verdict = validate_ternary_ring(algebra)
    assert verdict.valid, "ring-derived tables violate %s" % verdict.axiom
    return algebra


# ---------------------------------------------------------------------------
# exhaustive enumeration at tiny orders


def _constant_normal_permutations(n, zero_i, one_i):
    """All relabelings old index -> new index sending 0 to position 0 and
    1 to position 1 (isomorphisms must preserve both constants)."""
    movable = [i for i in range(n) if i not in (zero_i, one_i)]
    slots = list(range(1 if zero_i == one_i else 2, n))
    for images in itertools.permutations(slots):
        perm = [0] * n
        perm[zero_i] = 0
        perm[one_i] = 0 if zero_i == one_i else 1
        for src, dst in zip(movable, images):
            perm[src] = dst
        yield perm


def _canonical_form(algebra: TernaryRing) -> tuple:
    """Minimal relabeling of the t-table over all constant-preserving
    carrier permutations (q is determined by t, so t alone suffices)."""
    n = len(algebra.carrier)
    best = None
    rng = range(n)
    for perm in _constant_normal_permutations(n, algebra.zero_i, algebra.one_i):
        inv = _inverse(perm)
        relabeled = tuple(
            perm[algebra.t_idx[inv[a]][inv[b]][inv[c]]]
            for a in rng
            for b in rng
            for c in rng
        )
        if best is None or relabeled < best:
            best = relabeled
    return best


def _inverse(perm):
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return inv


def are_isomorphic(a: TernaryRing, b: TernaryRing) -> bool:
    if len(a) != len(b):
        return False
    return _canonical_form(a) == _canonical_form(b)


def enumerate_ternary_rings(n: int) -> list:
    """All ternary rings on an n-element carrier, up to isomorphism.

    Exhaustive: rows forced by the defining identities are filled in and
    every remaining row ranges over the permutations compatible with
    them.  Bounded to n <= 3; the search space explodes beyond that.
    """
    if n < 1:
        raise ValueError("carrier size must be positive")
    if n > 3:
        raise BoundExceeded("exhaustive enumeration is bounded to order <= 3")
    carrier = tuple(str(i) for i in range(n))
    if n == 1:
        table = {("0", "0", "0"): "0"}
        return [TernaryRing(carrier, table, dict(table), "0", "0", name="trivial")]

    elements = list(range(n))
    identity = tuple(elements)

    def row_choices(a, b):
        # each row t(a,b,-) must be a bijection; the defining identities
        # pin some rows completely and some single entries
        if a == 0 or b == 0:
            return [identity]
        pinned = None
        if a == 1:
            pinned = b
        if b == 1:
            pinned = a if pinned is None else pinned
        perms = []
        for p in itertools.permutations(elements):
            if pinned is not None and p[0] != pinned:
                continue
            perms.append(p)
        return perms

    cells = [(a, b) for a in elements for b in elements]
    choice_lists = [row_choices(a, b) for a, b in cells]
    found = []
    seen = set()
    for rows in itertools.product(*choice_lists):
        t_table = {}
        q_table = {}
        for (a, b), perm in zip(cells, rows):
            inv = _inverse(perm)
            for c in elements:
                t_table[(carrier[a], carrier[b], carrier[c])] = carrier[perm[c]]
                q_table[(carrier[a], carrier[b], carrier[c])] = carrier[inv[c]]
        algebra = TernaryRing(carrier, t_table, q_table, "0", "1", name="T%d#%d" % (n, len(found)))
        verdict = validate_ternary_ring(algebra)
        assert verdict.valid, "enumerated table violates %s" % verdict.axiom
        key = _canonical_form(algebra)
        if key not in seen:
            seen.add(key)
            found.append(algebra)
    return found


# ---------------------------------------------------------------------------
# maps, subalgebras, congruences


class TernaryMap:
    """A carrier map between two finite ternary rings.  Nothing is assumed
    about it until checked with :func:`is_monomorphism`."""

    def __init__(self, source: TernaryRing, target: TernaryRing, mapping: dict, name=""):
        missing = set(source.carrier) - set(mapping)
        if missing:
            raise MalformedTable("map misses source elements %s" % sorted(missing))
        out = set(mapping.values()) - set(target.carrier)
        if out:
            raise MalformedTable("map hits non-elements %s" % sorted(out))
        self.source = source
        self.target = target
        self.mapping = dict(mapping)
        self.name = name or "%s->%s" % (source.name or "A", target.name or "B")

    def __call__(self, x):
        return self.mapping[x]

    def __repr__(self):
        return "TernaryMap(%s)" % self.name

    def image(self) -> set:
        return set(self.mapping.values())


def identity_map(algebra: TernaryRing) -> TernaryMap:
    return TernaryMap(algebra, algebra, {x: x for x in algebra.carrier}, name="id")


def is_monomorphism(f: TernaryMap):
    """(ok, witness): injective and preserves t, q, 0 and 1.  The witness
    names the first failure found."""
    src, dst, m = f.source, f.target, f.mapping
    seen = {}
    for x in src.carrier:
        if m[x] in seen:
            return False, ("not-injective", (seen[m[x]], x))
        seen[m[x]] = x
    if m[src.zero] != dst.zero:
        return False, ("zero", (src.zero, m[src.zero]))
    if m[src.one] != dst.one:
        return False, ("one", (src.one, m[src.one]))
    for a, b, c in itertools.product(src.carrier, repeat=3):
        if m[src.t(a, b, c)] != dst.t(m[a], m[b], m[c]):
            return False, ("t", (a, b, c))
        if m[src.q(a, b, c)] != dst.q(m[a], m[b], m[c]):
            return False, ("q", (a, b, c))
    return True, None


def ternary_monomorphisms(source: TernaryRing, target: TernaryRing) -> list:
    """All monomorphisms between two table algebras, by brute force over
    injections that send 0 to 0 and 1 to 1."""
    if len(source) > len(target):
        return []
    free_src = [x for x in source.carrier if x not in (source.zero, source.one)]
    free_dst = [y for y in target.carrier if y not in (target.zero, target.one)]
    base = {source.zero: target.zero, source.one: target.one}
    out = []
    for images in itertools.permutations(free_dst, len(free_src)):
        mapping = dict(base)
        mapping.update(zip(free_src, images))
        candidate = TernaryMap(source, target, mapping)
        ok, _ = is_monomorphism(candidate)
        if ok:
            out.append(candidate)
    return out


def subalgebra_generated(algebra: TernaryRing, elements: Iterable) -> set:
    """Least subset containing the given elements plus 0 and 1, closed
    under both operations."""
    current = set(elements) | {algebra.zero, algebra.one}
    foreign = current - set(algebra.carrier)
    if foreign:
        raise ForeignElement("not carrier elements: %s" % sorted(foreign))
    while True:
        new = set()
        pool = sorted(current, key=algebra.index.get)
        for a, b, c in itertools.product(pool, repeat=3):
            for val in (algebra.t(a, b, c), algebra.q(a, b, c)):
                if val not in current:
                    new.add(val)
        if not new:
            return current
        current |= new


def is_subuniverse(algebra: TernaryRing, elements: set) -> bool:
    """True iff the subset contains 0, 1 and is closed under t and q."""
    if algebra.zero not in elements or algebra.one not in elements:
        return False
    for a, b, c in itertools.product(sorted(elements, key=algebra.index.get), repeat=3):
        if algebra.t(a, b, c) not in elements or algebra.q(a, b, c) not in elements:
            return False
    return True


@dataclass(frozen=True)
class Congruence:
    """A compatible partition, blocks canonically ordered."""

    blocks: tuple  # of tuples of element names

    def block_of(self, x):
        for block in self.blocks:
            if x in block:
                return block
        raise KeyError(x)

    def relates(self, x, y) -> bool:
        return y in self.block_of(x)

    def __len__(self):
        return len(self.blocks)


def _canonical_blocks(algebra: TernaryRing, class_of: list) -> tuple:
    groups: dict = {}
    for i, root in enumerate(class_of):
        groups.setdefault(root, []).append(i)
    blocks = sorted(groups.values(), key=lambda blk: blk[0])
    return tuple(tuple(algebra.carrier[i] for i in blk) for blk in blocks)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if ry < rx:
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True


def _congruence_close(algebra: TernaryRing, pairs) -> tuple:
    """Smallest compatible partition relating the given index pairs;
    returns the root of each element."""
    n = len(algebra.carrier)
    uf = _UnionFind(n)
    queue = [p for p in pairs if uf.union(*p)]
    rng = range(n)
    tables = (algebra.t_idx, algebra.q_idx)
    while queue:
        x, y = queue.pop()
        for table in tables:
            for u in rng:
                for v in rng:
                    for lhs, rhs in (
                        (table[x][u][v], table[y][u][v]),
                        (table[u][x][v], table[u][y][v]),
                        (table[u][v][x], table[u][v][y]),
                    ):
                        if uf.union(lhs, rhs):
                            queue.append((lhs, rhs))
    return tuple(uf.find(i) for i in rng)


def congruences(algebra: TernaryRing, bound: int = DEFAULT_ENUM_BOUND) -> list:
    """All congruences, as the join closure of the principal ones.

    The lattice blows up with the carrier, hence the bound (default 8).
    """
    n = len(algebra.carrier)
    if n > bound:
        raise BoundExceeded("carrier size %d exceeds congruence bound %d" % (n, bound))
    cache = algebra.__dict__.setdefault("_cache", {})
    if "congruences" in cache:
        return list(cache["congruences"])
    identity = tuple(range(n))
    found = {identity}
    frontier = {identity}
    for a in range(n):
        for b in range(a + 1, n):
            frontier.add(_congruence_close(algebra, [(a, b)]))
    found |= frontier
    while frontier:
        fresh = set()
        for theta in frontier:
            for other in list(found):
                pairs = [(i, theta[i]) for i in range(n)] + [(i, other[i]) for i in range(n)]
                joined = _congruence_close(algebra, pairs)
                if joined not in found and joined not in fresh:
                    fresh.add(joined)
        found |= fresh
        frontier = fresh
    result = [Congruence(_canonical_blocks(algebra, list(roots))) for roots in found]
    result.sort(key=lambda c: (len(c.blocks), c.blocks))
    cache["congruences"] = tuple(result)
    return result


# ---------------------------------------------------------------------------
# ground evaluation


def evaluate(algebra: TernaryRing, term: Term):
    """Value of a ground term: operation symbols via the tables, element
    constants as themselves.  Variables are rejected."""
    if isinstance(term, Var):
        raise ValueError("cannot evaluate the variable %r" % term.name)
    if isinstance(term, Elem):
        if term.name not in algebra.index:
            raise ForeignElement("%s is not an element of %r" % (term, algebra))
        return term.name
    if term.symbol == "0":
        return algebra.zero
    if term.symbol == "1":
        return algebra.one
    args = [evaluate(algebra, a) for a in term.args]
    if term.symbol == "t":
        return algebra.t(*args)
    if term.symbol == "q":
        return algebra.q(*args)
    raise ValueError("unknown operation symbol %r" % term.symbol)
