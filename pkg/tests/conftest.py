import itertools
import random

import pytest

from terndescent.algebras import TernaryRing
from terndescent.amalgams import copies_amalgam
from terndescent.rings import (
    as_ternary,
    cyclic_ring,
    f2_dual_numbers,
    f2_square_zero_pair,
    galois_field_4,
    product_ring,
)
from terndescent.terms import App, Var


@pytest.fixture(scope="session")
def z2():
    return cyclic_ring(2)


@pytest.fixture(scope="session")
def z3():
    return cyclic_ring(3)


@pytest.fixture(scope="session")
def z4():
    return cyclic_ring(4)


@pytest.fixture(scope="session")
def f4():
    return galois_field_4()


@pytest.fixture(scope="session")
def z2z2(z2):
    return product_ring(z2, z2)


@pytest.fixture(scope="session")
def f2e():
    return f2_dual_numbers()


@pytest.fixture(scope="session")
def f2ab():
    return f2_square_zero_pair()


@pytest.fixture(scope="session")
def tz2(z2):
    return as_ternary(z2)


@pytest.fixture(scope="session")
def tz4(z4):
    return as_ternary(z4)


@pytest.fixture(scope="session")
def tf2e(f2e):
    return as_ternary(f2e)


@pytest.fixture(scope="session")
def tz2z2(z2z2):
    return as_ternary(z2z2)


@pytest.fixture(scope="session")
def two_copy(tf2e):
    return copies_amalgam(tf2e, 2, ["0", "1"])


@pytest.fixture(scope="session")
def three_copy(tf2e):
    return copies_amalgam(tf2e, 3, ["0", "1"])


def random_pattern_term(rng: random.Random, depth: int, variables=("x", "y", "z", "w")):
    """Seeded generator of rule-level terms (variables and constants)."""
    leaves = [Var(v) for v in variables] + [App("0"), App("1")]
    if depth <= 0:
        return leaves[rng.randrange(len(leaves))]
    choices = ["t", "q"] + leaves
    pick = choices[rng.randrange(len(choices))]
    if not isinstance(pick, str):
        return pick
    return App(pick, tuple(random_pattern_term(rng, depth - 1, variables) for _ in range(3)))


def all_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in all_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def compatible_partition(algebra: TernaryRing, blocks) -> bool:
    """Partition compatibility by brute force, the congruence oracle."""
    cls = {}
    for i, block in enumerate(blocks):
        for x in block:
            cls[x] = i
    for op in (algebra.t, algebra.q):
        for pairs in itertools.product(
            itertools.product(algebra.carrier, repeat=2), repeat=3
        ):
            if any(cls[a] != cls[b] for a, b in pairs):
                continue
            left = op(*(a for a, _ in pairs))
            right = op(*(b for _, b in pairs))
            if cls[left] != cls[right]:
                return False
    return True


def brute_force_congruences(algebra: TernaryRing) -> set:
    out = set()
    for part in all_partitions(algebra.carrier):
        if compatible_partition(algebra, part):
            out.add(frozenset(frozenset(b) for b in part))
    return out
