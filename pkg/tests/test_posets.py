import random
from itertools import combinations
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cremona.posets import (
    MAX_GROUND,
    POSET_KINDS,
    FinitePoset,
    Partition,
    PosetError,
    all_partitions,
    chain,
    dual_poset,
    full_partition_lattice,
    interval_partitions,
    min_max_poset,
    mobius_inversion_roundtrip,
    mobius_sum_check,
    one_cluster_partitions,
    poset_by_name,
    product_mobius_check,
    random_subposet,
    restrict,
)

BELL = [1, 1, 2, 5, 15, 52, 203]


def names(P):
    return sorted(str(p) for p in P.elements)


def hall_mobius(P, x, y):
    """Philip Hall: mu(x, y) = sum over chains x = c0 < ... < ck = y of (-1)^k."""
    if not P.leq(x, y):
        return 0
    inner = [z for z in P.elements if P.leq(x, z) and P.leq(z, y) and z != x and z != y]

    def count(a):
        # signed number of chains from a to y
        total = -1 if P.leq(a, y) and a != y else 0
        for z in inner:
            if a != z and P.leq(a, z):
                total -= count(z)
        return total

    return 1 if x == y else count(x)


def test_bell_numbers():
    for n in range(1, 7):
        assert len(all_partitions(list(range(1, n + 1)))) == BELL[n]


def test_pi3_listing():
    assert names(full_partition_lattice(3)) == sorted(["123", "1|23", "13|2", "12|3", "1|2|3"])
    assert [str(p) for p in all_partitions([7])] == ["7"]
    with pytest.raises(PosetError):
        all_partitions([])


def test_partition_parse_and_canonical_form():
    p = Partition.parse("23|1")
    assert str(p) == "1|23" and len(p) == 2
    assert Partition.from_blocks([[3, 2], [1]]) == p
    with pytest.raises(PosetError):
        Partition.parse("12|23")


def test_named_posets():
    assert names(interval_partitions(3)) == sorted(["123", "1|23", "12|3", "1|2|3"])
    assert names(one_cluster_partitions(3)) == sorted(["1|2|3", "12|3", "13|2", "1|23", "123"])
    assert len(min_max_poset(1)) == 1 and len(min_max_poset(3)) == 2
    for n in range(1, 7):
        assert len(interval_partitions(n)) == 2 ** (n - 1)
        assert len(one_cluster_partitions(n)) == 2 ** n - n
    with pytest.raises(PosetError):
        interval_partitions(0)
    with pytest.raises(PosetError):
        full_partition_lattice(MAX_GROUND + 1)
    with pytest.raises(PosetError):
        poset_by_name("nosuch", 3)


def test_mobius_closed_forms():
    for n in range(1, 6):
        L = full_partition_lattice(n)
        for p in L.elements:
            k = len(p)
            assert L.mobius(p, L.one) == (-1) ** (k - 1) * factorial(k - 1)
        I = interval_partitions(n)
        for p in I.elements:
            assert I.mobius(p, I.one) == (-1) ** (len(p) - 1)
    assert full_partition_lattice(3).mobius(Partition.parse("1|2|3"), Partition.parse("123")) == 2


def test_mobius_matches_hall_chain_count():
    for kind in POSET_KINDS:
        P = poset_by_name(kind, 4)
        for x in P.elements:
            for y in P.elements:
                assert P.mobius(x, y) == hall_mobius(P, x, y), (kind, str(x), str(y))


def test_mobius_errors_on_foreign_elements():
    P = interval_partitions(3)
    with pytest.raises((PosetError, KeyError)):
        P.mobius(Partition.parse("13|2"), P.one)


def test_sum_check():
    assert mobius_sum_check(full_partition_lattice(3)) == 0
    assert mobius_sum_check(interval_partitions(4)) == 0
    M = min_max_poset(2)
    assert M.mobius(M.zero, M.one) == -1 and mobius_sum_check(M) == 0
    with pytest.raises(PosetError):
        mobius_sum_check(min_max_poset(1))


def test_restrict():
    assert names(restrict(full_partition_lattice(3), [1, 2])) == ["12", "1|2"]
    assert names(restrict(interval_partitions(3), [1, 3])) == ["13", "1|3"]
    L = one_cluster_partitions(4)
    assert restrict(L, [1, 2, 3, 4]) is L
    with pytest.raises(PosetError):
        restrict(L, [])


def test_restriction_size_iff():
    for kind in POSET_KINDS:
        L = poset_by_name(kind, 4)
        for k in range(1, 5):
            for I in combinations(range(1, 5), k):
                assert (len(restrict(L, list(I))) >= 2) == (k >= 2)


def test_interval_mobius_is_plus_minus_one():
    P = interval_partitions(5)
    assert {P.mobius(a, b) for a in P.elements for b in P.elements if P.leq(a, b)} <= {1, -1}


def test_product_examples():
    assert product_mobius_check(chain(2), chain(2))
    assert product_mobius_check(full_partition_lattice(2), interval_partitions(3))
    assert product_mobius_check(full_partition_lattice(3), full_partition_lattice(3))


def test_poset_axioms_enforced():
    with pytest.raises(PosetError):
        FinitePoset([1, 2], lambda a, b: True)


def small_posets():
    """Every named poset and chain with at most 15 elements."""
    out = [chain(k) for k in range(1, 6)]
    for kind in POSET_KINDS:
        for n in range(1, 5):
            P = poset_by_name(kind, n)
            if len(P) <= 15:
                out.append(P)
    return out


def test_duality_exhaustive():
    for P in small_posets():
        D = dual_poset(P)
        for x in P.elements:
            for y in P.elements:
                if P.leq(x, y):
                    assert D.mobius(y, x) == P.mobius(x, y)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2 ** 32))
def test_random_subposet_sum_vanishes(n, seed):
    P = random_subposet(n, random.Random(seed))
    assert P.contains_bounds()
    assert mobius_sum_check(P) == 0


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2 ** 32))
def test_mobius_inversion_roundtrip(n, seed):
    rng = random.Random(seed)
    P = random_subposet(n, rng)
    f = {x: rng.randint(-50, 50) for x in P.elements}
    assert mobius_inversion_roundtrip(P, f)


def test_inversion_negative_control():
    # corrupting one Möbius value must break the round trip
    P = interval_partitions(3)
    f = {x: i + 1 for i, x in enumerate(P.elements)}
    key = (P.index(P.zero), P.index(P.one))
    P._mu[key] += 1
    try:
        assert not mobius_inversion_roundtrip(P, f)
    finally:
        P._mu[key] -= 1
    assert mobius_inversion_roundtrip(P, f)
