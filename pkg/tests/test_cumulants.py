import pytest
import sympy

from cremona import cumulants as cm
from cremona.cumulants import (
    CumulantCoordinates,
    CumulantError,
    MultiIndexCoordinates,
    binary_cumulant_map,
    involution_check,
    l_cumulant_map,
    linearization_check,
    multi_segre_cumulant_map,
    multi_segre_linearization_check,
    secant_cumulant_identity,
    secant_cumulant_pipeline,
    subset_name,
)
from cremona.maps import (
    CremonaVerificationError,
    RationalMap,
    apply_to_parametrization,
    check_inverse,
    invert_triangular,
    is_triangular,
)
from cremona.posets import (
    POSET_KINDS,
    Partition,
    full_partition_lattice,
    interval_partitions,
    min_max_poset,
    one_cluster_partitions,
    poset_by_name,
)


def to_sympy(p):
    out = 0
    for m, c in p.terms():
        t = sympy.Rational(int(c.numerator), int(c.denominator))
        for i, e in enumerate(m):
            if e:
                t *= sympy.Symbol(p.ring.by_index(i).name) ** e
        out += t
    return sympy.expand(out)


def test_subset_names():
    assert subset_name("x", 0) == "x_{}"
    assert subset_name("x", 0b101) == "x_{1,3}"
    cc = CumulantCoordinates.create(3)
    assert [v.name for v in cc.vars] == [
        "x_{1}", "x_{2}", "x_{3}", "x_{1,2}", "x_{1,3}", "x_{2,3}", "x_{1,2,3}"
    ]
    assert cc.ring.by_index(0).name == "x_{}"


def test_multi_index_names_and_order():
    mc = MultiIndexCoordinates.create((2, 1))
    assert mc.chart == "x_{0,0}"
    assert [v.name for v in mc.vars] == ["x_{0,1}", "x_{1,0}", "x_{2,0}", "x_{1,1}", "x_{2,1}"]
    assert mc.truncate((2, 1), 0b01) == (2, 0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_full_cumulants_match_log_mgf(n):
    # classical cumulants are the multilinear coefficients of log E[prod(1 + t_i X_i)]
    pair = l_cumulant_map(full_partition_lattice(n))
    cc = CumulantCoordinates(n, pair.forward.ring, "x")
    t = sympy.symbols(f"t1:{n + 1}")
    M = 1
    for I in cc.masks:
        mono = sympy.Mul(*(t[i - 1] for i in range(1, n + 1) if I >> (i - 1) & 1))
        M += sympy.Symbol(cc.var(I).name) * mono
    u = sympy.expand(M - 1)
    log = sympy.expand(sum(sympy.Rational((-1) ** (k + 1), k) * u ** k for k in range(1, n + 1)))
    poly = sympy.Poly(log, *t)
    for I, c in zip(cc.masks, pair.forward.coords):
        exps = tuple(1 if I >> (i - 1) & 1 else 0 for i in range(1, n + 1))
        assert sympy.expand(poly.coeff_monomial(exps) - to_sympy(c.num)) == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_binary_cumulants_agree_with_poset_route(n):
    a = binary_cumulant_map(n)
    b = l_cumulant_map(full_partition_lattice(n))
    assert [c.to_text() for c in a.forward.coords] == [c.to_text() for c in b.forward.coords]
    assert [c.to_text() for c in a.inverse.coords] == [c.to_text() for c in b.inverse.coords]


def test_interval_cumulants_n3_by_hand():
    pair = l_cumulant_map(interval_partitions(3))
    R = pair.forward.ring
    top = pair.forward.coordinate("y_{1,2,3}")
    expect = R.poly(
        "x_{1,2,3} - x_{1}*x_{2,3} - x_{1,2}*x_{3} + x_{1}*x_{2}*x_{3}"
    )
    assert top.num == expect


@pytest.mark.parametrize("kind", sorted(POSET_KINDS))
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_roundtrip_triangular_and_linearizes(kind, n):
    pair = l_cumulant_map(poset_by_name(kind, n))
    assert is_triangular(pair.forward)[0]
    assert check_inverse(pair.forward, pair.inverse)
    assert linearization_check(pair, n)


def test_min_max_inverse_is_explicit():
    pair = l_cumulant_map(min_max_poset(3))
    R = pair.forward.ring
    assert pair.forward.coordinate("y_{1,2,3}").num == R.poly("x_{1,2,3} - x_{1}*x_{2}*x_{3}")


def test_poset_without_bounds_rejected():
    from cremona.posets import PartitionPoset

    L = PartitionPoset(0b111, [Partition.parse("1|2|3"), Partition.parse("12|3")])
    with pytest.raises(CumulantError):
        l_cumulant_map(L)


def test_corrupted_mobius_is_caught():
    L = full_partition_lattice(3)
    key = (L.index(L.zero), L.index(L.one))
    L._mu[key] += 1
    try:
        with pytest.raises(CumulantError):
            l_cumulant_map(L)
        with pytest.raises(CremonaVerificationError):
            l_cumulant_map(L, cross_check=False)
        xs = CumulantCoordinates.create(3)
        ys = xs.sibling("y")
        fwd = RationalMap(xs.vars, ys.vars, cm._forward_coords(L, xs), (xs.chart, ys.chart))
        from cremona.maps import pair_from_maps

        bad = pair_from_maps(fwd, invert_triangular(fwd))
        assert not linearization_check(bad, 3)
    finally:
        L._mu[key] -= 1
    assert linearization_check(l_cumulant_map(L), 3)


def test_involution_needs_the_sign_twist():
    for n in (2, 3, 4):
        L = interval_partitions(n)
        assert not involution_check(L, twisted=False)
        assert involution_check(L, twisted=True)
    assert not involution_check(full_partition_lattice(3))
    assert not involution_check(one_cluster_partitions(3))
    assert involution_check(full_partition_lattice(2))


def test_multi_segre_cumulants():
    for shape in [(1, 1), (2, 1), (2, 2), (1, 1, 1), (2, 1, 1)]:
        pair = multi_segre_cumulant_map(shape)
        assert check_inverse(pair.forward, pair.inverse)
        assert multi_segre_linearization_check(pair, shape)
    with pytest.raises(CumulantError):
        multi_segre_cumulant_map((2,))


def test_all_ones_shape_agrees_with_binary_cumulants():
    pair = multi_segre_cumulant_map((1, 1, 1))
    ref = binary_cumulant_map(3)

    def subset(name):
        # x_{1,0,1} -> x_{1,3}
        head, inner = name.split("_", 1)
        bits = [str(i + 1) for i, v in enumerate(inner[1:-1].split(",")) if v == "1"]
        return f"{head}_{{{','.join(bits)}}}"

    ren = {sympy.Symbol(v.name): sympy.Symbol(subset(v.name)) for v in pair.forward.ring.variables}
    got = {subset(t.name): to_sympy(c.num).xreplace(ren) for t, c in zip(pair.forward.target_vars, pair.forward.coords)}
    want = {t.name: to_sympy(c.num) for t, c in zip(ref.forward.target_vars, ref.forward.coords)}
    assert got == want


def test_cumulant_fundamental_factor():
    for n, e in ((2, 3), (3, 8)):
        hp = l_cumulant_map(full_partition_lattice(n)).with_fundamental_factor()
        assert hp.fundamental_factor.to_text() == f"x_{{}}^{e}"
        assert hp.degree_law_holds()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_secant_identity(n):
    res = secant_cumulant_identity(n)
    assert len(res) == 2 ** n - n - 1
    assert all(res.values())


def test_secant_pipeline_keeps_first_moments():
    img = secant_cumulant_pipeline(2)
    R = img.ring
    assert img["z_{1}"] == R.poly("-a_11*s_1 + b_11*s_1 + a_11")


def test_secant_pipeline_needs_two():
    with pytest.raises(CumulantError):
        secant_cumulant_pipeline(1)


def test_size_cap():
    with pytest.raises(CumulantError):
        CumulantCoordinates.create(cm.MAX_CUMULANT_N + 1)
