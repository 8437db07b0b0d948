from math import comb

import pytest
import sympy

from cremona.maps import apply_to_parametrization, check_inverse
from cremona.polycore import LIMITS, Ring, substitute
from cremona.varieties import (
    CatalogError,
    FAMILIES,
    catalog,
    catalog_entry,
    cone_structure_check,
    determinant,
    equals_up_to_unit,
    g36,
    g36_maps,
    g36_quartic,
    g36_tangential_images,
    ghprs_map,
    ghprs_relations,
    grass2,
    grass2_tangent_chain,
    hyperdeterminant,
    linearize,
    membership_check,
    minors,
    pfaffian,
    pull_back_equation,
    rnc,
    rnc_secant_chain,
    secant_defect,
    secant_parametrization,
    secant_translation_form,
    segre,
    segre_multi,
    segre_secant_chain,
    tangential_parametrization,
    tp_tangent_chain,
    tpn,
    veronese2,
    veronese_secant_chain,
)


def sym(p):
    return sympy.sympify(p.to_text().replace("^", "**")) if not p.is_zero else sympy.Integer(0)


# -- matrix helpers against sympy --------------------------------------------


def generic_matrix(R, n, prefix="m"):
    return [[R.var(f"{prefix}{i}{j}").as_poly() for j in range(n)] for i in range(n)]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_determinant_matches_sympy(n):
    R = Ring()
    M = generic_matrix(R, n)
    ref = sympy.Matrix(n, n, lambda i, j: sympy.Symbol(f"m{i}{j}")).det()
    assert sympy.expand(sym(determinant(M)) - ref) == 0


def test_minor_counts():
    R = Ring()
    M = generic_matrix(R, 3)
    assert len(minors(M, 2)) == 9
    assert len(minors(M, 3)) == 1
    H = [[R.var(f"h{i + j}").as_poly() for j in range(3)] for i in range(3)]
    # symmetric minors coincide up to sign and are listed once
    assert len(minors(H, 2)) < 9


@pytest.mark.parametrize("n", [2, 4, 6])
def test_pfaffian_squares_to_determinant(n):
    R = Ring()
    A = [[R.zero()] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = R.var(f"a{i}{j}").as_poly()
            A[i][j], A[j][i] = v, -v
    assert pfaffian(A) ** 2 == determinant(A)


def test_hyperdeterminant_is_the_pencil_discriminant():
    R = Ring()
    a = {(i, j, k): R.var(f"a{i}{j}{k}").as_poly() for i in (0, 1) for j in (0, 1) for k in (0, 1)}
    hd = hyperdeterminant(lambda i, j, k: a[i, j, k])
    t = sympy.Symbol("t")
    s = {key: sympy.Symbol(f"a{key[0]}{key[1]}{key[2]}") for key in a}
    M = sympy.Matrix(2, 2, lambda j, k: s[0, j, k] + t * s[1, j, k])
    disc = sympy.discriminant(sympy.expand(M.det()), t)
    assert sympy.expand(sym(hd) - disc) == 0 or sympy.expand(sym(hd) + disc) == 0


# -- catalog -------------------------------------------------------------------


def test_families_listed():
    assert len(FAMILIES) >= 7
    assert len(catalog()) >= 7


def test_dimensions():
    assert (segre(2, 2).ambient_dim, segre(2, 2).dim) == (8, 4)
    assert (veronese2(2).ambient_dim, veronese2(2).dim) == (5, 2)
    assert (rnc(6).ambient_dim, rnc(6).dim) == (6, 1)
    g = grass2(6)
    assert (g.ambient_dim, g.dim, len(g.equations)) == (14, 8, comb(6, 4))
    assert (g36().ambient_dim, g36().dim) == (19, 9)
    assert (tpn(2).ambient_dim, tpn(2).dim) == (7, 3)
    assert segre_multi(1, 1, 1).ambient_dim == 7
    # 2-minors of the three 2x4 flattenings of a 2x2x2 tensor: 12 distinct
    # binomials spanning the 9 quadrics through Seg(1,1,1)
    assert len(segre_multi(1, 1, 1).equations) == 12


@pytest.mark.parametrize(
    "name",
    ["segre:2,2", "segre:1,3", "veronese2:3", "rnc:6", "grass2:5", "g36", "tp:2", "tp:3", "segre-multi:1,1,1", "segre-multi:2,1"],
)
def test_equations_vanish_on_parametrization(name):
    e = catalog_entry(name)
    assert e.equations
    assert all(membership_check(e.param, q) for q in e.equations)
    for qs in e.related.values():
        # related equations vanish on secant or tangential varieties, hence on X
        assert all(membership_check(e.param, q) for q in qs)


def test_membership_negative_control():
    e = segre(2, 2)
    R = e.ring
    assert not membership_check(e.param, R.poly("x_11 - x_12"))


def test_catalog_errors():
    for bad in ("nosuch", "segre:2", "segre:a,b", "g36:1", "rnc:"):
        with pytest.raises(CatalogError):
            catalog_entry(bad)
    with pytest.raises(CatalogError):
        rnc(13)


def test_max_vars_lifts_family_caps():
    old = LIMITS.max_vars
    LIMITS.max_vars = 10_000
    try:
        assert rnc(13).ambient_dim == 13
    finally:
        LIMITS.max_vars = old


# -- linearizations ------------------------------------------------------------


@pytest.mark.parametrize("name", ["segre:2,2", "veronese2:2", "rnc:6", "grass2:6", "tp:2", "segre-multi:1,1,1", "g36"])
def test_triangular_linearizes(name):
    e = catalog_entry(name)
    pair = linearize(e)
    assert check_inverse(pair.forward, pair.inverse)
    img = apply_to_parametrization(pair.forward, e.param)
    zero = [v for v, f in img.coords if f.is_zero]
    assert zero == list(e.linear_image)
    assert len(zero) == e.ambient_dim - e.dim
    assert pair.degree_law_holds()


DEGREES = {
    "segre:2,2": (2, 2, "x_00^3"),
    "veronese2:2": (2, 2, "x_00^3"),
    "grass2:6": (2, 2, "x_01^3"),
    "tp:2": (2, 3, "x_00^3*x_01*x_02"),
    "rnc:6": (2, 6, "x_0^11"),
    "segre-multi:1,1,1": (3, 3, "x_{}^8"),
}


@pytest.mark.parametrize("name", sorted(DEGREES))
def test_degrees_and_fundamental_factor(name):
    d, dp, phi = DEGREES[name]
    hp = linearize(catalog_entry(name)).with_fundamental_factor()
    assert (hp.delta, hp.delta_prime) == (d, dp)
    assert hp.fundamental_factor.to_text() == phi


def test_cumulant_linearization_needs_subsets():
    with pytest.raises(CatalogError):
        linearize(rnc(4), "cumulant:full")
    with pytest.raises(CatalogError):
        linearize(segre(2, 2), "nosuch")


def test_segre_binomial():
    e = segre(2, 2)
    pair = linearize(e)
    img = pull_back_equation(e.related["secant"][0], pair)
    assert equals_up_to_unit(img, e.ring.poly("y_11*y_22 - y_12*y_21"))


def test_equals_up_to_unit():
    R = Ring(["a", "b"])
    a, b = R.variables
    q = a * b + 1
    assert equals_up_to_unit(q * a * -3, q)
    assert equals_up_to_unit(q / (b ** 2), q)
    assert not equals_up_to_unit(q + 1, q)
    assert not equals_up_to_unit(q * (a + 1), q)


# -- secant and tangential constructions ---------------------------------------


def test_secant_parametrization_shape():
    e = veronese2(2)
    sec = secant_parametrization(e, 1)
    assert [v.name for v in sec.params] == ["t_1.0", "t_2.0", "t_1.1", "t_2.1", "s_1"]
    assert set(sec.blocks) == {"t0", "t1", "s"}
    trans = secant_translation_form(sec, e.param)
    assert any(v.name == "u_1" for v in trans.params)


def test_tangential_parametrization_shape():
    e = veronese2(2)
    tan = tangential_parametrization(e)
    assert [v.name for v in tan.params] == ["t_1", "t_2", "s_1", "s_2"]
    assert set(tan.blocks) >= {"t", "s"}


def test_cone_check_requires_translation_block():
    e = rnc(3)
    with pytest.raises(CatalogError):
        cone_structure_check(secant_parametrization(e, 1), [])


@pytest.mark.parametrize("m,n,k", [(2, 2, 1), (3, 3, 1), (3, 3, 2), (2, 3, 1)])
def test_segre_chain(m, n, k):
    assert segre_secant_chain(m, n, k)


def test_other_chains():
    assert veronese_secant_chain(2) == (True, True)
    assert veronese_secant_chain(3) == (True, True)
    assert tp_tangent_chain()
    assert grass2_tangent_chain(6) == (True, True)


def test_rnc_chain_only_for_n4():
    # the Hankel cone statement holds for V_4 and fails from V_5 on
    assert rnc_secant_chain(4)
    assert not rnc_secant_chain(5)


@pytest.mark.parametrize(
    "name,defect", [("veronese2:2", 1), ("segre:2,2", 1), ("grass2:6", 1), ("segre:1,1", 0), ("rnc:4", 0)]
)
def test_defects(name, defect):
    assert secant_defect(catalog_entry(name), 1) == defect


def test_defect_is_seed_deterministic():
    e = segre(2, 2)
    assert secant_defect(e, 1, seed=7) == secant_defect(e, 1, seed=7)


def test_rank_oracle_for_veronese_defect():
    # Sec(V_{2,2}) is the determinantal cubic hypersurface: dimension 4, not 5
    e = veronese2(2)
    det = [[e.ring.lookup(n).as_poly() for n in row] for row in (("x_00", "x_01", "x_02"), ("x_01", "x_11", "x_12"), ("x_02", "x_12", "x_22"))]
    sec = secant_parametrization(e, 1)
    assert membership_check(sec, determinant(det))


# -- G(3,6) ----------------------------------------------------------------------


def test_g36_pairs():
    quad, cubo = g36_maps()
    assert (quad.delta, quad.delta_prime) == (2, 3)
    assert (cubo.delta, cubo.delta_prime) == (3, 3)
    for pair in (quad, cubo):
        assert pair.degree_law_holds()


def test_g36_quartic_conventions():
    e = g36()
    tan = tangential_parametrization(e)
    assert membership_check(tan, g36_quartic(e.ring, "printed"))
    assert not membership_check(tan, g36_quartic(e.ring, "verbatim"))
    with pytest.raises(CatalogError):
        g36_quartic(e.ring, "other")


def test_g36_images():
    e = g36()
    images = g36_tangential_images(e.ring)
    assert [(im.degree, im.n_terms) for im in images] == [(6, 448), (6, 435)]
    for im in images:
        assert [t.to_text() for t in im.leading] == ["z_13^4*z_22^2", "-2*z_12*z_13^3*z_22*z_23"]
    printed = g36_tangential_images(e.ring, "printed")
    assert [(im.degree, im.n_terms) for im in printed] == [(4, 34), (4, 61)]
    # the printed-convention image vanishes on the transformed tangential variety
    quad, _ = g36_maps(e.ring)
    tan = apply_to_parametrization(quad.forward, tangential_parametrization(e))
    assert membership_check(tan, printed[0].poly)


def test_g36_grlex_leading_terms_differ():
    im = g36_tangential_images(order="grlex")[0]
    assert [t.to_text() for t in im.leading] != ["z_13^4*z_22^2", "-2*z_12*z_13^3*z_22*z_23"]


# -- the alternative G(2,n) map ----------------------------------------------------


@pytest.mark.parametrize("n", [4, 5])
def test_ghprs(n):
    e = grass2(n)
    pair = ghprs_map(e)
    hp = pair.with_fundamental_factor()
    assert (hp.delta, hp.delta_prime) == (n - 2, n - 2)
    img = apply_to_parametrization(pair.forward, e.param)
    assert all(membership_check(img, q) for q in ghprs_relations(e))
    with pytest.raises(CatalogError):
        ghprs_map(segre(2, 2))


def test_ghprs_g26_degrees():
    hp = ghprs_map(6).with_fundamental_factor()
    assert (hp.delta, hp.delta_prime) == (4, 4)
    assert hp.fundamental_factor.to_text() == "x_01^3*x_02^3*x_03^3*x_04^3*x_05^3"
