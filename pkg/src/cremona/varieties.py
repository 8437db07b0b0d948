"""Catalog of classical rational varieties with their linearizing Cremonas.

Each catalog entry carries a normal-form affine parametrization (the
first coordinates are the parameters themselves), the implicit equations
that are known in closed form (homogeneous, with the chart variable
present), and related equations of secant or tangential varieties.
Membership of a parametrized variety in a hypersurface is always decided
by substitution.  No implicitization is attempted.

Entries are addressable by strings such as ``"segre:2,2"``,
``"veronese2:3"``, ``"rnc:6"``, ``"grass2:6"``, ``"g36"``, ``"tp:2"``
and ``"segre-multi:2,2,2"``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Mapping, Sequence

from .cumulants import (
    CumulantCoordinates,
    MultiIndexCoordinates,
    l_cumulant_map,
    multi_segre_cumulant_map,
    multi_segre_parametrization,
    segre_product_parametrization,
)
from .maps import (
    CremonaPair,
    MapError,
    Parametrization,
    RationalMap,
    apply_to_parametrization,
    compose,
    generalized_triangular,
    invert_triangular,
    pair_from_maps,
    triangular_from_parametrization,
)
from .polycore import (
    LIMITS,
    Polynomial,
    RationalFunction,
    Ring,
    Var,
    as_rational_function,
    exact_generic_rank,
    jacobian,
    leading_terms,
    substitute,
)
from .posets import POSET_KINDS, poset_by_name

__all__ = [
    "CatalogError",
    "CAPS",
    "CatalogEntry",
    "FAMILIES",
    "catalog",
    "catalog_entry",
    "segre",
    "segre_multi",
    "veronese2",
    "rnc",
    "grass2",
    "g36",
    "tpn",
    "determinant",
    "minors",
    "pfaffian",
    "hyperdeterminant",
    "linearize",
    "LINEARIZE_METHODS",
    "secant_parametrization",
    "tangential_parametrization",
    "secant_translation_form",
    "membership_check",
    "secant_defect",
    "cone_structure_check",
    "equals_up_to_unit",
    "pull_back_equation",
    "segre_secant_chain",
    "veronese_secant_chain",
    "rnc_secant_chain",
    "tp_tangent_chain",
    "grass2_tangent_chain",
    "g36_maps",
    "g36_quartic",
    "G36Image",
    "g36_tangential_images",
    "ghprs_map",
    "ghprs_relations",
]


class CatalogError(ValueError):
    pass


# family size caps; lifted only when a registry cap (LIMITS.max_vars) is set
CAPS = {
    "segre": 4,
    "veronese2": 6,
    "rnc": 12,
    "grass2": 8,
    "tp": 4,
    "segre-multi": 2**14,
}


def _cap(family: str, value: int, what: str) -> None:
    cap = CAPS[family]
    if value > cap and LIMITS.max_vars is None:
        raise CatalogError(f"{family}: {what} = {value} exceeds the cap {cap}")


@dataclass(frozen=True)
class CatalogEntry:
    """A variety X in P^r given by an affine normal-form parametrization."""

    name: str
    family: str
    param: Parametrization
    equations: tuple[Polynomial, ...] = ()
    related: Mapping[str, tuple[Polynomial, ...]] = field(default_factory=dict)
    target_names: tuple[str, ...] | None = None
    data: Mapping[str, object] = field(default_factory=dict)

    def __repr__(self):
        return f"CatalogEntry({self.name!r}, r={self.ambient_dim}, n={self.dim})"

    @property
    def ring(self) -> Ring:
        return self.param.ring

    @property
    def ambient_dim(self) -> int:
        """r, the dimension of the ambient projective space."""
        return len(self.param.coords)

    @property
    def dim(self) -> int:
        return len(self.param.params)

    @property
    def chart_var(self) -> Var:
        return self.ring.var(self.param.chart)

    @property
    def hypercube(self) -> bool:
        """True when coordinates are subset-indexed x_I, I ⊆ [n]."""
        return "n" in self.data and self.family == "segre-multi"

    @property
    def linear_image(self) -> tuple[Var, ...]:
        """Target coordinates that vanish on the image of the triangular linearization."""
        names = self.target_names or tuple(_default_target(v.name) for v in self.param.coord_vars)
        return tuple(self.ring.var(nm) for nm in names[self.dim :])

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "family": self.family,
            "ambient_dim": self.ambient_dim,
            "dim": self.dim,
            "chart": self.param.chart,
            "parametrization": self.param.to_dict(),
            "equations": [e.to_text() for e in self.equations],
            "related": {k: [e.to_text() for e in v] for k, v in self.related.items()},
            "linear_image": [v.name for v in self.linear_image],
        }


def _default_target(name: str) -> str:
    return "y" + name[1:] if name.startswith("x") else name + "'"


# ---------------------------------------------------------------------------
# matrices of polynomials


def determinant(M: Sequence[Sequence]) -> Polynomial:
    """Cofactor expansion along the first row (sizes here are at most 5)."""
    k = len(M)
    if k == 0:
        raise CatalogError("empty matrix")
    if any(len(row) != k for row in M):
        raise CatalogError("determinant of a non-square matrix")
    if k == 1:
        return M[0][0]
    if k == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = M[0][0] * 0
    for j in range(k):
        if _is_zero(M[0][j]):
            continue
        sub = [row[:j] + row[j + 1 :] for row in M[1:]]
        term = M[0][j] * determinant(sub)
        total = total + term if j % 2 == 0 else total - term
    return total


def _is_zero(e) -> bool:
    return e == 0 if isinstance(e, int) else e.is_zero


def minors(M: Sequence[Sequence], k: int) -> list[Polynomial]:
    """Nonzero k x k minors, deduplicated up to sign, in row/column order."""
    rows, cols = len(M), len(M[0])
    out: list[Polynomial] = []
    seen = set()
    for R in itertools.combinations(range(rows), k):
        for C in itertools.combinations(range(cols), k):
            d = determinant([[M[i][j] for j in C] for i in R])
            if d.is_zero or d in seen or -d in seen:
                continue
            seen.add(d)
            out.append(d)
    return out


def pfaffian(A: Sequence[Sequence]) -> Polynomial:
    """Pfaffian of an antisymmetric matrix by expansion along the first row."""
    m = len(A)
    if m % 2:
        raise CatalogError("Pfaffian needs an even-sized matrix")
    if m == 0:
        raise CatalogError("empty matrix")
    if m == 2:
        return A[0][1]
    total = None
    for j in range(1, m):
        if _is_zero(A[0][j]):
            continue
        keep = [k for k in range(m) if k not in (0, j)]
        sub = [[A[a][b] for b in keep] for a in keep]
        term = A[0][j] * pfaffian(sub)
        if j % 2 == 0:
            term = -term
        total = term if total is None else total + term
    return total


def hyperdeterminant(a: Callable[[int, int, int], Polynomial]) -> Polynomial:
    """Cayley's hyperdeterminant of a 2x2x2 tensor with entries a(i, j, k)."""
    A = {ijk: a(*ijk) for ijk in itertools.product((0, 1), repeat=3)}
    sq = (
        A[0, 0, 0] ** 2 * A[1, 1, 1] ** 2
        + A[0, 0, 1] ** 2 * A[1, 1, 0] ** 2
        + A[0, 1, 0] ** 2 * A[1, 0, 1] ** 2
        + A[1, 0, 0] ** 2 * A[0, 1, 1] ** 2
    )
    mixed = (
        A[0, 0, 0] * A[0, 0, 1] * A[1, 1, 0] * A[1, 1, 1]
        + A[0, 0, 0] * A[0, 1, 0] * A[1, 0, 1] * A[1, 1, 1]
        + A[0, 0, 0] * A[1, 0, 0] * A[0, 1, 1] * A[1, 1, 1]
        + A[0, 0, 1] * A[0, 1, 0] * A[1, 0, 1] * A[1, 1, 0]
        + A[0, 0, 1] * A[1, 0, 0] * A[0, 1, 1] * A[1, 1, 0]
        + A[0, 1, 0] * A[1, 0, 0] * A[0, 1, 1] * A[1, 0, 1]
    )
    quartic = (
        A[0, 0, 0] * A[0, 1, 1] * A[1, 0, 1] * A[1, 1, 0]
        + A[0, 0, 1] * A[0, 1, 0] * A[1, 0, 0] * A[1, 1, 1]
    )
    return sq - mixed.scale(2) + quartic.scale(4)


# ---------------------------------------------------------------------------
# the catalog


def _ring(ring: Ring | None) -> Ring:
    return ring if ring is not None else Ring()


def segre(m: int, n: int, ring: Ring | None = None) -> CatalogEntry:
    """Seg(m, n): rank-one (m+1) x (n+1) matrices, chart x_00 = 1."""
    if m < 1 or n < 1:
        raise CatalogError("segre needs m, n >= 1")
    _cap("segre", max(m, n), "max(m, n)")
    R = _ring(ring)
    x00 = R.var("x_00")
    rows = [R.var(f"t_{i}0") for i in range(1, m + 1)]
    cols = [R.var(f"t_0{j}") for j in range(1, n + 1)]
    coords = [(R.var(f"x_{i}0"), rows[i - 1].as_poly()) for i in range(1, m + 1)]
    coords += [(R.var(f"x_0{j}"), cols[j - 1].as_poly()) for j in range(1, n + 1)]
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            coords.append((R.var(f"x_{i}{j}"), rows[i - 1] * cols[j - 1]))
    param = Parametrization(tuple(rows + cols), tuple(coords), x00.name, {"t": tuple(rows + cols)})
    M = [[x00.as_poly() if (i, j) == (0, 0) else R.lookup(f"x_{i}{j}").as_poly() for j in range(n + 1)] for i in range(m + 1)]
    related = {}
    if m == n:
        related["secant"] = (determinant(M),) if m == 2 else tuple(minors(M, 3))
    return CatalogEntry(f"segre:{m},{n}", "segre", param, tuple(minors(M, 2)), related, None, {"m": m, "n": n, "matrix": M})


def veronese2(n: int, ring: Ring | None = None) -> CatalogEntry:
    """V_{2,n}: rank-one symmetric (n+1) x (n+1) matrices, chart x_00 = 1."""
    if n < 1:
        raise CatalogError("veronese2 needs n >= 1")
    _cap("veronese2", n, "n")
    R = _ring(ring)
    x00 = R.var("x_00")
    ts = [R.var(f"t_{i}") for i in range(1, n + 1)]
    coords = [(R.var(f"x_0{i}"), ts[i - 1].as_poly()) for i in range(1, n + 1)]
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            coords.append((R.var(f"x_{i}{j}"), ts[i - 1] * ts[j - 1]))
    param = Parametrization(tuple(ts), tuple(coords), x00.name, {"t": tuple(ts)})

    def entry(i, j):
        i, j = min(i, j), max(i, j)
        return x00.as_poly() if (i, j) == (0, 0) else R.lookup(f"x_{i}{j}").as_poly()

    M = [[entry(i, j) for j in range(n + 1)] for i in range(n + 1)]
    related = {"secant": tuple(minors(M, 3))} if n >= 2 else {}
    return CatalogEntry(f"veronese2:{n}", "veronese2", param, tuple(minors(M, 2)), related, None, {"n": n, "matrix": M})


def _rnc_rule(i: int, xs: Sequence[Var]) -> Polynomial:
    """The quadratic correction of the rational normal curve map at x_i."""
    if i % 2:
        return xs[i - 1] * xs[1]
    return xs[i // 2].as_poly() ** 2


def rnc(n: int, ring: Ring | None = None) -> CatalogEntry:
    """V_n = [1, t, ..., t^n], chart x_0 = 1."""
    if n < 2:
        raise CatalogError("rnc needs n >= 2")
    _cap("rnc", n, "n")
    R = _ring(ring)
    x0 = R.var("x_0")
    t = R.var("t")
    coords = tuple((R.var(f"x_{i}"), t.as_poly() ** i) for i in range(1, n + 1))
    param = Parametrization((t,), coords, x0.name, {"t": (t,)})
    xs = [x0] + [v for v, _ in coords]
    H = [[xs[j].as_poly() for j in range(n)], [xs[j].as_poly() for j in range(1, n + 1)]]
    related = {}
    if n >= 4:
        C = [[xs[j + r].as_poly() for j in range(n - 1)] for r in range(3)]
        related["secant"] = tuple(minors(C, 3))
    return CatalogEntry(f"rnc:{n}", "rnc", param, tuple(minors(H, 2)), related, None, {"n": n, "hankel": H})


def _pl(R: Ring, i: int, j: int, chart: Var) -> Polynomial:
    if (i, j) == (0, 1):
        return chart.as_poly()
    return R.lookup(f"x_{i}{j}").as_poly()


def grass2(n: int, ring: Ring | None = None) -> CatalogEntry:
    """G(2, n) in Plücker coordinates x_ij, 0 <= i < j <= n-1, chart x_01 = 1."""
    if n < 4:
        raise CatalogError("grass2 needs n >= 4")
    _cap("grass2", n, "n")
    R = _ring(ring)
    x01 = R.var("x_01")
    p0 = [R.var(f"t_0{j}") for j in range(2, n)]
    p1 = [R.var(f"t_1{j}") for j in range(2, n)]
    coords = [(R.var(f"x_0{j}"), p0[j - 2].as_poly()) for j in range(2, n)]
    coords += [(R.var(f"x_1{j}"), p1[j - 2].as_poly()) for j in range(2, n)]
    for i in range(2, n):
        for j in range(i + 1, n):
            coords.append((R.var(f"x_{i}{j}"), p0[i - 2] * p1[j - 2] - p0[j - 2] * p1[i - 2]))
    params = tuple(p0 + p1)
    param = Parametrization(params, tuple(coords), x01.name, {"t": params})
    pl = lambda i, j: _pl(R, i, j, x01)
    eqs = tuple(
        pl(i, j) * pl(k, l) - pl(i, k) * pl(j, l) + pl(i, l) * pl(j, k)
        for i, j, k, l in itertools.combinations(range(n), 4)
    )
    zero = R.zero()
    A = [[zero if a == b else (pl(a, b) if a < b else -pl(b, a)) for b in range(n)] for a in range(n)]
    related = {}
    if n % 2 == 0 and n >= 6:
        related["secant"] = (pfaffian(A),) if n == 6 else ()
        related["tangential"] = related["secant"]
    return CatalogEntry(f"grass2:{n}", "grass2", param, eqs, related, None, {"n": n, "matrix": A})


def _minor3(M, i: int, j: int):
    """Minor of a 3x3 matrix deleting row i and column j (0-based)."""
    r = [a for a in range(3) if a != i]
    c = [b for b in range(3) if b != j]
    return M[r[0]][c[0]] * M[r[1]][c[1]] - M[r[0]][c[1]] * M[r[1]][c[0]]


def _g36_coords(R: Ring, xname="x", yname="y", x0name="x_0", y0name="y_0"):
    x0 = R.var(x0name)
    X = [[R.var(f"{xname}_{i}{j}") for j in range(1, 4)] for i in range(1, 4)]
    Y = [[R.var(f"{yname}_{i}{j}") for j in range(1, 4)] for i in range(1, 4)]
    y0 = R.var(y0name)
    return x0, X, Y, y0


def g36(ring: Ring | None = None) -> CatalogEntry:
    """G(3, 6) as (1, A, ∧²A, det A) in P^19 with unsigned 2x2 minors, chart x_0 = 1."""
    R = _ring(ring)
    x0, X, Y, y0 = _g36_coords(R)
    a = [[R.var(f"a_{i}{j}") for j in range(1, 4)] for i in range(1, 4)]
    A = [[v.as_poly() for v in row] for row in a]
    coords = [(X[i][j], A[i][j]) for i in range(3) for j in range(3)]
    coords += [(Y[i][j], _minor3(A, i, j)) for i in range(3) for j in range(3)]
    coords.append((y0, determinant(A)))
    params = tuple(v for row in a for v in row)
    param = Parametrization(params, tuple(coords), x0.name, {"t": params})
    Xp = [[v.as_poly() for v in row] for row in X]
    eqs = tuple(x0 * Y[i][j] - _minor3(Xp, i, j) for i in range(3) for j in range(3))
    eqs += (x0.as_poly() ** 2 * y0 - determinant(Xp),)
    related = {"tangential": (g36_quartic(R, "printed"),)}
    targets = tuple(f"z_{i}{j}" for i in range(1, 4) for j in range(1, 4))
    targets += tuple(f"w_{i}{j}" for i in range(1, 4) for j in range(1, 4)) + ("w_0",)
    return CatalogEntry("g36", "g36", param, eqs, related, targets, {})


def tpn(n: int, ring: Ring | None = None) -> CatalogEntry:
    """TP^n: traceless rank-one (n+1) x (n+1) matrices, chart x_00 = 1.

    The corner entry is x_nn = -x_00 - x_11 - ... - x_{n-1,n-1} and is not a
    coordinate.
    """
    if n < 1:
        raise CatalogError("tp needs n >= 1")
    _cap("tp", n, "n")
    R = _ring(ring)
    x00 = R.var("x_00")
    row0 = [R.var(f"t_0{i}") for i in range(1, n + 1)]
    diag = [R.var(f"t_{i}{i}") for i in range(1, n)]
    coords = [(R.var(f"x_0{i}"), row0[i - 1].as_poly()) for i in range(1, n + 1)]
    coords += [(R.var(f"x_{i}{i}"), diag[i - 1].as_poly()) for i in range(1, n)]
    col0: dict[int, RationalFunction] = {}
    for i in range(1, n):
        col0[i] = diag[i - 1] / row0[i - 1]
    col0[n] = -(1 + sum((d.as_poly() for d in diag), R.zero())) / row0[n - 1]
    coords += [(R.var(f"x_{i}0"), col0[i]) for i in range(1, n + 1)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                coords.append((R.var(f"x_{i}{j}"), col0[i] * row0[j - 1]))
    params = tuple(row0 + diag)
    param = Parametrization(params, tuple(coords), x00.name, {"t": params})

    def entry(i, j):
        if (i, j) == (0, 0):
            return x00.as_poly()
        if (i, j) == (n, n):
            return -x00.as_poly() - sum((R.lookup(f"x_{k}{k}").as_poly() for k in range(1, n)), R.zero())
        return R.lookup(f"x_{i}{j}").as_poly()

    M = [[entry(i, j) for j in range(n + 1)] for i in range(n + 1)]
    related = {"secant": (determinant(M),), "tangential": (determinant(M),)} if n == 2 else {}
    return CatalogEntry(f"tp:{n}", "tp", param, tuple(minors(M, 2)), related, None, {"n": n, "matrix": M})


# flattening minors grow quickly; past this many coordinates none are listed
_FLATTENING_LIMIT = 256


def _flattening_minors(shape: tuple[int, ...], coord: Callable[[tuple[int, ...]], Polynomial]) -> tuple[Polynomial, ...]:
    """2-minors of every flattening, listed once up to sign."""
    k = len(shape)
    seen: set = set()
    out = []
    for mask in range(1, 1 << k):
        if not mask & 1 or mask == (1 << k) - 1:
            continue
        left = [j for j in range(k) if mask >> j & 1]
        right = [j for j in range(k) if not mask >> j & 1]
        rows = list(itertools.product(*(range(shape[j] + 1) for j in left)))
        cols = list(itertools.product(*(range(shape[j] + 1) for j in right)))

        def merge(a, b):
            i = [0] * k
            for j, v in zip(left, a):
                i[j] = v
            for j, v in zip(right, b):
                i[j] = v
            return tuple(i)

        M = [[coord(merge(a, b)) for b in cols] for a in rows]
        for q in minors(M, 2):
            key = frozenset(q.term_dict.items())
            neg = frozenset((-q).term_dict.items())
            if key not in seen and neg not in seen:
                seen.add(key)
                out.append(q)
    return tuple(out)


def segre_multi(*shape: int, ring: Ring | None = None) -> CatalogEntry:
    """Seg(r_1, ..., r_k).  Shapes of all ones use subset coordinates x_I."""
    shape = tuple(shape)
    if len(shape) < 2 or any(r < 1 for r in shape):
        raise CatalogError("segre-multi needs at least two factors, each of dimension >= 1")
    total = 1
    for r in shape:
        total *= r + 1
    _cap("segre-multi", total, "number of coordinates")
    R = _ring(ring)
    name = "segre-multi:" + ",".join(map(str, shape))
    if all(r == 1 for r in shape):
        k = len(shape)
        cc = CumulantCoordinates.create(k, R, "x")
        param = segre_product_parametrization(cc)
        related = {}
        if k == 3:
            chart = R.var(cc.chart).as_poly()

            def a(i, j, l):
                m = i | j << 1 | l << 2
                return chart if m == 0 else cc.var(m).as_poly()

            related["tangential"] = (hyperdeterminant(a),)

        def coord(i):
            m = sum(1 << j for j, v in enumerate(i) if v)
            return R.var(cc.chart).as_poly() if m == 0 else cc.var(m).as_poly()

        eqs = _flattening_minors(shape, coord) if total <= _FLATTENING_LIMIT else ()
        return CatalogEntry(name, "segre-multi", param, eqs, related, None, {"shape": shape, "n": k})
    mc = MultiIndexCoordinates.create(shape, R, "x")
    param = multi_segre_parametrization(mc)

    def coord(i):
        return R.var(mc.name(i)).as_poly()

    eqs = _flattening_minors(shape, coord) if total <= _FLATTENING_LIMIT else ()
    return CatalogEntry(name, "segre-multi", param, eqs, {}, None, {"shape": shape})


FAMILIES: dict[str, tuple[Callable[..., CatalogEntry], str, str]] = {
    "segre": (segre, "m,n", "Segre variety Seg(m,n) of rank-one matrices"),
    "segre-multi": (segre_multi, "r1,...,rk", "Segre variety Seg(r1,...,rk)"),
    "veronese2": (veronese2, "n", "quadratic Veronese variety V_{2,n}"),
    "rnc": (rnc, "n", "rational normal curve V_n"),
    "grass2": (grass2, "n", "Grassmannian G(2,n) of lines"),
    "g36": (g36, "", "Grassmannian G(3,6) in P^19"),
    "tp": (tpn, "n", "projectivized tangent bundle TP^n"),
}


def catalog_entry(spec: str, ring: Ring | None = None) -> CatalogEntry:
    """Build an entry from a name string such as ``"segre:2,2"`` or ``"g36"``."""
    family, _, args = spec.strip().partition(":")
    if family not in FAMILIES:
        raise CatalogError(f"unknown catalog family {family!r}; choose from {', '.join(FAMILIES)}")
    ctor, argspec, _ = FAMILIES[family]
    if not argspec:
        if args:
            raise CatalogError(f"{family} takes no arguments")
        return ctor(ring=ring)
    try:
        nums = [int(a) for a in args.split(",")] if args else []
    except ValueError:
        raise CatalogError(f"bad arguments {args!r} for {family}") from None
    expected = argspec.count(",") + 1 if "..." not in argspec else None
    if not nums or (expected is not None and len(nums) != expected):
        raise CatalogError(f"{family} expects arguments {argspec}")
    return ctor(*nums, ring=ring)


def catalog() -> list[CatalogEntry]:
    """The named entries used throughout the examples."""
    names = ["segre:2,2", "veronese2:3", "rnc:6", "grass2:6", "g36", "tp:2", "segre-multi:2,2,2"]
    return [catalog_entry(n) for n in names]


# ---------------------------------------------------------------------------
# linearizations


def _in_x(entry: CatalogEntry, f: RationalFunction) -> RationalFunction:
    """Rewrite a function of the parameters in the first coordinates."""
    ren = {t: v.as_poly() for t, v in zip(entry.param.params, entry.param.coord_vars)}
    return substitute(f, ren)


def _rnc_linearization(entry: CatalogEntry) -> CremonaPair:
    xs = [entry.chart_var] + list(entry.param.coord_vars)
    n = entry.data["n"]
    h = [1] * (n - 1)
    g = [xs[1].as_poly() ** i - _rnc_rule(i, xs) for i in range(2, n + 1)]
    return generalized_triangular(entry.param, h, g)


def _tp_linearization(entry: CatalogEntry) -> CremonaPair:
    n = entry.data["n"]
    R = entry.ring
    x = lambda i, j: R.lookup(f"x_{i}{j}")
    h, g = [], []
    for v, f in entry.param.coords[entry.dim :]:
        i, j = int(v.name[2]), int(v.name[3])
        if j == 0:
            h.append(-x(0, i).as_poly())
            g.append(0)
        else:
            h.append(1)
            g.append(_in_x(entry, f) - x(i, 0) * x(0, j))
    return generalized_triangular(entry.param, h, g)


def _cumulant_linearization(entry: CatalogEntry, kind: str) -> CremonaPair:
    if not entry.hypercube:
        if entry.family == "segre-multi" and kind == "full":
            return multi_segre_cumulant_map(entry.data["shape"], entry.ring)
        raise CatalogError(f"cumulant linearization needs subset coordinates; {entry.name} has none")
    if kind not in POSET_KINDS:
        raise CatalogError(f"unknown poset {kind!r}; choose from {', '.join(POSET_KINDS)}")
    return l_cumulant_map(poset_by_name(kind, entry.data["n"]), entry.ring)


LINEARIZE_METHODS = ("triangular", "cumulant:<poset>", "quadro-cubic", "cubo-cubic", "ghprs")


def linearize(entry: CatalogEntry, method: str = "triangular") -> CremonaPair:
    """The linearizing Cremona pair of an entry by the named construction."""
    if method.startswith("cumulant:"):
        return _cumulant_linearization(entry, method.split(":", 1)[1])
    if method in ("quadro-cubic", "cubo-cubic"):
        if entry.family != "g36":
            raise CatalogError(f"{method} applies to g36 only")
        quadro, cubo = g36_maps(entry.ring)
        return quadro if method == "quadro-cubic" else cubo
    if method == "ghprs":
        if entry.family != "grass2":
            raise CatalogError("ghprs applies to grass2 only")
        return ghprs_map(entry)
    if method != "triangular":
        raise CatalogError(f"unknown method {method!r}; choose from {', '.join(LINEARIZE_METHODS)}")
    if entry.family == "rnc":
        return _rnc_linearization(entry)
    if entry.family == "tp":
        return _tp_linearization(entry)
    if entry.family == "g36":
        return g36_maps(entry.ring)[0]
    return triangular_from_parametrization(entry.param)


# ---------------------------------------------------------------------------
# secant and tangential parametrizations


def _param_of(src) -> Parametrization:
    return src.param if isinstance(src, CatalogEntry) else src


def _relabel(prefix: str, v: Var) -> Var:
    body = v.name[1:] if v.name.startswith("t") else "_" + v.name
    return v.ring.var(prefix + body)


def secant_parametrization(src, k: int) -> Parametrization:
    """x = Σ_j s_j f(t^(j)) with s_0 = 1 - s_1 - ... - s_k.

    Parameter copies are named ``<param>.<j>``; blocks ``t0..tk`` and ``s``.
    """
    param = _param_of(src)
    if k < 0:
        raise CatalogError("k must be nonnegative")
    if k == 0:
        return param
    if not param.normal_form:
        raise CatalogError("secant parametrization needs a normal-form parametrization")
    R = param.ring
    copies = [tuple(R.var(f"{t.name}.{j}") for t in param.params) for j in range(k + 1)]
    s = tuple(R.var(f"s_{j}") for j in range(1, k + 1))
    weights = [1 - sum((v.as_poly() for v in s), R.zero())] + [v.as_poly() for v in s]
    coords = []
    for v, f in param.coords:
        total = as_rational_function(R.zero())
        for j in range(k + 1):
            total = total + substitute(f, {t: c.as_poly() for t, c in zip(param.params, copies[j])}) * weights[j]
        coords.append((v, total))
    blocks = {f"t{j}": copies[j] for j in range(k + 1)}
    blocks["s"] = s
    return Parametrization(sum(copies, ()) + s, tuple(coords), param.chart, blocks)


def secant_translation_form(param: Parametrization, base: Parametrization) -> Parametrization:
    """Rewrite a k = 1 secant parametrization with t^(0) = t, t^(1) = t + u."""
    if "t0" not in param.blocks or "t1" not in param.blocks or "t2" in param.blocks:
        raise CatalogError("expected a secant parametrization with k = 1")
    R = param.ring
    ts = base.params
    us = tuple(_relabel("u", t) for t in ts)
    sub = {}
    for t, c0, c1, u in zip(ts, param.blocks["t0"], param.blocks["t1"], us):
        sub[c0] = t.as_poly()
        sub[c1] = t + u
    coords = tuple((v, substitute(f, sub)) for v, f in param.coords)
    s = param.blocks["s"]
    return Parametrization(tuple(ts) + us + s, coords, param.chart, {"t": tuple(ts), "u": us, "s": s})


def tangential_parametrization(src) -> Parametrization:
    """x = f(t) + Σ_j s_j ∂f/∂t_j(t); blocks ``t`` and ``s``."""
    param = _param_of(src)
    if not param.normal_form:
        raise CatalogError("tangential parametrization needs a normal-form parametrization")
    ts = param.params
    ss = tuple(_relabel("s", t) for t in ts)
    coords = []
    for v, f in param.coords:
        g = f
        for t, s in zip(ts, ss):
            d = f.diff(t)
            if not d.is_zero:
                g = g + d * s.as_poly()
        coords.append((v, g))
    return Parametrization(tuple(ts) + ss, tuple(coords), param.chart, {"t": tuple(ts), "s": ss})


def membership_check(param: Parametrization, eq: Polynomial) -> bool:
    """True iff eq vanishes identically on the parametrized variety (chart set to 1)."""
    if eq.is_zero:
        return True
    b = dict(param.bindings())
    R = param.ring
    if R.has(param.chart):
        b[R.lookup(param.chart)] = as_rational_function(R.one())
    return substitute(eq, b).is_zero


def secant_defect(src, k: int, samples: int = 5, seed: int = 0) -> int:
    """min(r, n(k+1)+k) - dim Sec_k(X), with the dimension from a sampled Jacobian rank."""
    if k < 1:
        raise CatalogError("k must be at least 1")
    param = _param_of(src)
    sec = secant_parametrization(param, k)
    J = jacobian(sec.functions, sec.params)
    dim = exact_generic_rank(J, samples=samples, seed=seed)
    r, n = len(param.coords), len(param.params)
    return min(r, n * (k + 1) + k) - dim


def cone_structure_check(param: Parametrization, vertex_vars: Sequence[Var]) -> bool:
    """True iff no coordinate outside ``vertex_vars`` involves the translation block t."""
    if "t" not in param.blocks:
        raise CatalogError("parametrization has no translation block t")
    tset = {t.index for t in param.blocks["t"]}
    vset = {v.index for v in vertex_vars}
    for v, f in param.coords:
        if v.index not in vset and f.variable_indices() & tset:
            return False
    return True


def equals_up_to_unit(p, q: Polynomial) -> bool:
    """True iff p = c * m * q with c a nonzero constant and m a Laurent monomial."""
    p = as_rational_function(p)
    if q.is_zero or p.is_zero:
        return p.is_zero and q.is_zero
    ratio = p / q
    return ratio.num.is_monomial and ratio.den.is_monomial


def pull_back_equation(eq: Polynomial, pair: CremonaPair, chart: str | None = None) -> RationalFunction:
    """The equation in the target coordinates: eq(inverse(y)) on the chart."""
    R = eq.ring
    b = dict(pair.inverse.bindings())
    name = chart if chart is not None else pair.forward.chart[0]
    if R.has(name):
        b[R.lookup(name)] = as_rational_function(R.one())
    return substitute(eq, b)


# ---------------------------------------------------------------------------
# chain checks: the secant image is a cone over a smaller secant variety


def _image(entry: CatalogEntry, pair: CremonaPair, k: int) -> Parametrization:
    return apply_to_parametrization(pair.forward, secant_parametrization(entry, k))


def segre_secant_chain(m: int, n: int, k: int) -> bool:
    """Sec_k Seg(m,n) lands where the (k+1)-minors of the y_ij block vanish."""
    entry = segre(m, n)
    pair = linearize(entry)
    img = _image(entry, pair, k)
    R = entry.ring
    Yb = [[R.lookup(f"y_{i}{j}").as_poly() for j in range(1, n + 1)] for i in range(1, m + 1)]
    eqs = minors(Yb, k + 1)
    return bool(eqs) and all(membership_check(img, e) for e in eqs)


def veronese_secant_chain(n: int = 2) -> tuple[bool, bool]:
    """Sec V_{2,n}: (conic-block equations hold, conic block is t-free)."""
    entry = veronese2(n)
    pair = linearize(entry)
    img = _image(entry, pair, 1)
    R = entry.ring
    S = [[R.lookup(f"y_{min(i, j)}{max(i, j)}").as_poly() for j in range(1, n + 1)] for i in range(1, n + 1)]
    eqs = minors(S, 2)
    holds = all(membership_check(img, e) for e in eqs)
    trans = secant_translation_form(img, entry.param)
    vertex = [R.lookup(f"y_0{i}") for i in range(1, n + 1)]
    return holds, cone_structure_check(trans, vertex)


def rnc_secant_chain(n: int) -> bool:
    """Sec V_n lands where the 2x2 minors of the Hankel matrix in y_2..y_n vanish."""
    entry = rnc(n)
    pair = linearize(entry)
    img = _image(entry, pair, 1)
    R = entry.ring
    y = lambda i: R.lookup(f"y_{i}").as_poly()
    H = [[y(i) for i in range(2, n)], [y(i) for i in range(3, n + 1)]]
    eqs = minors(H, 2)
    return all(membership_check(img, e) for e in eqs)


def tp_tangent_chain() -> bool:
    """T(TP^2) lands on y_12 y_21 = y_10 y_20."""
    entry = tpn(2)
    pair = linearize(entry)
    img = apply_to_parametrization(pair.forward, tangential_parametrization(entry))
    R = entry.ring
    eq = R.poly("y_12*y_21 - y_10*y_20")
    return membership_check(img, eq)


def grass2_tangent_chain(n: int = 6) -> tuple[bool, bool]:
    """T(G(2,n)) lands on the Plücker quadrics of G(2,n-2) in the y_ij, i >= 2 block."""
    entry = grass2(n)
    pair = linearize(entry)
    img = apply_to_parametrization(pair.forward, tangential_parametrization(entry))
    R = entry.ring
    y = lambda i, j: R.lookup(f"y_{i}{j}").as_poly()
    eqs = [y(i, j) * y(k, l) - y(i, k) * y(j, l) + y(i, l) * y(j, k) for i, j, k, l in itertools.combinations(range(2, n), 4)]
    vertex = [R.lookup(f"y_{a}{j}") for a in (0, 1) for j in range(2, n)]
    return all(membership_check(img, e) for e in eqs), cone_structure_check(img, vertex)


# ---------------------------------------------------------------------------
# G(3, 6)


def g36_maps(ring: Ring | None = None) -> tuple[CremonaPair, CremonaPair]:
    """The quadro-cubic and cubo-cubic linearizations of G(3,6)."""
    R = _ring(ring)
    x0, X, Y, y0 = _g36_coords(R)
    z0, Z, W, w0 = _g36_coords(R, "z", "w", "z_0", "w_0")
    src = tuple(v for row in X for v in row) + tuple(v for row in Y for v in row) + (y0,)
    tgt = tuple(v for row in Z for v in row) + tuple(v for row in W for v in row) + (w0,)
    Xp = [[v.as_poly() for v in row] for row in X]
    Zp = [[v.as_poly() for v in row] for row in Z]
    head = [X[i][j].as_poly() for i in range(3) for j in range(3)]
    head += [Y[i][j] - _minor3(Xp, i, j) for i in range(3) for j in range(3)]
    ihead = [Z[i][j].as_poly() for i in range(3) for j in range(3)]
    ihead += [W[i][j] + _minor3(Zp, i, j) for i in range(3) for j in range(3)]
    sign = lambda i: 1 if i % 2 == 0 else -1  # (-1)^{i+1} for 1-based i
    quad_w0 = y0 - sum((X[0][i] * Y[0][i]).scale(sign(i)) for i in range(3))
    quad_y0 = w0 + sum((Z[0][i] * (W[0][i] + _minor3(Zp, 0, i))).scale(sign(i)) for i in range(3))
    cubo_w0 = y0 - determinant(Xp)
    cubo_y0 = w0 + determinant(Zp)
    pairs = []
    for fw, iv in ((quad_w0, quad_y0), (cubo_w0, cubo_y0)):
        forward = RationalMap(src, tgt, head + [fw], (x0.name, z0.name))
        inverse = RationalMap(tgt, src, ihead + [iv], (z0.name, x0.name))
        if invert_triangular(forward).coords != inverse.coords:
            raise MapError("displayed inverse disagrees with triangular inversion")
        pairs.append(pair_from_maps(forward, inverse))
    return pairs[0], pairs[1]


def g36_quartic(ring: Ring | None = None, convention: str = "verbatim") -> Polynomial:
    """The quartic P of T(G(3,6)) on [x_0, X, Y, y_0].

    ``verbatim`` enters P as displayed; it vanishes on T(G(3,6)) when Y is
    the adjugate of A.  ``printed`` substitutes Y_ij -> (-1)^{i+j} Y_ji so
    that P vanishes on the catalog parametrization, where Y holds the
    unsigned minors of A.
    """
    if convention not in ("verbatim", "printed"):
        raise CatalogError(f"unknown convention {convention!r}")
    R = _ring(ring)
    x0, X, Y, y0 = _g36_coords(R)
    Xp = [[v.as_poly() for v in row] for row in X]
    Yp = [[v.as_poly() for v in row] for row in Y]
    if convention == "printed":
        Yp = [[Yp[j][i].scale((-1) ** (i + j)) for j in range(3)] for i in range(3)]
    tr = sum((Xp[i][k] * Yp[k][i] for i in range(3) for k in range(3)), R.zero())
    lead = (x0 * y0 - tr) ** 2
    cross = sum((_minor3(Xp, i, j) * _minor3(Yp, j, i) for i in range(3) for j in range(3)), R.zero())
    return lead + (x0 * determinant(Yp)).scale(4) + (y0 * determinant(Xp)).scale(4) - cross.scale(4)


@dataclass(frozen=True)
class G36Image:
    """An image of T(G(3,6)) under one of the two Cremonas."""

    map_name: str
    convention: str
    poly: Polynomial
    order: str
    leading: tuple[Polynomial, ...]

    @property
    def degree(self) -> int:
        return self.poly.degree()

    @property
    def n_terms(self) -> int:
        return len(self.poly)

    def to_dict(self) -> dict:
        return {
            "map": self.map_name,
            "convention": self.convention,
            "degree": self.degree,
            "terms": self.n_terms,
            "order": self.order,
            "leading": [t.to_text() for t in self.leading],
        }


def g36_tangential_images(
    ring: Ring | None = None, convention: str = "verbatim", order: str = "grevlex"
) -> tuple[G36Image, G36Image]:
    """Substitute each inverse map (with z_0 = 1) into P.

    Leading terms are reported under ``order`` with variable priority
    z_11, ..., z_33, w_11, ..., w_33, w_0.
    """
    R = _ring(ring)
    quad, cubo = g36_maps(R)
    P = g36_quartic(R, convention)
    out = []
    for name, pair in (("quadro-cubic", quad), ("cubo-cubic", cubo)):
        img = pull_back_equation(P, pair, "x_0")
        if not img.is_polynomial:
            raise MapError("inverse map is polynomial, the image should be too")
        poly = img.as_polynomial()
        lead = tuple(leading_terms(poly, 2, order, pair.inverse.source_vars))
        out.append(G36Image(name, convention, poly, order, lead))
    return out[0], out[1]


# ---------------------------------------------------------------------------
# the alternative linearization of G(2, n)


def ghprs_map(entry: CatalogEntry | int) -> CremonaPair:
    """y_0i = 1/x_0i, y_ij = x_ij/(x_0i x_0j) on the chart x_01 = 1.

    Built as a generalized triangular map followed by the monomial
    involution u_0i -> 1/u_0i, u_1j -> u_1j/u_0j.
    """
    if isinstance(entry, int):
        entry = grass2(entry)
    if entry.family != "grass2":
        raise CatalogError("ghprs applies to grass2 only")
    n = entry.data["n"]
    R = entry.ring
    x = lambda i, j: R.lookup(f"x_{i}{j}")
    h, g = [], []
    for i in range(2, n):
        for j in range(i + 1, n):
            d = x(0, i) * x(0, j)
            h.append(1 / d)
            g.append((x(0, i) * x(1, j) - x(0, j) * x(1, i)) / d)
    phi = generalized_triangular(entry.param, h, g, naming=lambda s: "u" + s[1:])
    us = phi.forward.target_vars
    ys = tuple(R.var("y" + u.name[1:]) for u in us)
    u = lambda i, j: R.lookup(f"u_{i}{j}")
    yv = lambda i, j: R.lookup(f"y_{i}{j}")

    def twist(src_of, tgt_vars):
        coords = []
        for v in tgt_vars:
            i, j = int(v.name[2]), int(v.name[3])
            if i == 0:
                coords.append(1 / src_of(0, j))
            elif i == 1:
                coords.append(src_of(1, j) / src_of(0, j))
            else:
                coords.append(src_of(i, j).as_poly())
        return coords

    psi = RationalMap(us, ys, twist(u, ys), ("u_01", "y_01"))
    psi_inv = RationalMap(ys, us, twist(yv, us), ("y_01", "u_01"))
    forward = compose(psi, phi.forward)
    inverse = compose(phi.inverse, psi_inv)
    return pair_from_maps(forward, inverse)


def ghprs_relations(entry: CatalogEntry) -> list[Polynomial]:
    """y_ij - y_ik + y_jk for 1 <= i < j < k <= n-1, with y_01 = 1 understood."""
    n = entry.data["n"]
    R = entry.ring
    y = lambda i, j: R.var(f"y_{i}{j}").as_poly()
    return [y(i, j) - y(i, k) + y(j, k) for i, j, k in itertools.combinations(range(1, n), 3)]
