"""Cumulant Cremona transformations on subset-indexed coordinates.

Coordinates x_I, I ⊆ [n], are listed in the chart x_∅ = 1 and ordered by
(|I|, bitmask), which makes every cumulant map triangular.  The forward
maps come from Möbius values of partition posets; inverses are built
from the Möbius-inversion recursion and independently cross-checked
against generic triangular inversion.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product as _iproduct
from math import factorial
from typing import Sequence

from .maps import (
    CremonaPair,
    MapError,
    Parametrization,
    RationalMap,
    check_inverse,
    homogenize,
    invert_triangular,
    pair_from_maps,
)
from .polycore import Polynomial, RationalFunction, Ring, Var, substitute
from .posets import (
    MAX_GROUND,
    Partition,
    PartitionPoset,
    all_partitions,
    elements_of,
    full_partition_lattice,
    interval_partitions,
    one_cluster_partitions,
    restrict,
)

__all__ = [
    "CumulantError",
    "MAX_CUMULANT_N",
    "subset_name",
    "CumulantCoordinates",
    "MultiIndexCoordinates",
    "l_cumulant_map",
    "binary_cumulant_map",
    "multi_segre_cumulant_map",
    "segre_product_parametrization",
    "linearization_check",
    "multi_segre_linearization_check",
    "multi_segre_parametrization",
    "one_cluster_sum_map",
    "centered_interval_map",
    "secant_segre_parametrization",
    "secant_cumulant_pipeline",
    "secant_cumulant_identity",
    "involution_check",
]

# 2^n coordinates with Bell-number many terms: n = 7 is already slow
MAX_CUMULANT_N = 8


class CumulantError(ValueError):
    pass


def subset_name(prefix: str, mask: int) -> str:
    return f"{prefix}_{{{','.join(str(e) for e in elements_of(mask))}}}"


_SUBSET_RE = re.compile(r"^[A-Za-z]+_\{([0-9,]*)\}$")


def _check_n(n: int) -> None:
    if n < 1:
        raise CumulantError("n must be at least 1")
    if n > MAX_CUMULANT_N:
        raise CumulantError(f"n = {n} exceeds the cap {MAX_CUMULANT_N}")


@dataclass(frozen=True)
class CumulantCoordinates:
    """Subset-indexed variables x_I (and y_I) for I ⊆ [n], chart x_∅ = 1."""

    n: int
    ring: Ring
    prefix: str = "x"

    @staticmethod
    def create(n: int, ring: Ring | None = None, prefix: str = "x") -> "CumulantCoordinates":
        _check_n(n)
        ring = ring if ring is not None else Ring()
        cc = CumulantCoordinates(n, ring, prefix)
        ring.var(cc.chart)
        for m in cc.masks:
            ring.var(subset_name(prefix, m))
        return cc

    @property
    def masks(self) -> list[int]:
        """Nonempty subsets ordered by (size, bitmask)."""
        return sorted(range(1, 1 << self.n), key=lambda m: (bin(m).count("1"), m))

    @property
    def chart(self) -> str:
        return subset_name(self.prefix, 0)

    def var(self, mask: int) -> Var:
        return self.ring.lookup(subset_name(self.prefix, mask))

    @property
    def vars(self) -> tuple[Var, ...]:
        return tuple(self.var(m) for m in self.masks)

    def sibling(self, prefix: str) -> "CumulantCoordinates":
        """The same subsets with another letter, in the same ring."""
        return CumulantCoordinates.create(self.n, self.ring, prefix)

    def mask_of(self, v: Var) -> int:
        m = _SUBSET_RE.match(v.name)
        if not m:
            raise CumulantError(f"{v.name} is not a subset-indexed variable")
        body = m.group(1)
        return sum(1 << (int(e) - 1) for e in body.split(",")) if body else 0


def _prod(ring: Ring, factors) -> Polynomial:
    p = ring.one()
    for f in factors:
        p = p * f
    return p


def _forward_coords(L: PartitionPoset, xs: CumulantCoordinates) -> list[Polynomial]:
    ring = xs.ring
    coords = []
    for I in xs.masks:
        LI = restrict(L, I)
        top = LI.one
        y = ring.zero()
        for pi in LI.elements:
            mu = LI.mobius(pi, top)
            if mu:
                y = y + _prod(ring, (xs.var(B).as_poly() for B in pi.blocks)).scale(mu)
        coords.append(y)
    return coords


def _mobius_inverse_coords(L: PartitionPoset, ys: CumulantCoordinates) -> list[Polynomial]:
    """x_I = Σ_{π∈L(I)} y_π with y_π expanded recursively in the y_J."""
    ring = ys.ring
    x_of: dict[int, Polynomial] = {0: ring.one()}
    for I in ys.masks:
        LI = restrict(L, I)
        top = LI.one
        total = ys.var(I).as_poly()
        for nu in LI.elements:
            if nu == top:
                continue
            y_nu = ring.zero()
            for pi in LI.below(nu):
                mu = LI.mobius(pi, nu)
                if mu:
                    y_nu = y_nu + _prod(ring, (x_of[B] for B in pi.blocks)).scale(mu)
            total = total + y_nu
        x_of[I] = total
    return [x_of[I] for I in ys.masks]


def l_cumulant_map(
    L: PartitionPoset,
    ring: Ring | None = None,
    prefixes: tuple[str, str] = ("x", "y"),
    cross_check: bool = True,
) -> CremonaPair:
    """The 𝓛-cumulant Cremona of a partition poset containing 0̂ and 1̂."""
    if not L.contains_bounds():
        raise CumulantError("the poset must contain the minimal and maximal partitions")
    n = max(elements_of(L.ground))
    if L.ground != (1 << n) - 1:
        raise CumulantError("the poset must live on the ground set 1..n")
    xs = CumulantCoordinates.create(n, ring, prefixes[0])
    ys = xs.sibling(prefixes[1])
    forward = RationalMap(xs.vars, ys.vars, _forward_coords(L, xs), (xs.chart, ys.chart))
    inverse = RationalMap(ys.vars, xs.vars, _mobius_inverse_coords(L, ys), (ys.chart, xs.chart))
    if cross_check:
        generic = invert_triangular(forward)
        if generic.coords != inverse.coords:
            raise CumulantError("Möbius-inversion inverse disagrees with triangular inversion")
    return pair_from_maps(forward, inverse)


def involution_check(L: PartitionPoset, ring: Ring | None = None, twisted: bool = True) -> bool:
    """True iff ψ_L is an involution in the chart x_∅ = 1.

    With ``twisted`` the map is first followed by the projective sign change
    y_∅ ↦ -y_∅, which in the chart negates every coordinate.  The plain
    self-composition already fails at n = 2, where ψ∘ψ sends x_12 to
    x_12 - 2 x_1 x_2.
    """
    from .maps import compose

    n = max(elements_of(L.ground))
    xs = CumulantCoordinates.create(n, ring, "x")
    ys = xs.sibling("y")
    zs = xs.sibling("z")
    sign = -1 if twisted else 1
    first = [c.scale(sign) for c in _forward_coords(L, xs)]
    second = [c.scale(sign) for c in _forward_coords(L, ys)]
    m1 = RationalMap(xs.vars, ys.vars, first, (xs.chart, ys.chart))
    m2 = RationalMap(ys.vars, zs.vars, second, (ys.chart, zs.chart))
    both = compose(m2, m1)
    return all(c == v.as_poly() for c, v in zip(both.coords, xs.vars))


def binary_cumulant_map(n: int, ring: Ring | None = None, prefixes: tuple[str, str] = ("x", "y")) -> CremonaPair:
    """Classical cumulants, with coefficients (-1)^{|π|-1}(|π|-1)! written out directly."""
    _check_n(n)
    xs = CumulantCoordinates.create(n, ring, prefixes[0])
    ys = xs.sibling(prefixes[1])
    R = xs.ring
    fwd, inv = [], []
    for I in xs.masks:
        y = R.zero()
        x = R.zero()
        for pi in all_partitions(I):
            k = len(pi)
            c = (-1) ** (k - 1) * factorial(k - 1)
            y = y + _prod(R, (xs.var(B).as_poly() for B in pi.blocks)).scale(c)
            x = x + _prod(R, (ys.var(B).as_poly() for B in pi.blocks))
        fwd.append(y)
        inv.append(x)
    forward = RationalMap(xs.vars, ys.vars, fwd, (xs.chart, ys.chart))
    inverse = RationalMap(ys.vars, xs.vars, inv, (ys.chart, xs.chart))
    return pair_from_maps(forward, inverse)


def segre_product_parametrization(cc: CumulantCoordinates, param_prefix: str = "t") -> Parametrization:
    """Chart form of the Segre embedding of (P^1)^n: x_I = Π_{i∈I} t_i."""
    ring = cc.ring
    ts = tuple(ring.var(f"{param_prefix}_{i}") for i in range(1, cc.n + 1))
    coords = []
    for I in cc.masks:
        coords.append((cc.var(I), _prod(ring, (ts[i - 1].as_poly() for i in elements_of(I)))))
    return Parametrization(ts, tuple(coords), cc.chart, {"t": ts})


def linearization_check(pair: CremonaPair, n: int) -> bool:
    """True iff the forward map sends Σ_n into {y_I = 0 : |I| >= 2}."""
    src = pair.forward.source_vars
    if len(src) != (1 << n) - 1:
        raise CumulantError("map does not live on subset coordinates of [n]")
    prefix = src[0].name.split("_")[0]
    cc = CumulantCoordinates(n, src[0].ring, prefix)
    param = segre_product_parametrization(cc)
    b = param.bindings()
    for v, t, c in zip(src, pair.forward.target_vars, pair.forward.coords):
        if bin(cc.mask_of(v)).count("1") >= 2 and not substitute(c, b).is_zero:
            return False
    return True


# ---------------------------------------------------------------------------
# multi-index coordinates


@dataclass(frozen=True)
class MultiIndexCoordinates:
    shape: tuple[int, ...]
    ring: Ring
    prefix: str = "x"

    @staticmethod
    def create(shape: Sequence[int], ring: Ring | None = None, prefix: str = "x") -> "MultiIndexCoordinates":
        shape = tuple(shape)
        if any(r < 1 for r in shape):
            raise CumulantError("every factor dimension must be at least 1")
        ring = ring if ring is not None else Ring()
        mc = MultiIndexCoordinates(shape, ring, prefix)
        ring.var(mc.chart)
        for i in mc.indices:
            ring.var(mc.name(i))
        return mc

    def name(self, i: tuple[int, ...]) -> str:
        return f"{self.prefix}_{{{','.join(map(str, i))}}}"

    @staticmethod
    def support(i: tuple[int, ...]) -> int:
        """S(i) as a bitmask over 1..k."""
        return sum(1 << j for j, v in enumerate(i) if v)

    @staticmethod
    def truncate(i: tuple[int, ...], B: int) -> tuple[int, ...]:
        """i(B): agree with i on B, zero elsewhere."""
        return tuple(v if B >> j & 1 else 0 for j, v in enumerate(i))

    @property
    def indices(self) -> list[tuple[int, ...]]:
        """Nonzero multi-indices ordered by (|S(i)|, i)."""
        allidx = [i for i in _iproduct(*(range(r + 1) for r in self.shape)) if any(i)]
        return sorted(allidx, key=lambda i: (sum(1 for v in i if v), i))

    @property
    def chart(self) -> str:
        return self.name((0,) * len(self.shape))

    def var(self, i: tuple[int, ...]) -> Var:
        return self.ring.lookup(self.name(i))

    @property
    def vars(self) -> tuple[Var, ...]:
        return tuple(self.var(i) for i in self.indices)


def multi_segre_cumulant_map(
    shape: Sequence[int], ring: Ring | None = None, prefixes: tuple[str, str] = ("x", "y")
) -> CremonaPair:
    """Cumulants of Seg(r_1,...,r_k); the inverse comes from triangular inversion."""
    shape = tuple(shape)
    if len(shape) < 2:
        raise CumulantError("multi-Segre cumulants need at least two factors")
    if len(shape) > MAX_GROUND:
        raise CumulantError("too many factors")
    xs = MultiIndexCoordinates.create(shape, ring, prefixes[0])
    ys = MultiIndexCoordinates.create(shape, xs.ring, prefixes[1])
    R = xs.ring
    fwd = []
    for i in xs.indices:
        S = xs.support(i)
        y = R.zero()
        for pi in all_partitions(S):
            k = len(pi)
            c = (-1) ** (k - 1) * factorial(k - 1)
            y = y + _prod(R, (xs.var(xs.truncate(i, B)).as_poly() for B in pi.blocks)).scale(c)
        fwd.append(y)
    forward = RationalMap(xs.vars, ys.vars, fwd, (xs.chart, ys.chart))
    inverse = invert_triangular(forward)
    return pair_from_maps(forward, inverse)


def multi_segre_parametrization(mc: MultiIndexCoordinates, param_prefix: str = "t") -> Parametrization:
    """Chart form of Seg(r_1,...,r_k): x_i = Π_{j∈S(i)} t_{j,i_j}."""
    ring = mc.ring
    params: dict[tuple[int, int], Var] = {}
    for i in mc.indices:
        if sum(1 for v in i if v) == 1:
            j = next(a for a, v in enumerate(i) if v)
            params[(j, i[j])] = ring.var(f"{param_prefix}_{{{j + 1},{i[j]}}}")
    coords = []
    for i in mc.indices:
        f = _prod(ring, (params[(j, v)].as_poly() for j, v in enumerate(i) if v))
        coords.append((mc.var(i), f))
    ordered = tuple(params[(next(a for a, v in enumerate(i) if v), max(i))] for i in mc.indices if sum(1 for v in i if v) == 1)
    return Parametrization(ordered, tuple(coords), mc.chart, {"t": ordered})


def multi_segre_linearization_check(pair: CremonaPair, shape: Sequence[int]) -> bool:
    """True iff the forward map sends Seg(shape) into {y_i = 0 : |S(i)| >= 2}."""
    src = pair.forward.source_vars
    prefix = src[0].name.split("_")[0]
    mc = MultiIndexCoordinates(tuple(shape), pair.forward.ring, prefix)
    if tuple(mc.vars) != src:
        raise CumulantError("map does not live on multi-index coordinates of this shape")
    b = multi_segre_parametrization(mc).bindings()
    for i, c in zip(mc.indices, pair.forward.coords):
        if sum(1 for v in i if v) >= 2 and not substitute(c, b).is_zero:
            return False
    return True


# ---------------------------------------------------------------------------
# secant cumulants


def one_cluster_sum_map(xs: CumulantCoordinates, ys: CumulantCoordinates) -> RationalMap:
    """y_I = Σ_{A⊆I} (-1)^{|I∖A|} x_A Π_{i∈I∖A} x_i for |I| >= 2, and y_i = x_i.

    The singleton coordinates are kept (not centred to zero) so that the
    map stays birational.
    """
    R = xs.ring
    coords = []
    for I in xs.masks:
        if bin(I).count("1") == 1:
            coords.append(xs.var(I).as_poly())
            continue
        y = R.zero()
        A = I
        while True:
            rest = I & ~A
            sign = -1 if bin(rest).count("1") % 2 else 1
            xa = xs.var(A).as_poly() if A else R.one()
            y = y + (xa * _prod(R, (xs.var(1 << (e - 1)).as_poly() for e in elements_of(rest)))).scale(sign)
            if A == 0:
                break
            A = (A - 1) & I
        coords.append(y)
    return RationalMap(xs.vars, ys.vars, coords, (xs.chart, ys.chart))


def centered_interval_map(ys: CumulantCoordinates, zs: CumulantCoordinates) -> RationalMap:
    """Interval-partition cumulants of centred moments.

    z_i = y_i, and for |I| >= 2 only interval partitions without
    singleton blocks contribute (a centred first moment is zero).
    """
    R = ys.ring
    L = interval_partitions(ys.n)
    coords = []
    for I in ys.masks:
        if bin(I).count("1") == 1:
            coords.append(ys.var(I).as_poly())
            continue
        LI = restrict(L, I)
        top = LI.one
        z = R.zero()
        for pi in LI.elements:
            if any(bin(B).count("1") == 1 for B in pi.blocks):
                continue
            mu = LI.mobius(pi, top)
            if mu:
                z = z + _prod(R, (ys.var(B).as_poly() for B in pi.blocks)).scale(mu)
        coords.append(z)
    return RationalMap(ys.vars, zs.vars, coords, (ys.chart, zs.chart))


def secant_segre_parametrization(cc: CumulantCoordinates) -> Parametrization:
    """x_I = (1 - s_1) Π a_{i1} + s_1 Π b_{i1} on the chart x_∅ = 1."""
    R = cc.ring
    a = tuple(R.var(f"a_{i}1") for i in range(1, cc.n + 1))
    b = tuple(R.var(f"b_{i}1") for i in range(1, cc.n + 1))
    s = R.var("s_1")
    coords = []
    for I in cc.masks:
        pa = _prod(R, (a[i - 1].as_poly() for i in elements_of(I)))
        pb = _prod(R, (b[i - 1].as_poly() for i in elements_of(I)))
        coords.append((cc.var(I), (1 - s.as_poly()) * pa + s.as_poly() * pb))
    return Parametrization(a + b + (s,), tuple(coords), cc.chart, {"a": a, "b": b, "s": (s,)})


def secant_cumulant_pipeline(n: int, ring: Ring | None = None, check_routes: bool = True) -> Parametrization:
    """Push Sec(Σ_n) through the one-cluster then the centred interval cumulants."""
    from .maps import apply_to_parametrization

    if n < 2:
        raise CumulantError("the secant pipeline needs n >= 2")
    xs = CumulantCoordinates.create(n, ring, "x")
    ys = xs.sibling("y")
    zs = xs.sibling("z")
    psi1 = one_cluster_sum_map(xs, ys)
    if check_routes and n <= 4:
        poset_route = l_cumulant_map(one_cluster_partitions(n), xs.ring, ("x", "y"), cross_check=False)
        if poset_route.forward.coords != psi1.coords:
            raise CumulantError("sum-over-subsets and one-cluster poset routes disagree")
    psi2 = centered_interval_map(ys, zs)
    param = secant_segre_parametrization(xs)
    return apply_to_parametrization(psi2, apply_to_parametrization(psi1, param))


def secant_cumulant_identity(n: int) -> dict[str, bool]:
    """z_I - s_1(1-s_1)(1-2s_1)^{|I|-2} Π(b_{i1}-a_{i1}) == 0, per |I| >= 2."""
    img = secant_cumulant_pipeline(n)
    R = img.ring
    s = R.lookup("s_1").as_poly()
    out = {}
    zs = CumulantCoordinates(n, R, "z")
    for I in zs.masks:
        k = bin(I).count("1")
        if k < 2:
            continue
        closed = s * (1 - s) * (1 - 2 * s) ** (k - 2)
        for i in elements_of(I):
            closed = closed * (R.lookup(f"b_{i}1") - R.lookup(f"a_{i}1"))
        out[zs.var(I).name] = (img.function(zs.var(I)) - closed).is_zero
    return out
