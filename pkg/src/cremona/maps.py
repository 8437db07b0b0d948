"""Rational maps between affine charts and Cremona transformations.

Maps are stored in a distinguished affine chart: one homogeneous
coordinate on each side is set to 1 and only the remaining ones are
listed.  :func:`homogenize` is the single explicit way back to
homogeneous coordinates; it clears denominators with the chart variable
and removes the common content of the coordinate polynomials.

The constructions follow the classical linearization recipe.  Given a
parametrization in normal form (the first ``n`` coordinates are the
parameters themselves) the map subtracting each remaining coordinate's
parametric expression sends the variety to a coordinate subspace.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

from .polycore import (
    Polynomial,
    RationalFunction,
    Ring,
    Var,
    ZeroDenominatorError,
    as_rational_function,
    divide_exact,
    gcd,
    substitute,
    substitute_poly,
)

__all__ = [
    "MapError",
    "CremonaVerificationError",
    "Parametrization",
    "RationalMap",
    "HomogeneousMap",
    "CremonaPair",
    "Monoid",
    "identity_map",
    "compose",
    "check_inverse",
    "apply_to_parametrization",
    "is_triangular",
    "invert_triangular",
    "homogenize",
    "verify_cremona",
    "triangular_from_parametrization",
    "generalized_triangular",
    "maps_to_linear_subspace",
    "pair_from_maps",
    "stereographic_projection",
    "monoidal_extension",
    "double_projection",
    "double_projection_inverse",
    "default_target_name",
]


class MapError(ValueError):
    """Malformed map or incompatible operands."""


class CremonaVerificationError(MapError):
    """A claimed inverse or a fundamental-factor identity failed."""


def default_target_name(name: str) -> str:
    """x_12 -> y_12; anything else gets a trailing prime."""
    if name.startswith("x"):
        return "y" + name[1:]
    return name + "'"


# ---------------------------------------------------------------------------
# parametrizations


@dataclass(frozen=True)
class Parametrization:
    """Affine parametrization: coordinate variable -> function of params.

    ``chart`` names the homogeneous coordinate that is set to 1.  The
    optional ``blocks`` dictionary groups parameters (for instance the
    point block ``t`` and the direction block ``s`` of a tangential
    parametrization).
    """

    params: tuple[Var, ...]
    coords: tuple[tuple[Var, RationalFunction], ...]
    chart: str = "x_0"
    blocks: Mapping[str, tuple[Var, ...]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        object.__setattr__(
            self,
            "coords",
            tuple((v, as_rational_function(f, v.ring)) for v, f in self.coords),
        )
        allowed = {p.index for p in self.params}
        for v, f in self.coords:
            extra = f.variable_indices() - allowed
            if extra:
                bad = ", ".join(f.ring.by_index(i).name for i in sorted(extra))
                raise MapError(f"coordinate {v.name} involves non-parameters: {bad}")

    @property
    def ring(self) -> Ring:
        return self.coords[0][0].ring

    @property
    def coord_vars(self) -> tuple[Var, ...]:
        return tuple(v for v, _ in self.coords)

    @property
    def functions(self) -> tuple[RationalFunction, ...]:
        return tuple(f for _, f in self.coords)

    def function(self, v: Var) -> RationalFunction:
        for w, f in self.coords:
            if w == v:
                return f
        raise KeyError(v.name)

    def __getitem__(self, name: str) -> RationalFunction:
        return self.function(self.ring.lookup(name))

    @property
    def normal_form(self) -> bool:
        n = len(self.params)
        if n > len(self.coords):
            return False
        return all(
            self.coords[k][1] == self.params[k].as_poly() for k in range(n)
        )

    def bindings(self) -> dict[Var, RationalFunction]:
        return {v: f for v, f in self.coords}

    def point(self, values: Mapping[Var, object]) -> dict[Var, object]:
        """Evaluate all coordinates at parameter values."""
        return {v: f.evaluate(values) for v, f in self.coords}

    def to_dict(self) -> dict:
        return {
            "chart": self.chart,
            "params": [p.name for p in self.params],
            "coords": [[v.name, f.to_text()] for v, f in self.coords],
        }


# ---------------------------------------------------------------------------
# rational maps


@dataclass(frozen=True)
class RationalMap:
    """Chart form of a rational map: one coordinate per target variable."""

    source_vars: tuple[Var, ...]
    target_vars: tuple[Var, ...]
    coords: tuple[RationalFunction, ...]
    chart: tuple[str, str] = ("x_0", "y_0")

    def __post_init__(self):
        object.__setattr__(self, "source_vars", tuple(self.source_vars))
        object.__setattr__(self, "target_vars", tuple(self.target_vars))
        if not self.source_vars:
            raise MapError("a map needs source variables")
        ring = self.source_vars[0].ring
        object.__setattr__(
            self, "coords", tuple(as_rational_function(c, ring) for c in self.coords)
        )
        object.__setattr__(self, "chart", tuple(self.chart))
        if len(self.coords) != len(self.target_vars):
            raise MapError("one coordinate per target variable is required")
        allowed = {v.index for v in self.source_vars}
        for t, c in zip(self.target_vars, self.coords):
            if c.ring is not ring:
                raise MapError(f"coordinate {t.name} lives in another registry")
            extra = c.variable_indices() - allowed
            if extra:
                bad = ", ".join(ring.by_index(i).name for i in sorted(extra))
                raise MapError(f"coordinate {t.name} involves non-source variables: {bad}")

    @property
    def ring(self) -> Ring:
        return self.source_vars[0].ring

    def degree(self) -> int:
        """Largest numerator or denominator degree among the coordinates."""
        return max((c.degree() for c in self.coords), default=0)

    def coordinate(self, name: str) -> RationalFunction:
        for t, c in zip(self.target_vars, self.coords):
            if t.name == name:
                return c
        raise KeyError(name)

    def __call__(self, point: Mapping[Var, object]) -> dict[Var, object]:
        return {t: c.evaluate(point) for t, c in zip(self.target_vars, self.coords)}

    def bindings(self) -> dict[Var, RationalFunction]:
        """Target variable -> coordinate, for substitution into functions of the target."""
        return dict(zip(self.target_vars, self.coords))

    def pullback(self, p) -> RationalFunction:
        """Express a function of the target variables in source variables."""
        return substitute(p, self.bindings())

    def is_identity(self) -> bool:
        return len(self.source_vars) == len(self.target_vars) and all(
            c == s.as_poly() for c, s in zip(self.coords, self.source_vars)
        )

    def to_dict(self) -> dict:
        return {
            "chart": {"source": self.chart[0], "target": self.chart[1]},
            "source_vars": [v.name for v in self.source_vars],
            "target_vars": [v.name for v in self.target_vars],
            "coords": [c.to_text() for c in self.coords],
        }


def identity_map(vars: Sequence[Var], chart: str = "x_0") -> RationalMap:
    return RationalMap(tuple(vars), tuple(vars), tuple(v.as_poly() for v in vars), (chart, chart))


def compose(g: RationalMap, f: RationalMap) -> RationalMap:
    """g after f."""
    if tuple(f.target_vars) != tuple(g.source_vars):
        raise MapError("composition needs f's target variables to equal g's source variables")
    b = f.bindings()
    coords = tuple(substitute(c, b) for c in g.coords)
    return RationalMap(f.source_vars, g.target_vars, coords, (f.chart[0], g.chart[1]))


def check_inverse(f: RationalMap, g: RationalMap, both: bool = True) -> bool:
    """True if g after f (and, with ``both``, f after g) is the identity."""
    if tuple(f.target_vars) != tuple(g.source_vars) or tuple(g.target_vars) != tuple(f.source_vars):
        return False
    if not all(c == s.as_poly() for c, s in zip(compose(g, f).coords, f.source_vars)):
        return False
    if both and not all(c == s.as_poly() for c, s in zip(compose(f, g).coords, g.source_vars)):
        return False
    return True


def apply_to_parametrization(m: RationalMap, param: Parametrization) -> Parametrization:
    """Push a parametrization through a map; the result parametrizes the image."""
    if tuple(m.source_vars) != tuple(param.coord_vars):
        raise MapError("map source variables must equal the parametrization's coordinates")
    b = param.bindings()
    coords = []
    for t, c in zip(m.target_vars, m.coords):
        den = substitute(c.den, b)
        if den.is_zero:
            raise ZeroDenominatorError(
                f"denominator {c.den} of coordinate {t.name} vanishes on the parametrized variety"
            )
        coords.append((t, substitute(c.num, b) / den))
    return Parametrization(param.params, tuple(coords), m.chart[1], dict(param.blocks))


# ---------------------------------------------------------------------------
# triangular maps


def _split_linear(c: RationalFunction, v: Var) -> tuple[Polynomial, Polynomial, Polynomial]:
    """c = (A*v + B)/D with A, B, D free of v."""
    A = c.num.diff(v)
    B = c.num - A * v.as_poly()
    return A, B, c.den


def is_triangular(f: RationalMap) -> tuple[bool, str]:
    """Syntactic test: coordinate i uses only source variables up to i,
    has degree at most 1 in variable i (none in the denominator), and a
    nonzero coefficient of variable i."""
    if len(f.source_vars) != len(f.target_vars):
        return False, "source and target dimensions differ"
    pos = {v.index: k for k, v in enumerate(f.source_vars)}
    for i, (t, c) in enumerate(zip(f.target_vars, f.coords)):
        v = f.source_vars[i]
        late = [f.ring.by_index(j).name for j in c.variable_indices() if pos[j] > i]
        if late:
            return False, f"coordinate {t.name} involves later variables {', '.join(sorted(late))}"
        if c.den.degree_in(v) > 0:
            return False, f"coordinate {t.name} has {v.name} in its denominator"
        if c.num.degree_in(v) != 1:
            return False, f"coordinate {t.name} is not linear in {v.name}"
    return True, ""


def invert_triangular(f: RationalMap) -> RationalMap:
    """Inverse of a triangular map by forward substitution."""
    ok, why = is_triangular(f)
    if not ok:
        raise MapError(f"map is not triangular: {why}")
    inv: list[RationalFunction] = []
    b: dict[Var, RationalFunction] = {}
    for i, (t, c) in enumerate(zip(f.target_vars, f.coords)):
        v = f.source_vars[i]
        A, B, D = _split_linear(c, v)
        a = substitute(A, b)
        if a.is_zero:
            raise MapError(f"coefficient of {v.name} in coordinate {t.name} vanishes")
        xi = (t.as_poly() * substitute(D, b) - substitute(B, b)) / a
        inv.append(xi)
        b[v] = xi
    return RationalMap(f.target_vars, f.source_vars, tuple(inv), (f.chart[1], f.chart[0]))


# ---------------------------------------------------------------------------
# homogeneous form


@dataclass(frozen=True)
class HomogeneousMap:
    """A map given by coprime homogeneous polynomials of a common degree."""

    source_vars: tuple[Var, ...]
    target_vars: tuple[Var, ...]
    polys: tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "source_vars", tuple(self.source_vars))
        object.__setattr__(self, "target_vars", tuple(self.target_vars))
        object.__setattr__(
            self, "polys", tuple(p.as_poly() if isinstance(p, Var) else p for p in self.polys)
        )
        if len(self.polys) != len(self.target_vars):
            raise MapError("one polynomial per target variable is required")
        degs = {p.degree() for p in self.polys if not p.is_zero}
        if len(degs) > 1 or not all(p.is_homogeneous() for p in self.polys):
            raise MapError("coordinates must be homogeneous of a common degree")

    @property
    def degree(self) -> int:
        return max(p.degree() for p in self.polys)

    @property
    def ring(self) -> Ring:
        return self.source_vars[0].ring

    def is_coprime(self) -> bool:
        g = self.polys[0]
        for p in self.polys[1:]:
            g = gcd(g, p)
            if g.is_constant:
                return True
        return g.is_constant

    def indeterminacy_generators(self) -> tuple[Polynomial, ...]:
        """The coordinate polynomials, whose common zeros form the indeterminacy scheme."""
        return self.polys

    def apply(self, p: Polynomial) -> Polynomial:
        """Substitute the coordinates into a polynomial in the target variables."""
        return substitute_poly(p, dict(zip(self.target_vars, self.polys)))

    def compose_after(self, f: "HomogeneousMap") -> "HomogeneousMap":
        """self after f, without removing common factors."""
        if tuple(f.target_vars) != tuple(self.source_vars):
            raise MapError("composition variable mismatch")
        b = dict(zip(self.source_vars, f.polys))
        return HomogeneousMap(
            f.source_vars, self.target_vars, tuple(substitute_poly(p, b) for p in self.polys)
        )

    def proportional_to(self, polys: Sequence[Polynomial]) -> bool:
        """True if the coordinate vectors agree up to a common polynomial factor."""
        if len(polys) != len(self.polys):
            return False
        k = next((i for i, p in enumerate(self.polys) if not p.is_zero), None)
        if k is None or polys[k].is_zero:
            return False
        a, b = self.polys[k], polys[k]
        return all(p * b == q * a for p, q in zip(self.polys, polys))

    def dehomogenize(self) -> RationalMap:
        """Chart form with the first source and target coordinates set to 1."""
        x0, y0 = self.source_vars[0], self.target_vars[0]
        F0 = self.polys[0].dehomogenize(x0)
        if F0.is_zero:
            raise MapError("the chart coordinate vanishes identically")
        coords = tuple(RationalFunction(p.dehomogenize(x0), F0) for p in self.polys[1:])
        return RationalMap(self.source_vars[1:], self.target_vars[1:], coords, (x0.name, y0.name))

    def to_dict(self) -> dict:
        return {
            "source_vars": [v.name for v in self.source_vars],
            "target_vars": [v.name for v in self.target_vars],
            "polys": [p.to_text() for p in self.polys],
            "degree": self.degree,
        }


def _lcm(a: Polynomial, b: Polynomial) -> Polynomial:
    if a.is_constant:
        return b
    if b.is_constant:
        return a
    return divide_exact(a * b, gcd(a, b)).monic()


def homogenize(f: RationalMap) -> HomogeneousMap:
    """Homogeneous form of a chart map, with common content removed."""
    ring = f.ring
    x0 = ring.var(f.chart[0])
    y0 = ring.var(f.chart[1])
    if x0 in f.source_vars or y0 in f.target_vars:
        raise MapError("chart variable collides with a chart coordinate")
    Q = ring.one()
    for c in f.coords:
        Q = _lcm(Q, c.den)
    P = [divide_exact(Q, c.den) * c.num for c in f.coords]
    delta = max([Q.degree()] + [p.degree() for p in P])
    polys = [Q.homogenize(x0, delta)] + [p.homogenize(x0, delta) for p in P]
    g = polys[0]
    for p in polys[1:]:
        if g.is_constant:
            break
        g = gcd(g, p)
    if not g.is_constant:
        polys = [divide_exact(p, g) for p in polys]
    return HomogeneousMap((x0,) + f.source_vars, (y0,) + f.target_vars, tuple(polys))


# ---------------------------------------------------------------------------
# Cremona pairs


@dataclass(frozen=True)
class CremonaPair:
    forward: RationalMap
    inverse: RationalMap
    delta: int
    delta_prime: int
    fundamental_factor: Polynomial | None = None
    verified: bool = False

    def homogeneous(self) -> tuple[HomogeneousMap, HomogeneousMap]:
        return homogenize(self.forward), homogenize(self.inverse)

    def with_fundamental_factor(self) -> "CremonaPair":
        """Run the homogeneous verification and record the fundamental factor."""
        if self.fundamental_factor is not None:
            return self
        return verify_cremona(self.forward, self.inverse)

    def degree_law_holds(self) -> bool:
        p = self.with_fundamental_factor()
        return p.fundamental_factor.degree() == p.delta * p.delta_prime - 1

    def to_dict(self) -> dict:
        return {
            "forward": self.forward.to_dict(),
            "inverse": self.inverse.to_dict(),
            "delta": self.delta,
            "delta_prime": self.delta_prime,
            "fundamental_factor": None
            if self.fundamental_factor is None
            else self.fundamental_factor.to_text(),
            "verified": self.verified,
        }


def pair_from_maps(forward: RationalMap, inverse: RationalMap, both: bool = True) -> CremonaPair:
    """Bundle two chart maps after checking they are mutually inverse."""
    if not check_inverse(forward, inverse, both=both):
        raise CremonaVerificationError("the given maps are not mutually inverse on the chart")
    F, G = homogenize(forward), homogenize(inverse)
    return CremonaPair(forward, inverse, F.degree, G.degree, None, True)


def verify_cremona(f: RationalMap | HomogeneousMap, g: RationalMap | HomogeneousMap) -> CremonaPair:
    """Check G_i(F) = Phi * x_i for every i and deg Phi = delta*delta' - 1."""
    if isinstance(f, HomogeneousMap):
        F = f
        if not F.is_coprime():
            raise CremonaVerificationError("forward coordinate polynomials are not coprime")
    else:
        F = homogenize(f)
    if isinstance(g, HomogeneousMap):
        G = g
        if not G.is_coprime():
            raise CremonaVerificationError("inverse coordinate polynomials are not coprime")
    else:
        G = homogenize(g)
    if tuple(G.source_vars) != tuple(F.target_vars) or tuple(G.target_vars) != tuple(F.source_vars):
        raise MapError("maps are not between matching spaces")
    back = G.compose_after(F).polys
    x = F.source_vars
    try:
        phi = divide_exact(back[0], x[0].as_poly())
    except ArithmeticError:
        raise CremonaVerificationError(
            f"coordinate {G.target_vars[0].name}: G(F) is not a multiple of {x[0].name}"
        ) from None
    for i, b in enumerate(back):
        if b != phi * x[i]:
            raise CremonaVerificationError(
                f"coordinate {G.target_vars[i].name}: G(F) differs from Phi*{x[i].name}"
            )
    delta, delta_p = F.degree, G.degree
    if phi.degree() != delta * delta_p - 1:
        raise CremonaVerificationError(
            f"deg Phi = {phi.degree()} but delta*delta' - 1 = {delta * delta_p - 1}"
        )
    fwd = f if isinstance(f, RationalMap) else F.dehomogenize()
    inv = g if isinstance(g, RationalMap) else G.dehomogenize()
    return CremonaPair(fwd, inv, delta, delta_p, phi, True)


# ---------------------------------------------------------------------------
# linearizing constructions


def _target_vars(param: Parametrization, naming, target_names) -> tuple[Var, ...]:
    ring = param.ring
    if target_names is not None:
        names = list(target_names)
        if len(names) != len(param.coords):
            raise MapError("one target name per coordinate is required")
    else:
        names = [(naming or default_target_name)(v.name) for v in param.coord_vars]
    return tuple(ring.var(n) for n in names)


def _require_normal_form(param: Parametrization) -> None:
    if not param.normal_form:
        raise MapError(
            "parametrization is not in normal form: reorder the coordinates so that "
            "the first n are the parameters themselves"
        )


def _in_coords(param: Parametrization) -> list[RationalFunction]:
    """Each coordinate function rewritten in the first n coordinate variables."""
    n = len(param.params)
    xs = param.coord_vars
    ren = {t: xs[k].as_poly() for k, t in enumerate(param.params)}
    return [substitute(f, ren) if k >= n else as_rational_function(xs[k]) for k, f in enumerate(param.functions)]


def triangular_from_parametrization(
    param: Parametrization,
    target_names: Sequence[str] | None = None,
    naming: Callable[[str], str] | None = None,
    verify: bool = True,
) -> CremonaPair:
    """x_j -> x_j - f_j(x_1..x_n) for the non-parameter coordinates."""
    _require_normal_form(param)
    n = len(param.params)
    xs = param.coord_vars
    ys = _target_vars(param, naming, target_names)
    fx = _in_coords(param)
    ren_y = {xs[k]: ys[k].as_poly() for k in range(n)}
    fwd, inv = [], []
    for k in range(len(xs)):
        if k < n:
            fwd.append(xs[k].as_poly())
            inv.append(ys[k].as_poly())
        else:
            fwd.append(xs[k] - fx[k])
            inv.append(ys[k] + substitute(fx[k], ren_y))
    y_chart = (naming or default_target_name)(param.chart)
    forward = RationalMap(xs, ys, fwd, (param.chart, y_chart))
    inverse = RationalMap(ys, xs, inv, (y_chart, param.chart))
    if verify:
        return pair_from_maps(forward, inverse)
    F, G = homogenize(forward), homogenize(inverse)
    return CremonaPair(forward, inverse, F.degree, G.degree, None, False)


def generalized_triangular(
    param: Parametrization,
    h: Sequence,
    g: Sequence,
    target_names: Sequence[str] | None = None,
    naming: Callable[[str], str] | None = None,
) -> CremonaPair:
    """phi_i = h_i(x_<i) * (x_i - f_i(x_1..x_n)) + g_i(x_<i) for i > n.

    ``h`` and ``g`` are indexed by the non-parameter coordinates.
    """
    _require_normal_form(param)
    n = len(param.params)
    xs = param.coord_vars
    r = len(xs)
    ring = param.ring
    if len(h) != r - n or len(g) != r - n:
        raise MapError(f"need {r - n} values of h and g, one per non-parameter coordinate")
    ys = _target_vars(param, naming, target_names)
    fx = _in_coords(param)
    pos = {v.index: k for k, v in enumerate(xs)}
    fwd = [xs[k].as_poly() for k in range(n)]
    for j in range(n, r):
        hj = as_rational_function(h[j - n], ring)
        gj = as_rational_function(g[j - n], ring)
        if hj.is_zero:
            raise MapError(f"h for coordinate {xs[j].name} vanishes identically")
        for what, fn in (("h", hj), ("g", gj)):
            late = [i for i in fn.variable_indices() if i not in pos or pos[i] >= j]
            if late:
                raise MapError(
                    f"{what} for coordinate {xs[j].name} may only involve earlier coordinates"
                )
        fwd.append(hj * (xs[j] - fx[j]) + gj)
    y_chart = (naming or default_target_name)(param.chart)
    forward = RationalMap(xs, ys, fwd, (param.chart, y_chart))
    inverse = invert_triangular(forward)
    return pair_from_maps(forward, inverse)


def maps_to_linear_subspace(param: Parametrization, g: Sequence) -> bool:
    """True iff every g_i vanishes on the parametrized variety."""
    b = param.bindings()
    ring = param.ring
    return all(substitute(as_rational_function(gi, ring), b).is_zero for gi in g)


# ---------------------------------------------------------------------------
# monoids


@dataclass(frozen=True)
class Monoid:
    """Hypersurface f_{d-1}(x_0..x_{r-1}) x_r + f_d(x_0..x_{r-1}) = 0, vertex [0,..,0,1]."""

    vars: tuple[Var, ...]
    f_d: Polynomial
    f_dm1: Polynomial

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if self.f_dm1.is_zero:
            raise MapError("f_{d-1} must be nonzero")
        d = self.f_dm1.degree() + 1
        if not self.f_dm1.is_homogeneous() or not self.f_d.is_homogeneous():
            raise MapError("monoid data must be homogeneous")
        if not self.f_d.is_zero and self.f_d.degree() != d:
            raise MapError("deg f_d must be deg f_{d-1} + 1")
        allowed = {v.index for v in self.vars[:-1]}
        for p in (self.f_d, self.f_dm1):
            if p.variable_indices() - allowed:
                raise MapError("monoid data may not involve the last coordinate")

    @property
    def n_vars(self) -> int:
        return len(self.vars)

    @property
    def degree(self) -> int:
        return self.f_dm1.degree() + 1

    @property
    def equation(self) -> Polynomial:
        return self.f_dm1 * self.vars[-1] + self.f_d

    @property
    def irreducible(self) -> bool:
        """Recorded from gcd(f_d, f_{d-1}) = 1."""
        return gcd(self.f_d, self.f_dm1).is_constant


def _primed(vars: Sequence[Var]) -> tuple[Var, ...]:
    return tuple(v.ring.var(v.name + "'") for v in vars)


def stereographic_projection(
    monoid: Monoid, target_vars: Sequence[Var] | None = None
) -> tuple[HomogeneousMap, HomogeneousMap]:
    """Projection from the vertex to {x_r = 0} and its inverse onto the monoid."""
    xs = monoid.vars
    us = tuple(target_vars) if target_vars is not None else _primed(xs[:-1])
    if len(us) != len(xs) - 1:
        raise MapError("target of the projection has one coordinate fewer")
    pi = HomogeneousMap(xs, us, tuple(x.as_poly() for x in xs[:-1]))
    ren = dict(zip(xs[:-1], us))
    fm = monoid.f_dm1.rename(monoid.f_dm1.ring, ren)
    fd = monoid.f_d.rename(monoid.f_d.ring, ren)
    inv = HomogeneousMap(us, xs, tuple(fm * u for u in us) + (-fd,))
    return pi, inv


def monoidal_extension(omega: HomogeneousMap, h: Polynomial, monoid: Monoid, new_target: Var | None = None) -> HomogeneousMap:
    """[x_0..x_{r+1}] -> [h F_0, ..., h F_r, f] with f the monoid equation."""
    if len(monoid.vars) != len(omega.source_vars) + 1 or tuple(monoid.vars[:-1]) != tuple(omega.source_vars):
        raise MapError("monoid must live on omega's source coordinates plus one")
    d, delta = monoid.degree, omega.degree
    if d < delta:
        raise MapError(f"monoid degree {d} is below the degree {delta} of omega")
    if h.is_zero or not h.is_homogeneous() or h.degree() != d - delta:
        raise MapError(f"h must be a nonzero form of degree d - delta = {d - delta}")
    if h.variable_indices() - {v.index for v in omega.source_vars}:
        raise MapError("h must not involve the new coordinate")
    yr1 = new_target if new_target is not None else omega.ring.var(monoid.vars[-1].name + "'")
    polys = tuple(h * F for F in omega.polys) + (monoid.equation,)
    return HomogeneousMap(monoid.vars, omega.target_vars + (yr1,), polys)


def double_projection(
    xs: Sequence[Var],
    f_d: Polynomial,
    g_dm1: Polynomial,
    h_dm1: Polynomial,
    f_dm2: Polynomial,
    target_vars: Sequence[Var] | None = None,
) -> HomogeneousMap:
    """Composite of the stereographic projections of a bimonoid from its two vertices.

    ``xs`` are x_0..x_r; the map goes from {x_r = 0} (coordinates
    x_0..x_{r-1}) to {x_{r-1} = 0} (coordinates x_0..x_{r-2}, x_r).
    """
    xs = tuple(xs)
    _check_bimonoid(xs, f_d, g_dm1, h_dm1, f_dm2)
    src = xs[:-1]
    tgt = tuple(target_vars) if target_vars is not None else _primed(xs[:-2] + (xs[-1],))
    lam = f_dm2 * xs[-2] + h_dm1
    polys = tuple(lam * x for x in xs[:-2]) + (-f_d - xs[-2] * g_dm1,)
    return HomogeneousMap(src, tgt, polys)


def double_projection_inverse(
    xs: Sequence[Var],
    f_d: Polynomial,
    g_dm1: Polynomial,
    h_dm1: Polynomial,
    f_dm2: Polynomial,
    source_vars: Sequence[Var],
) -> HomogeneousMap:
    """The projection with the two vertices swapped, from {x_{r-1}=0} back to {x_r=0}."""
    xs = tuple(xs)
    _check_bimonoid(xs, f_d, g_dm1, h_dm1, f_dm2)
    src = tuple(source_vars)
    ren = dict(zip(xs[:-2] + (xs[-1],), src))
    ring = xs[0].ring
    fd, g, h, f2 = (p.rename(ring, ren) for p in (f_d, g_dm1, h_dm1, f_dm2))
    lam = f2 * src[-1] + g
    polys = tuple(lam * u for u in src[:-1]) + (-fd - src[-1] * h,)
    return HomogeneousMap(src, xs[:-1], polys)


def _check_bimonoid(xs, f_d, g_dm1, h_dm1, f_dm2) -> None:
    if len(xs) < 3:
        raise MapError("a bimonoid needs at least three coordinates")
    allowed = {v.index for v in xs[:-2]}
    d = f_d.degree() if not f_d.is_zero else None
    for name, p, off in (("f_d", f_d, 0), ("g_{d-1}", g_dm1, 1), ("h_{d-1}", h_dm1, 1), ("f_{d-2}", f_dm2, 2)):
        if p.variable_indices() - allowed:
            raise MapError(f"{name} may only involve x_0..x_(r-2)")
        if not p.is_zero and not p.is_homogeneous():
            raise MapError(f"{name} must be homogeneous")
        if d is not None and not p.is_zero and p.degree() != d - off:
            raise MapError(f"{name} has degree {p.degree()}, expected {d - off}")
