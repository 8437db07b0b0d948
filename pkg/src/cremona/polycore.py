"""Exact sparse multivariate polynomials and rational functions over Q.

Every other module of the package is a client of this one.  Values are
immutable once built; all operations return new objects.

Variables live in a :class:`Ring` (a variable registry).  The registry
assigns each name a dense index in declaration order and the monomial
order is graded lexicographic on that index, so canonical forms and
printed text are deterministic.

A monomial is stored as a tuple of exponents indexed by variable, with
trailing zeros stripped.  That is the same information as a sorted
sparse list of ``(variable, exponent)`` pairs, and tuple comparison then
coincides with lexicographic comparison.  Coefficients are ``gmpy2.mpq``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from operator import add
from typing import Iterable, Mapping, Sequence, Union

from gmpy2 import mpq

__all__ = [
    "PolyError",
    "RegistryMismatchError",
    "DegreeLimitError",
    "ZeroDenominatorError",
    "NotDivisibleError",
    "RankSamplingError",
    "Limits",
    "LIMITS",
    "Ring",
    "Var",
    "Polynomial",
    "RationalFunction",
    "as_rational_function",
    "gcd",
    "divide_exact",
    "substitute",
    "partial_derivative",
    "homogeneous_components",
    "leading_terms",
    "polar_form",
    "jacobian",
    "rank_at_point",
    "exact_generic_rank",
    "format_coefficient",
]


class PolyError(Exception):
    """Base class for kernel errors."""


class RegistryMismatchError(PolyError, ValueError):
    """Operands come from different variable registries."""


class DegreeLimitError(PolyError):
    """A result would exceed the configured total-degree guard."""


class ZeroDenominatorError(PolyError, ZeroDivisionError):
    """A denominator is (or evaluates to) zero."""


class NotDivisibleError(PolyError, ArithmeticError):
    """Exact division was requested but the divisor does not divide."""


class RankSamplingError(PolyError):
    """Every sampled point hit a zero of some denominator."""


@dataclass
class Limits:
    """Blow-up guards.  ``max_vars=None`` means no cap on registry size."""

    max_degree: int = 64
    max_vars: int | None = None


LIMITS = Limits()

Scalar = Union[int, Fraction, "mpq"]
_ZERO = mpq(0)
_ONE = mpq(1)
_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_{},.']*$")


def _to_mpq(c) -> mpq:
    if isinstance(c, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(c, int):
        return mpq(c)
    if type(c) is type(_ONE):
        return c
    if isinstance(c, Fraction):
        return mpq(c.numerator, c.denominator)
    if isinstance(c, Rational):
        return mpq(int(c.numerator), int(c.denominator))
    raise TypeError(f"not an exact rational: {c!r}")


def _is_scalar(c) -> bool:
    return (isinstance(c, (int, Fraction, Rational)) or type(c) is type(_ONE)) and not isinstance(c, bool)


def format_coefficient(c) -> str:
    c = _to_mpq(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# monomials: exponent tuples with trailing zeros stripped


def _mmul(a: tuple, b: tuple) -> tuple:
    la, lb = len(a), len(b)
    if la == lb:
        return tuple(map(add, a, b))
    if la < lb:
        a, b, lb = b, a, la
    return tuple(map(add, a[:lb], b)) + a[lb:]


def _strip(m) -> tuple:
    m = list(m)
    while m and m[-1] == 0:
        m.pop()
    return tuple(m)


def _mdivides(a: tuple, b: tuple) -> bool:
    """True if monomial a divides monomial b."""
    if len(a) > len(b):
        return False
    for ea, eb in zip(a, b):
        if ea > eb:
            return False
    return True


def _mdiv(b: tuple, a: tuple) -> tuple:
    """b / a, assuming a divides b."""
    out = list(b)
    for i, e in enumerate(a):
        out[i] -= e
    return _strip(out)


def _mgcd(a: tuple, b: tuple) -> tuple:
    return _strip(min(x, y) for x, y in zip(a, b))


def _grlex_key(m: tuple):
    return (sum(m), m)


# ---------------------------------------------------------------------------
# registry


class Var:
    """A named variable of a :class:`Ring`.  Arithmetic promotes to Polynomial."""

    __slots__ = ("ring", "name", "index")

    def __init__(self, ring: "Ring", name: str, index: int):
        self.ring = ring
        self.name = name
        self.index = index

    def as_poly(self) -> "Polynomial":
        m = (0,) * self.index + (1,)
        return Polynomial(self.ring, {m: _ONE})

    def __repr__(self):
        return f"Var({self.name!r}, {self.index})"

    def __str__(self):
        return self.name

    def __hash__(self):
        return hash((id(self.ring), self.index))

    def __eq__(self, other):
        if isinstance(other, Var):
            return self.ring is other.ring and self.index == other.index
        return NotImplemented

    def __lt__(self, other):
        return self.index < other.index

    # arithmetic sugar
    def __add__(self, o):
        return self.as_poly() + o

    def __radd__(self, o):
        return o + self.as_poly()

    def __sub__(self, o):
        return self.as_poly() - o

    def __rsub__(self, o):
        return o - self.as_poly()

    def __mul__(self, o):
        return self.as_poly() * o

    def __rmul__(self, o):
        return o * self.as_poly()

    def __truediv__(self, o):
        return self.as_poly() / o

    def __rtruediv__(self, o):
        return o / self.as_poly()

    def __pow__(self, e):
        return self.as_poly() ** e

    def __neg__(self):
        return -self.as_poly()


class Ring:
    """Variable registry.  Names are unique; indices are dense and stable.

    ``var(name)`` is get-or-create, so a construction may keep declaring
    variables as it goes.  Declaration order fixes the monomial order.
    """

    def __init__(self, names: Iterable[str] = ()):
        self._vars: list[Var] = []
        self._by_name: dict[str, Var] = {}
        for n in names:
            self.var(n)

    def var(self, name: str) -> Var:
        v = self._by_name.get(name)
        if v is not None:
            return v
        if not _NAME_RE.match(name):
            raise ValueError(f"invalid variable name {name!r}")
        if LIMITS.max_vars is not None and len(self._vars) >= LIMITS.max_vars:
            raise DegreeLimitError(
                f"registry would exceed max_vars={LIMITS.max_vars} declaring {name!r}"
            )
        v = Var(self, name, len(self._vars))
        self._vars.append(v)
        self._by_name[name] = v
        return v

    def vars(self, *names: str) -> list[Var]:
        return [self.var(n) for n in names]

    def gen(self, name: str) -> "Polynomial":
        return self.var(name).as_poly()

    def lookup(self, name: str) -> Var:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def has(self, name: str) -> bool:
        return name in self._by_name

    def by_index(self, i: int) -> Var:
        return self._vars[i]

    @property
    def variables(self) -> tuple[Var, ...]:
        return tuple(self._vars)

    def __len__(self):
        return len(self._vars)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {(): _ONE})

    def const(self, c) -> "Polynomial":
        c = _to_mpq(c)
        return Polynomial(self, {(): c} if c else {})

    def poly(self, text: str, declare: bool = False) -> "Polynomial":
        return Polynomial.parse(text, self, declare=declare)

    def rational(self, text: str, declare: bool = False) -> "RationalFunction":
        return RationalFunction.parse(text, self, declare=declare)

    def __repr__(self):
        return f"Ring({len(self._vars)} vars)"


# ---------------------------------------------------------------------------
# polynomials


def _clean(terms: dict) -> dict:
    return {m: c for m, c in terms.items() if c}


class Polynomial:
    """Sparse polynomial with exact rational coefficients.

    ``terms`` maps exponent tuples to nonzero ``mpq``; the zero polynomial
    has no terms.  Canonical order is produced on demand by :meth:`terms`.
    """

    __slots__ = ("ring", "_t", "_deg", "_hash")

    def __init__(self, ring: Ring, terms: dict | None = None):
        self.ring = ring
        self._t = terms if terms is not None else {}
        self._deg = None
        self._hash = None

    # -- construction helpers
    def _new(self, terms: dict) -> "Polynomial":
        return Polynomial(self.ring, terms)

    def _coerce(self, other) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            if other.ring is not self.ring:
                raise RegistryMismatchError("operands belong to different registries")
            return other
        if isinstance(other, Var):
            if other.ring is not self.ring:
                raise RegistryMismatchError("operands belong to different registries")
            return other.as_poly()
        if _is_scalar(other):
            return self.ring.const(other)
        return None

    # -- inspection
    @property
    def term_dict(self) -> dict:
        return self._t

    def terms(self) -> list[tuple[tuple, mpq]]:
        """Terms in canonical (descending graded lexicographic) order."""
        return sorted(self._t.items(), key=lambda mc: _grlex_key(mc[0]), reverse=True)

    def __len__(self):
        return len(self._t)

    def __bool__(self):
        return bool(self._t)

    @property
    def is_zero(self) -> bool:
        return not self._t

    @property
    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and () in self._t)

    @property
    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def constant_value(self) -> mpq:
        if not self.is_constant:
            raise ValueError("polynomial is not constant")
        return self._t.get((), _ZERO)

    def constant_term(self) -> mpq:
        return self._t.get((), _ZERO)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if self._deg is None:
            self._deg = max((sum(m) for m in self._t), default=-1)
        return self._deg

    def degree_in(self, v: Var) -> int:
        i = v.index
        return max((m[i] if i < len(m) else 0 for m in self._t), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self._t}) <= 1

    def variable_indices(self) -> set[int]:
        out = set()
        for m in self._t:
            out.update(i for i, e in enumerate(m) if e)
        return out

    def variables(self) -> list[Var]:
        return [self.ring.by_index(i) for i in sorted(self.variable_indices())]

    def leading_term(self) -> tuple[tuple, mpq]:
        if not self._t:
            raise ValueError("zero polynomial has no leading term")
        m = max(self._t, key=_grlex_key)
        return m, self._t[m]

    def leading_coefficient(self) -> mpq:
        return self.leading_term()[1]

    def coefficient(self, monomial: Mapping[Var, int] | "Polynomial") -> mpq:
        if isinstance(monomial, Polynomial):
            if not monomial.is_monomial:
                raise ValueError("expected a monomial")
            (m,) = monomial._t
        else:
            m = self._mono_from_map(monomial)
        return self._t.get(m, _ZERO)

    def _mono_from_map(self, exps: Mapping[Var, int]) -> tuple:
        if not exps:
            return ()
        n = max(v.index for v in exps) + 1
        out = [0] * n
        for v, e in exps.items():
            out[v.index] += e
        return _strip(out)

    def monomial_exponents(self, m: tuple) -> list[tuple[Var, int]]:
        return [(self.ring.by_index(i), e) for i, e in enumerate(m) if e]

    # -- equality / hashing
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring is other.ring and self._t == other._t
        if isinstance(other, RationalFunction):
            return other == self
        if isinstance(other, Var):
            return self == other.as_poly()
        if _is_scalar(other):
            c = _to_mpq(other)
            if not c:
                return not self._t
            return len(self._t) == 1 and self._t.get(()) == c
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # -- arithmetic
    def __neg__(self):
        return self._new({m: -c for m, c in self._t.items()})

    def __pos__(self):
        return self

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o._t:
            return self
        if not self._t:
            return o
        out = dict(self._t)
        for m, c in o._t.items():
            s = out.get(m, _ZERO) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return self._new(out)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o._t:
            return self
        out = dict(self._t)
        for m, c in o._t.items():
            s = out.get(m, _ZERO) - c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return self._new(out)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def scale(self, c) -> "Polynomial":
        c = _to_mpq(c)
        if not c:
            return self.ring.zero()
        if c == 1:
            return self
        return self._new({m: v * c for m, v in self._t.items()})

    def mul_monomial(self, mono: tuple, c=_ONE) -> "Polynomial":
        if not c:
            return self.ring.zero()
        return self._new({_mmul(m, mono): v * c for m, v in self._t.items()})

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._t, o._t
        if not a or not b:
            return self.ring.zero()
        if len(a) > len(b):
            a, b = b, a
        if len(a) == 1:
            ((m0, c0),) = a.items()
            if not m0:
                return self._new({m: c * c0 for m, c in b.items()})
            _check_degree(sum(m0) + (o.degree() if b is o._t else self.degree()))
            return self._new({_mmul(m, m0): c * c0 for m, c in b.items()})
        _check_degree(self.degree() + o.degree())
        out: dict = {}
        get = out.get
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = _mmul(ma, mb)
                out[m] = get(m, _ZERO) + ca * cb
        return self._new(_clean(out))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        if e == 0:
            return self.ring.one()
        if e == 1:
            return self
        if len(self._t) == 1:
            ((m, c),) = self._t.items()
            _check_degree(sum(m) * e)
            return self._new({tuple(x * e for x in m): c**e})
        _check_degree(self.degree() * e)
        result = self
        for _ in range(e - 1):
            result = result * self
        return result

    def __truediv__(self, other):
        if _is_scalar(other):
            c = _to_mpq(other)
            if not c:
                raise ZeroDenominatorError("division by zero scalar")
            return self.scale(1 / c)
        if isinstance(other, (Polynomial, Var)):
            o = self._coerce(other)
            return RationalFunction(self, o)
        if isinstance(other, RationalFunction):
            return RationalFunction(self, self.ring.one()) / other
        return NotImplemented

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(o, self)

    # -- calculus and evaluation
    def diff(self, v: Var) -> "Polynomial":
        if v.ring is not self.ring:
            raise RegistryMismatchError("variable from a different registry")
        i = v.index
        out = {}
        for m, c in self._t.items():
            if i < len(m) and m[i]:
                e = m[i]
                nm = list(m)
                nm[i] = e - 1
                out[_strip(nm)] = c * e
        return self._new(out)

    def evaluate(self, point: Mapping[Var, Scalar]) -> mpq:
        """Evaluate at a point.  Every variable that occurs must be bound."""
        vals: dict[int, mpq] = {v.index: _to_mpq(x) for v, x in point.items()}
        total = _ZERO
        for m, c in self._t.items():
            t = c
            for i, e in enumerate(m):
                if e:
                    try:
                        t = t * vals[i] ** e
                    except KeyError:
                        raise KeyError(
                            f"variable {self.ring.by_index(i).name} not bound"
                        ) from None
            total += t
        return total

    def homogenize(self, v: Var, degree: int | None = None) -> "Polynomial":
        """Multiply each term by the power of ``v`` lifting it to ``degree``."""
        d = self.degree() if degree is None else degree
        if self._t and d < self.degree():
            raise ValueError("target degree below polynomial degree")
        i = v.index
        out = {}
        for m, c in self._t.items():
            k = d - sum(m)
            if k:
                nm = list(m) + [0] * max(0, i + 1 - len(m))
                nm[i] += k
                m = tuple(nm)
            out[m] = c
        return self._new(out)

    def dehomogenize(self, v: Var) -> "Polynomial":
        """Set ``v = 1``."""
        i = v.index
        out: dict = {}
        for m, c in self._t.items():
            if i < len(m) and m[i]:
                nm = list(m)
                nm[i] = 0
                m = _strip(nm)
            s = out.get(m, _ZERO) + c
            out[m] = s
        return self._new(_clean(out))

    def content(self) -> mpq:
        """Positive rational c with self/c having coprime integer coefficients."""
        if not self._t:
            return _ONE
        from math import gcd as igcd, lcm

        num = 0
        den = 1
        for c in self._t.values():
            num = igcd(num, int(c.numerator))
            den = lcm(den, int(c.denominator))
        return mpq(num, den)

    def monic(self) -> "Polynomial":
        if not self._t:
            return self
        lc = self.leading_coefficient()
        return self if lc == 1 else self.scale(1 / lc)

    def monomial_content(self) -> tuple:
        """Exponent-wise minimum over all terms."""
        it = iter(self._t)
        try:
            g = next(it)
        except StopIteration:
            return ()
        for m in it:
            if not g:
                break
            g = _mgcd(g, m)
        return g

    def rename(self, target: Ring, mapping: Mapping[Var, Var] | None = None) -> "Polynomial":
        """Carry the polynomial to another ring, variable by variable.

        Variables not in ``mapping`` are matched by name in ``target``.
        """
        idx = {}
        for i in self.variable_indices():
            src = self.ring.by_index(i)
            dst = mapping.get(src) if mapping else None
            if dst is None:
                dst = target.lookup(src.name)
            idx[i] = dst.index
        out: dict = {}
        for m, c in self._t.items():
            n = max((idx[i] for i, e in enumerate(m) if e), default=-1) + 1
            nm = [0] * n
            for i, e in enumerate(m):
                if e:
                    nm[idx[i]] += e
            k = tuple(nm)
            out[k] = out.get(k, _ZERO) + c
        return Polynomial(target, _clean(out))

    # -- text
    def _mono_text(self, m: tuple) -> str:
        parts = []
        for i, e in enumerate(m):
            if e:
                name = self.ring.by_index(i).name
                parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)

    def to_text(self) -> str:
        if not self._t:
            return "0"
        out = []
        for k, (m, c) in enumerate(self.terms()):
            neg = c < 0
            a = -c if neg else c
            mono = self._mono_text(m)
            if not mono:
                body = format_coefficient(a)
            elif a == 1:
                body = mono
            else:
                body = f"{format_coefficient(a)}*{mono}"
            if k == 0:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)

    __str__ = to_text

    def __repr__(self):
        return f"Polynomial({self.to_text()!r})"

    @classmethod
    def parse(cls, text: str, ring: Ring, declare: bool = False) -> "Polynomial":
        return _parse_poly(text, ring, declare)


# gcd internals may pass through pseudo-remainders far above the guard
_GUARD_SUSPENDED = 0


def _check_degree(d: int) -> None:
    if d > LIMITS.max_degree and not _GUARD_SUSPENDED:
        raise DegreeLimitError(
            f"total degree {d} exceeds the guard {LIMITS.max_degree}; raise it via LIMITS.max_degree"
        )


_COEF_RE = re.compile(r"^\d+(/\d+)?$")


def _parse_poly(text: str, ring: Ring, declare: bool) -> Polynomial:
    s = text.replace("−", "-").strip()
    if not s:
        raise ValueError("empty polynomial text")
    tokens = re.split(r"([+-])", s)
    result = ring.zero()
    sign = 1
    pending = False
    for tok in tokens:
        tok = tok.strip()
        if tok in ("+", "-"):
            if tok == "-":
                sign = -sign
            pending = True
            continue
        if not tok:
            continue
        result = result + _parse_term(tok, ring, declare).scale(sign)
        sign = 1
        pending = False
    if pending:
        raise ValueError(f"dangling sign in {text!r}")
    return result


def _parse_term(tok: str, ring: Ring, declare: bool) -> Polynomial:
    coef = _ONE
    mono: dict[Var, int] = {}
    for factor in tok.split("*"):
        factor = factor.strip()
        if not factor:
            raise ValueError(f"empty factor in {tok!r}")
        if _COEF_RE.match(factor):
            coef = coef * mpq(factor)
            continue
        name, _, exp = factor.partition("^")
        e = int(exp) if exp else 1
        if e < 0:
            raise ValueError(f"negative exponent in {factor!r}")
        v = ring.var(name) if declare else ring.lookup(name)
        mono[v] = mono.get(v, 0) + e
    p = ring.const(coef)
    for v, e in mono.items():
        p = p * v.as_poly() ** e
    return p


# ---------------------------------------------------------------------------
# exact division and gcd


def divide_exact(a: Polynomial, b: Polynomial) -> Polynomial:
    """a / b when b divides a exactly; raises NotDivisibleError otherwise."""
    if b.ring is not a.ring:
        raise RegistryMismatchError("operands belong to different registries")
    if not b._t:
        raise ZeroDenominatorError("division by the zero polynomial")
    if not a._t:
        return a
    if len(b._t) == 1:
        ((mb, cb),) = b._t.items()
        inv = 1 / cb
        out = {}
        for m, c in a._t.items():
            if not _mdivides(mb, m):
                raise NotDivisibleError("monomial divisor does not divide")
            out[_mdiv(m, mb)] = c * inv
        return a._new(out)
    mb, cb = b.leading_term()
    inv = 1 / cb
    bt = list(b._t.items())
    r = dict(a._t)
    q: dict = {}
    while r:
        mr = max(r, key=_grlex_key)
        if not _mdivides(mb, mr):
            raise NotDivisibleError("divisor does not divide")
        mq = _mdiv(mr, mb)
        cq = r[mr] * inv
        q[mq] = cq
        for m, c in bt:
            k = _mmul(m, mq)
            s = r.get(k, _ZERO) - c * cq
            if s:
                r[k] = s
            else:
                r.pop(k, None)
    return a._new(q)


def _coeffs_in(p: Polynomial, i: int) -> dict[int, Polynomial]:
    """Split p as a polynomial in variable i: exponent -> coefficient."""
    parts: dict[int, dict] = {}
    for m, c in p._t.items():
        e = m[i] if i < len(m) else 0
        if e:
            nm = list(m)
            nm[i] = 0
            m = _strip(nm)
        parts.setdefault(e, {})[m] = c
    return {e: p._new(t) for e, t in parts.items()}


def _from_coeffs(ring: Ring, i: int, coeffs: Mapping[int, Polynomial]) -> Polynomial:
    out: dict = {}
    for e, c in coeffs.items():
        if not e:
            for m, v in c._t.items():
                out[m] = out.get(m, _ZERO) + v
            continue
        shift = (0,) * i + (e,)
        for m, v in c._t.items():
            k = _mmul(m, shift)
            out[k] = out.get(k, _ZERO) + v
    return Polynomial(ring, _clean(out))


def _gcd_many(polys: Iterable[Polynomial], ring: Ring) -> Polynomial:
    g = None
    for p in polys:
        g = p if g is None else gcd(g, p)
        if g.is_constant and g._t:
            return ring.one()
    return ring.zero() if g is None else g.monic()


def _prem_univ(a: dict[int, Polynomial], b: dict[int, Polynomial]) -> dict[int, Polynomial]:
    db = max(b)
    lb = b[db]
    r = dict(a)
    while r and max(r) >= db:
        dr = max(r)
        lr = r[dr]
        shift = dr - db
        new = {e: c * lb for e, c in r.items()}
        for e, c in b.items():
            k = e + shift
            v = new.get(k)
            t = lr * c
            new[k] = -t if v is None else v - t
        r = {e: c for e, c in new.items() if c}
    return r


_BOUND_RNG = random.Random(0x5EED)


def _univ_gcd_degree(a: list, b: list) -> int:
    """Degree of gcd of two dense univariate polynomials over Q (low degree first)."""
    def trim(p):
        while p and not p[-1]:
            p.pop()
        return p

    a, b = trim(list(a)), trim(list(b))
    while b:
        inv = 1 / b[-1]
        while len(a) >= len(b):
            f = a[-1] * inv
            k = len(a) - len(b)
            for j, c in enumerate(b):
                a[k + j] -= f * c
            a.pop()
            trim(a)
            if not a:
                break
        a, b = b, a
    return len(a) - 1


def _degree_bound(pa: dict[int, Polynomial], pb: dict[int, Polynomial], tries: int = 2) -> int:
    """Upper bound for the degree of gcd(pa, pb) in the main variable.

    Specializing the other variables at a point where neither leading
    coefficient vanishes cannot lower the gcd degree, so every such
    point gives a certified bound.
    """
    la, lb = pa[max(pa)], pb[max(pb)]
    idx = set()
    for part in (pa, pb):
        for c in part.values():
            idx |= c.variable_indices()
    ring = la.ring
    best = min(max(pa), max(pb))
    for _ in range(tries * 5):
        pt = {ring.by_index(j): _BOUND_RNG.randint(-97, 97) for j in idx}
        if not la.evaluate(pt) or not lb.evaluate(pt):
            continue
        va = [_ZERO] * (max(pa) + 1)
        vb = [_ZERO] * (max(pb) + 1)
        for e, c in pa.items():
            va[e] = c.evaluate(pt)
        for e, c in pb.items():
            vb[e] = c.evaluate(pt)
        best = min(best, _univ_gcd_degree(va, vb))
        tries -= 1
        if best == 0 or tries == 0:
            break
    return best


def gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Greatest common divisor, monic under the canonical order.

    Content extraction plus primitive polynomial remainder sequences in a
    chosen main variable, recursing on coefficients.
    """
    ring = a.ring
    if b.ring is not ring:
        raise RegistryMismatchError("operands belong to different registries")
    if not a._t:
        return b.monic()
    if not b._t:
        return a.monic()
    if a.is_constant or b.is_constant:
        return ring.one()
    if a == b:
        return a.monic()
    ma, mb = a.monomial_content(), b.monomial_content()
    mono = _mgcd(ma, mb)
    if len(a._t) == 1 or len(b._t) == 1:
        # a monomial's divisors are monomials; the common part is in mono
        return Polynomial(ring, {mono: _ONE})
    if ma:
        a = divide_exact(a, Polynomial(ring, {ma: _ONE}))
    if mb:
        b = divide_exact(b, Polynomial(ring, {mb: _ONE}))
    global _GUARD_SUSPENDED
    _GUARD_SUSPENDED += 1
    try:
        g = _gcd_nomono(a, b)
    finally:
        _GUARD_SUSPENDED -= 1
    if mono:
        g = g.mul_monomial(mono)
    return g.monic()


def _gcd_nomono(a: Polynomial, b: Polynomial) -> Polynomial:
    ring = a.ring
    if a.is_constant or b.is_constant:
        return ring.one()
    va, vb = a.variable_indices(), b.variable_indices()
    only_a = va - vb
    if only_a:
        i = min(only_a)
        return _gcd_many([b, *_coeffs_in(a, i).values()], ring)
    only_b = vb - va
    if only_b:
        i = min(only_b)
        return _gcd_many([a, *_coeffs_in(b, i).values()], ring)
    # common main variable of least degree keeps the remainder sequence short
    best = None
    for i in sorted(va):
        da = max((m[i] if i < len(m) else 0) for m in a._t)
        db = max((m[i] if i < len(m) else 0) for m in b._t)
        key = (max(da, db), i)
        if best is None or key < best[0]:
            best = (key, i)
    i = best[1]
    ca_parts = _coeffs_in(a, i)
    cb_parts = _coeffs_in(b, i)
    ca = _gcd_many(ca_parts.values(), ring)
    cb = _gcd_many(cb_parts.values(), ring)
    cont = gcd(ca, cb)
    pa = {e: divide_exact(c, ca) for e, c in ca_parts.items()}
    pb = {e: divide_exact(c, cb) for e, c in cb_parts.items()}
    if max(pa) < max(pb):
        pa, pb = pb, pa
    bound = _degree_bound(pa, pb)
    if bound == 0:
        return cont.monic()
    if bound == max(pb):
        # the gcd can only be pb itself, up to content
        cand = _from_coeffs(ring, i, pb)
        try:
            divide_exact(_from_coeffs(ring, i, pa), cand)
        except NotDivisibleError:
            pass
        else:
            return (cand * cont).monic()
    while pb and max(pb) > 0:
        r = _prem_univ(pa, pb)
        if not r:
            pa, pb = pb, {}
            break
        rc = _gcd_many(r.values(), ring)
        r = {e: divide_exact(c, rc) for e, c in r.items()}
        pa, pb = pb, r
    if pb:
        # remainder of degree 0 in the main variable: primitive part is 1
        prim = ring.one()
    else:
        pc = _gcd_many(pa.values(), ring)
        prim = _from_coeffs(ring, i, {e: divide_exact(c, pc) for e, c in pa.items()})
    return (prim * cont).monic()


# ---------------------------------------------------------------------------
# rational functions


class RationalFunction:
    """Reduced quotient num/den: coprime, den monic under the canonical order."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None, _reduced: bool = False):
        ring = num.ring
        if den is None:
            den = ring.one()
            _reduced = True
        elif den.ring is not ring:
            raise RegistryMismatchError("numerator and denominator in different registries")
        if not den._t:
            raise ZeroDenominatorError("zero denominator")
        if not _reduced:
            if not num._t:
                den = ring.one()
            elif den.is_constant:
                c = den.constant_value()
                if c != 1:
                    num = num.scale(1 / c)
                    den = ring.one()
            else:
                g = gcd(num, den)
                if not g.is_constant:
                    num = divide_exact(num, g)
                    den = divide_exact(den, g)
                lc = den.leading_coefficient()
                if lc != 1:
                    num = num.scale(1 / lc)
                    den = den.scale(1 / lc)
        self.num = num
        self.den = den

    @property
    def ring(self) -> Ring:
        return self.num.ring

    @property
    def is_polynomial(self) -> bool:
        return self.den.is_constant

    @property
    def is_zero(self) -> bool:
        return not self.num._t

    def as_polynomial(self) -> Polynomial:
        if not self.den.is_constant:
            raise ValueError(f"not a polynomial: {self}")
        return self.num

    def _coerce(self, other) -> "RationalFunction | None":
        if isinstance(other, RationalFunction):
            if other.ring is not self.ring:
                raise RegistryMismatchError("operands belong to different registries")
            return other
        if isinstance(other, (Polynomial, Var)) or _is_scalar(other):
            p = self.num._coerce(other)
            return RationalFunction(p, None)
        return None

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, RationalFunction) else other
        if o is None:
            return NotImplemented
        if o.ring is not self.ring:
            return False
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        if o.den.is_constant:
            return RationalFunction(self.num + o.num * self.den, self.den, _reduced=True)
        if self.den.is_constant:
            return RationalFunction(self.num * o.den + o.num, o.den, _reduced=True)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den.is_constant and o.den.is_constant:
            return RationalFunction(self.num * o.num, None)
        # cross-cancel before multiplying to keep sizes down
        g1 = gcd(self.num, o.den)
        g2 = gcd(o.num, self.den)
        n1, d2 = (self.num, o.den) if g1.is_constant else (divide_exact(self.num, g1), divide_exact(o.den, g1))
        n2, d1 = (o.num, self.den) if g2.is_constant else (divide_exact(o.num, g2), divide_exact(self.den, g2))
        num, den = n1 * n2, d1 * d2
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num.scale(1 / lc), den.scale(1 / lc)
        return RationalFunction(num, den, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.num._t:
            raise ZeroDenominatorError("inverting the zero rational function")
        num, den = self.den, self.num
        lc = den.leading_coefficient()
        return RationalFunction(num.scale(1 / lc), den.scale(1 / lc), _reduced=True)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            raise ValueError("integer exponent required")
        if e < 0:
            return self.inverse() ** (-e)
        return RationalFunction(self.num**e, self.den**e, _reduced=True)

    def diff(self, v: Var) -> "RationalFunction":
        if self.den.is_constant:
            return RationalFunction(self.num.diff(v), None)
        n, d = self.num, self.den
        return RationalFunction(n.diff(v) * d - n * d.diff(v), d * d)

    def evaluate(self, point: Mapping[Var, Scalar]) -> mpq:
        d = self.den.evaluate(point)
        if not d:
            raise ZeroDenominatorError(f"denominator {self.den} vanishes at the point")
        return self.num.evaluate(point) / d

    def degree(self) -> int:
        return max(self.num.degree(), self.den.degree())

    def variable_indices(self) -> set[int]:
        return self.num.variable_indices() | self.den.variable_indices()

    def variables(self) -> list[Var]:
        return [self.ring.by_index(i) for i in sorted(self.variable_indices())]

    def rename(self, target: Ring, mapping: Mapping[Var, Var] | None = None) -> "RationalFunction":
        return RationalFunction(self.num.rename(target, mapping), self.den.rename(target, mapping), _reduced=True)

    def to_text(self) -> str:
        if self.den == 1:
            return self.num.to_text()
        return f"({self.num.to_text()})/({self.den.to_text()})"

    __str__ = to_text

    def __repr__(self):
        return f"RationalFunction({self.to_text()!r})"

    @classmethod
    def parse(cls, text: str, ring: Ring, declare: bool = False) -> "RationalFunction":
        s = text.strip()
        m = re.match(r"^\(([^()]*)\)/\(([^()]*)\)$", s)
        if m:
            return RationalFunction(_parse_poly(m.group(1), ring, declare), _parse_poly(m.group(2), ring, declare))
        return RationalFunction(_parse_poly(s, ring, declare), None)


def as_rational_function(x, ring: Ring | None = None) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Polynomial):
        return RationalFunction(x, None)
    if isinstance(x, Var):
        return RationalFunction(x.as_poly(), None)
    if _is_scalar(x):
        if ring is None:
            raise ValueError("a ring is needed to lift a scalar")
        return RationalFunction(ring.const(x), None)
    raise TypeError(f"cannot convert {x!r} to a rational function")


# ---------------------------------------------------------------------------
# substitution


Binding = Union[RationalFunction, Polynomial, Var, int, Fraction]


def substitute(
    p: Polynomial | RationalFunction,
    bindings: Mapping[Var, Binding],
    target: Ring | None = None,
) -> RationalFunction:
    """Simultaneous substitution ``v -> bindings[v]``, reduced.

    Unbound variables are carried through unchanged, which is only
    possible when the images live in p's own ring.  ``target`` must be
    given when every image is a scalar and the result should live in a
    ring other than p's.
    """
    if isinstance(p, RationalFunction):
        n = substitute(p.num, bindings, target)
        d = substitute(p.den, bindings, target)
        if d.is_zero:
            raise ZeroDenominatorError(f"denominator {p.den} vanishes under the substitution")
        return n / d
    num, den = _substitute_parts(p, bindings, target)
    return RationalFunction(num, den)


def _resolve_target(p: Polynomial, bindings: Mapping[Var, Binding], target: Ring | None) -> Ring:
    if target is not None:
        return target
    for b in bindings.values():
        if isinstance(b, (Polynomial, RationalFunction, Var)):
            return b.ring
    return p.ring


def _substitute_parts(
    p: Polynomial, bindings: Mapping[Var, Binding], target: Ring | None
) -> tuple[Polynomial, Polynomial]:
    """Numerator and (unreduced) denominator of p under the bindings."""
    out_ring = _resolve_target(p, bindings, target)
    nums: dict[int, Polynomial] = {}
    dens: dict[int, Polynomial] = {}
    for v, b in bindings.items():
        if v.ring is not p.ring:
            raise RegistryMismatchError(f"bound variable {v.name} is not in the polynomial's registry")
        if _is_scalar(b):
            nums[v.index] = out_ring.const(b)
            continue
        if isinstance(b, Var):
            b = b.as_poly()
        if b.ring is not out_ring:
            raise RegistryMismatchError("substitution images live in different registries")
        if isinstance(b, RationalFunction):
            nums[v.index] = b.num
            if not b.den.is_constant or b.den.constant_value() != 1:
                dens[v.index] = b.den
        else:
            nums[v.index] = b
    used = p.variable_indices()
    for i in used:
        if i not in nums:
            if out_ring is not p.ring:
                raise RegistryMismatchError(
                    f"variable {p.ring.by_index(i).name} is unbound in a cross-registry substitution"
                )
            nums[i] = p.ring.by_index(i).as_poly()
    for i, d in dens.items():
        if d.is_zero:
            raise ZeroDenominatorError(
                f"binding for {p.ring.by_index(i).name} has a zero denominator"
            )
    # maximal exponents of variables carrying denominators
    emax: dict[int, int] = {}
    for m in p._t:
        for i, e in enumerate(m):
            if e and i in dens and e > emax.get(i, 0):
                emax[i] = e
    npow: dict[tuple[int, int], Polynomial] = {}
    dpow: dict[tuple[int, int], Polynomial] = {}

    def power(cache, base, i, e):
        if e == 0:
            return None
        key = (i, e)
        r = cache.get(key)
        if r is None:
            prev = cache.get((i, e - 1)) if e > 1 else None
            r = base if e == 1 else (prev * base if prev is not None else base**e)
            cache[key] = r
        return r

    def npw(i, e):
        for k in range(1, e + 1):
            power(npow, nums[i], i, k)
        return npow[(i, e)]

    def dpw(i, e):
        for k in range(1, e + 1):
            power(dpow, dens[i], i, k)
        return dpow[(i, e)]

    prefix: dict[tuple, Polynomial] = {}
    one = out_ring.one()
    acc: dict = {}
    for m, c in p._t.items():
        factors = []
        for i, e in enumerate(m):
            if e:
                factors.append((i, e))
        for i in emax:
            e = m[i] if i < len(m) else 0
            if emax[i] - e:
                factors.append((-1 - i, emax[i] - e))
        factors.sort()
        prod = one
        key: tuple = ()
        for f in factors:
            key = key + (f,)
            cached = prefix.get(key)
            if cached is None:
                i, e = f
                piece = dpw(-1 - i, e) if i < 0 else npw(i, e)
                cached = prod * piece
                prefix[key] = cached
            prod = cached
        for mm, cc in prod._t.items():
            acc[mm] = acc.get(mm, _ZERO) + cc * c
    num = Polynomial(out_ring, _clean(acc))
    den = one
    for i, e in sorted(emax.items()):
        den = den * dpw(i, e)
    return num, den


def substitute_poly(p: Polynomial, bindings: Mapping[Var, Binding], target: Ring | None = None) -> Polynomial:
    """Substitution with polynomial images; result is a Polynomial."""
    num, den = _substitute_parts(p, bindings, target)
    if not den.is_constant:
        raise ValueError("bindings have nontrivial denominators; use substitute()")
    return num


# ---------------------------------------------------------------------------
# calculus and linear algebra


def partial_derivative(p: Polynomial | RationalFunction, v: Var):
    return p.diff(v)


def homogeneous_components(p: Polynomial) -> list[tuple[int, Polynomial]]:
    parts: dict[int, dict] = {}
    for m, c in p._t.items():
        parts.setdefault(sum(m), {})[m] = c
    return [(d, p._new(parts[d])) for d in sorted(parts)]


def leading_terms(
    p: Polynomial,
    k: int = 1,
    order: str = "grlex",
    variables: Sequence[Var] | None = None,
) -> list[Polynomial]:
    """The k largest terms of p under grlex or grevlex, largest first.

    ``variables`` fixes the variable priority (default: registry order);
    variables of p missing from it rank last.
    """
    if order not in ("grlex", "grevlex"):
        raise ValueError(f"unknown monomial order {order!r}")
    ring = p.ring
    seq = list(variables) if variables is not None else list(ring.variables)
    pos = {v.index: k for k, v in enumerate(seq)}
    extra = sorted(p.variable_indices() - set(pos))
    for i in extra:
        pos[i] = len(pos)
    width = len(pos)

    def key(m):
        e = [0] * width
        for i, x in enumerate(m):
            if x:
                e[pos[i]] = x
        if order == "grlex":
            return (sum(e), tuple(e))
        return (sum(e), tuple(-x for x in reversed(e)))

    top = sorted(p.term_dict, key=key, reverse=True)[:k]
    return [p._new({m: p.term_dict[m]}) for m in top]


def polar_form(
    q: Polynomial,
    u: Sequence[Var],
    v: Sequence[Var],
    variables: Sequence[Var] | None = None,
) -> Polynomial:
    """Symmetric bilinear form Phi with Phi(u, u) = q(u).

    ``variables`` lists q's variables in the order matched against the
    blocks u and v; by default q's variables in registry order.
    """
    if q._t and (not q.is_homogeneous() or q.degree() != 2):
        raise ValueError("polar_form needs a homogeneous quadratic")
    xs = list(variables) if variables is not None else q.variables()
    if len(u) != len(xs) or len(v) != len(xs):
        raise ValueError("variable blocks must match the number of variables of q")
    if set(u) & set(v) or set(u) & set(xs) or set(v) & set(xs):
        raise ValueError("blocks must be fresh and disjoint")
    q_uv = substitute_poly(q, {x: a + b for x, a, b in zip(xs, u, v)})
    q_u = substitute_poly(q, {x: a for x, a in zip(xs, u)})
    q_v = substitute_poly(q, {x: b for x, b in zip(xs, v)})
    return (q_uv - q_u - q_v).scale(mpq(1, 2))


def jacobian(fs: Sequence, vars: Sequence[Var]) -> list[list[RationalFunction]]:
    rows = []
    for f in fs:
        f = as_rational_function(f)
        rows.append([f.diff(v) for v in vars])
    return rows


def _rank(rows: list[list[mpq]]) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pr = m[rank]
        inv = 1 / pr[col]
        for r in range(rank + 1, len(m)):
            f = m[r][col]
            if f:
                f = f * inv
                row = m[r]
                for c in range(col, ncols):
                    if pr[c]:
                        row[c] -= f * pr[c]
        rank += 1
        if rank == len(m):
            break
    return rank


def rank_at_point(M: Sequence[Sequence], point: Mapping[Var, Scalar]) -> int:
    """Exact rank of M evaluated at the point (Gaussian elimination over Q)."""
    vals = [[as_rational_function(e).evaluate(point) if not _is_scalar(e) else _to_mpq(e) for e in row] for row in M]
    return _rank(vals)


def exact_generic_rank(
    M: Sequence[Sequence],
    samples: int = 5,
    seed: int = 0,
    bound: int = 10**4,
    retries: int = 50,
) -> int:
    """Maximum rank over random integer points in [-bound, bound].

    A certified lower bound for the generic rank, and equal to it with
    high probability.  Points where a denominator vanishes are resampled
    up to ``retries`` times in total.
    """
    rng = random.Random(seed)
    entries = [as_rational_function(e) if not _is_scalar(e) else None for row in M for e in row]
    idx = set()
    ring = None
    for e in entries:
        if e is not None:
            idx |= e.variable_indices()
            ring = e.ring
    order = sorted(idx)
    best = 0
    got = 0
    failures = 0
    while got < samples:
        point = {ring.by_index(i): rng.randint(-bound, bound) for i in order} if ring else {}
        try:
            r = rank_at_point(M, point)
        except ZeroDenominatorError:
            failures += 1
            if failures > retries:
                raise RankSamplingError("every sampled point hit a denominator zero") from None
            continue
        best = max(best, r)
        got += 1
    return best
