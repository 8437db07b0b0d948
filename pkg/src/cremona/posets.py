"""Set partitions, refinement posets and Möbius functions.

A partition of a ground set I ⊆ {1, ..., n} is a tuple of bitmasks (bit
k-1 stands for element k), sorted by minimum element.  Posets are stored
explicitly and their Möbius values are computed once, at construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product as _iproduct
from typing import Callable, Hashable, Iterable, Sequence

__all__ = [
    "PosetError",
    "MAX_GROUND",
    "MAX_ELEMENTS",
    "Partition",
    "FinitePoset",
    "PartitionPoset",
    "mask_of",
    "elements_of",
    "all_partitions",
    "full_partition_lattice",
    "interval_partitions",
    "one_cluster_partitions",
    "min_max_poset",
    "poset_by_name",
    "POSET_KINDS",
    "restrict",
    "mobius",
    "mobius_sum_check",
    "product_poset",
    "dual_poset",
    "chain",
    "product_mobius_check",
    "random_subposet",
    "mobius_inversion_roundtrip",
]

MAX_GROUND = 20
# explicit posets beyond this size make the Möbius table too slow to fill
MAX_ELEMENTS = 1000


class PosetError(ValueError):
    pass


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        if e < 1:
            raise PosetError("ground elements are positive integers")
        m |= 1 << (e - 1)
    return m


def elements_of(mask: int) -> list[int]:
    out = []
    k = 1
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return out


def _low(mask: int) -> int:
    return (mask & -mask).bit_length()


@dataclass(frozen=True, order=False)
class Partition:
    ground: int
    blocks: tuple[int, ...]

    @staticmethod
    def from_blocks(blocks: Iterable[Iterable[int] | int]) -> "Partition":
        ms = [b if isinstance(b, int) else mask_of(b) for b in blocks]
        if any(m == 0 for m in ms):
            raise PosetError("blocks must be nonempty")
        g = 0
        for m in ms:
            if g & m:
                raise PosetError("blocks must be disjoint")
            g |= m
        return Partition(g, tuple(sorted(ms, key=_low)))

    def __len__(self):
        return len(self.blocks)

    @property
    def size(self) -> int:
        """Number of blocks |π|."""
        return len(self.blocks)

    def refines(self, other: "Partition") -> bool:
        """π ≤ ν: every block of π lies inside a block of ν."""
        if self.ground != other.ground:
            return False
        return all(any(b & c == b for c in other.blocks) for b in self.blocks)

    def restrict(self, mask: int) -> "Partition":
        return Partition.from_blocks([b & mask for b in self.blocks if b & mask])

    def block_lists(self) -> list[list[int]]:
        return [elements_of(b) for b in self.blocks]

    def __str__(self):
        big = any(e > 9 for e in elements_of(self.ground))
        sep = "," if big else ""
        return "|".join(sep.join(str(e) for e in elements_of(b)) for b in self.blocks)

    def __repr__(self):
        return f"Partition({str(self)!r})"

    @staticmethod
    def parse(text: str) -> "Partition":
        blocks = []
        for part in text.strip().split("|"):
            part = part.strip()
            if not part:
                raise PosetError(f"empty block in {text!r}")
            if "," in part:
                elems = [int(x) for x in part.split(",")]
            else:
                elems = [int(ch) for ch in part]
            if len(set(elems)) != len(elems):
                raise PosetError(f"repeated element in {text!r}")
            blocks.append(elems)
        return Partition.from_blocks(blocks)


class FinitePoset:
    """Explicit finite poset with a precomputed Möbius table.

    ``leq(a, b)`` decides the order.  The axioms are checked at
    construction.
    """

    def __init__(self, elements: Sequence[Hashable], leq: Callable[[object, object], bool], check: bool = True):
        elements = list(dict.fromkeys(elements))
        if not elements:
            raise PosetError("a poset needs at least one element")
        if len(elements) > MAX_ELEMENTS:
            raise PosetError(f"{len(elements)} elements exceeds the cap {MAX_ELEMENTS}")
        self.elements: tuple = tuple(elements)
        self._index = {e: i for i, e in enumerate(self.elements)}
        N = len(self.elements)
        up = [set() for _ in range(N)]
        for i, a in enumerate(self.elements):
            for j, b in enumerate(self.elements):
                if leq(a, b):
                    up[i].add(j)
        down = [set() for _ in range(N)]
        for i in range(N):
            for j in up[i]:
                down[j].add(i)
        self._up = up
        self._down = down
        if check:
            self._check_axioms()
        # linear extension: strictly smaller elements have strictly smaller down-sets
        self._linear = sorted(range(N), key=lambda i: (len(down[i]), i))
        self._rank = {i: k for k, i in enumerate(self._linear)}
        self._mu: dict[tuple[int, int], int] = {}
        for x in range(N):
            ups = sorted(up[x], key=self._rank.__getitem__)
            mux: dict[int, int] = {}
            for y in ups:
                if y == x:
                    mux[y] = 1
                    continue
                dy = down[y]
                mux[y] = -sum(v for z, v in mux.items() if z in dy)
            for y, v in mux.items():
                self._mu[(x, y)] = v

    def _check_axioms(self) -> None:
        for i in range(len(self.elements)):
            if i not in self._up[i]:
                raise PosetError(f"order is not reflexive at {self.elements[i]}")
            for j in self._up[i]:
                if j != i and i in self._up[j]:
                    raise PosetError("order is not antisymmetric")
                if not self._up[j] <= self._up[i]:
                    raise PosetError("order is not transitive")

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self._index

    def index(self, x) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise PosetError(f"{x} is not an element of the poset") from None

    def leq(self, a, b) -> bool:
        return self.index(b) in self._up[self.index(a)]

    def mobius(self, a, b) -> int:
        i, j = self.index(a), self.index(b)
        return self._mu.get((i, j), 0)

    def minimum(self):
        mins = [self.elements[i] for i in range(len(self)) if len(self._down[i]) == 1]
        if len(mins) != 1:
            raise PosetError("poset has no unique minimal element")
        return mins[0]

    def maximum(self):
        maxs = [self.elements[i] for i in range(len(self)) if len(self._up[i]) == 1]
        if len(maxs) != 1:
            raise PosetError("poset has no unique maximal element")
        return maxs[0]

    def has_bounds(self) -> bool:
        try:
            self.minimum()
            self.maximum()
        except PosetError:
            return False
        return True

    def below(self, x) -> list:
        """Elements y <= x, in a linear extension order."""
        i = self.index(x)
        return [self.elements[j] for j in sorted(self._down[i], key=self._rank.__getitem__)]

    def linear_extension(self) -> list:
        return [self.elements[i] for i in self._linear]


class PartitionPoset(FinitePoset):
    """A set of partitions of one ground set under refinement."""

    def __init__(self, ground: int, elements: Iterable[Partition], check: bool = True):
        if ground == 0:
            raise PosetError("ground set must be nonempty")
        if max(elements_of(ground)) > MAX_GROUND:
            raise PosetError(f"ground elements beyond {MAX_GROUND} exceed the cap")
        elems = list(dict.fromkeys(elements))
        for p in elems:
            if p.ground != ground:
                raise PosetError(f"partition {p} is not of the ground set")
        # finest first, then by blocks, for a stable listing
        elems.sort(key=lambda p: (-len(p), p.blocks))
        self.ground = ground
        super().__init__(elems, Partition.refines, check=check)

    @property
    def zero(self) -> Partition:
        return Partition.from_blocks([1 << (e - 1) for e in elements_of(self.ground)])

    @property
    def one(self) -> Partition:
        return Partition(self.ground, (self.ground,))

    def contains_bounds(self) -> bool:
        return self.zero in self and self.one in self

    def mobius_to_top(self) -> dict[Partition, int]:
        one = self.one
        return {p: self.mobius(p, one) for p in self.elements}

    def __repr__(self):
        return f"PartitionPoset({{{', '.join(str(p) for p in self.elements)}}})"


# ---------------------------------------------------------------------------
# enumeration


def _check_ground(I) -> int:
    mask = I if isinstance(I, int) else mask_of(I)
    if mask == 0:
        raise PosetError("index set must be nonempty")
    if max(elements_of(mask)) > MAX_GROUND:
        raise PosetError(f"index sets are capped at elements <= {MAX_GROUND}")
    return mask


def all_partitions(I) -> list[Partition]:
    """Every set partition of I (Bell(|I|) of them)."""
    mask = _check_ground(I)
    elems = elements_of(mask)
    out: list[list[int]] = [[]]
    for e in elems:
        bit = 1 << (e - 1)
        nxt = []
        for blocks in out:
            for k in range(len(blocks)):
                nb = list(blocks)
                nb[k] |= bit
                nxt.append(nb)
            nxt.append(blocks + [bit])
        out = nxt
    parts = [Partition(mask, tuple(sorted(b, key=_low))) for b in out]
    parts.sort(key=lambda p: (-len(p), p.blocks))
    return parts


def _n_ground(n: int) -> int:
    if n < 1:
        raise PosetError("n must be at least 1")
    if n > MAX_GROUND:
        raise PosetError(f"n = {n} exceeds the cap {MAX_GROUND}")
    return (1 << n) - 1


def full_partition_lattice(n: int) -> PartitionPoset:
    g = _n_ground(n)
    return PartitionPoset(g, all_partitions(g))


def interval_partitions(n: int) -> PartitionPoset:
    """Partitions obtained by cutting 1..n into consecutive runs."""
    g = _n_ground(n)
    parts = []
    for cuts in range(1 << (n - 1)):
        blocks, start = [], 1
        for k in range(1, n):
            if cuts >> (k - 1) & 1:
                blocks.append(range(start, k + 1))
                start = k + 1
        blocks.append(range(start, n + 1))
        parts.append(Partition.from_blocks(blocks))
    return PartitionPoset(g, parts)


def one_cluster_partitions(n: int) -> PartitionPoset:
    """Partitions with at most one block of size greater than one."""
    g = _n_ground(n)
    parts = []
    for cluster in range(1 << n):
        if bin(cluster).count("1") == 1:
            continue
        rest = [1 << (e - 1) for e in elements_of(g & ~cluster)]
        parts.append(Partition.from_blocks(([cluster] if cluster else []) + rest))
    return PartitionPoset(g, parts)


def min_max_poset(n: int) -> PartitionPoset:
    g = _n_ground(n)
    zero = Partition.from_blocks([1 << (e - 1) for e in elements_of(g)])
    return PartitionPoset(g, [zero, Partition(g, (g,))])


POSET_KINDS: dict[str, Callable[[int], PartitionPoset]] = {
    "full": full_partition_lattice,
    "interval": interval_partitions,
    "one-cluster": one_cluster_partitions,
    "minmax": min_max_poset,
}


def poset_by_name(kind: str, n: int) -> PartitionPoset:
    try:
        return POSET_KINDS[kind](n)
    except KeyError:
        raise PosetError(f"unknown poset kind {kind!r}; choose from {', '.join(POSET_KINDS)}") from None


def restrict(L: PartitionPoset, I) -> PartitionPoset:
    """Restrict every partition of L to I, merging duplicates."""
    mask = _check_ground(I)
    if mask & ~L.ground:
        raise PosetError("I must be a subset of the ground set")
    if mask == L.ground:
        return L
    return PartitionPoset(mask, [p.restrict(mask) for p in L.elements])


def mobius(P: FinitePoset, x, y) -> int:
    return P.mobius(x, y)


def mobius_sum_check(P: FinitePoset) -> int:
    """Sum of μ(x, 1̂) over the poset; zero whenever |P| >= 2."""
    if len(P) < 2:
        raise PosetError("the vanishing-sum identity needs a poset with at least two elements")
    top = P.maximum()
    P.minimum()
    return sum(P.mobius(x, top) for x in P.elements)


# ---------------------------------------------------------------------------
# generic constructions


def chain(k: int) -> FinitePoset:
    return FinitePoset(list(range(k)), lambda a, b: a <= b)


def product_poset(P: FinitePoset, Q: FinitePoset) -> FinitePoset:
    elems = list(_iproduct(P.elements, Q.elements))
    return FinitePoset(elems, lambda a, b: P.leq(a[0], b[0]) and Q.leq(a[1], b[1]), check=False)


def dual_poset(P: FinitePoset) -> FinitePoset:
    return FinitePoset(list(P.elements), lambda a, b: P.leq(b, a), check=False)


def product_mobius_check(P: FinitePoset, Q: FinitePoset) -> bool:
    """μ_{P×Q}((p,q),(p',q')) = μ_P(p,p') μ_Q(q,q') on every pair."""
    PQ = product_poset(P, Q)
    for a in PQ.elements:
        for b in PQ.elements:
            if PQ.mobius(a, b) != P.mobius(a[0], b[0]) * Q.mobius(a[1], b[1]):
                return False
    return True


def random_subposet(n: int, rng: random.Random, keep: float | None = None) -> PartitionPoset:
    """Random subset of Π([n]) that contains 0̂ and 1̂."""
    full = all_partitions(_n_ground(n))
    g = full[0].ground
    zero = Partition.from_blocks([1 << (e - 1) for e in elements_of(g)])
    one = Partition(g, (g,))
    p = rng.random() if keep is None else keep
    chosen = [q for q in full if q in (zero, one) or rng.random() < p]
    return PartitionPoset(g, chosen)


def mobius_inversion_roundtrip(P: FinitePoset, f: dict) -> bool:
    """g(x) = Σ_{y<=x} f(y), then Σ_{y<=x} μ(y,x) g(y) must give back f."""
    g = {x: sum(f[y] for y in P.below(x)) for x in P.elements}
    back = {x: sum(P.mobius(y, x) * g[y] for y in P.below(x)) for x in P.elements}
    return back == f
