"""Exponent lattices, exponent sets and the closed-set machinery.

Axes are numbered from 1.  An axis j in J carries the ring Z/n_j; an axis
outside J carries {0} u Z/(n_j - 1), where the nonzero residues are stored
as 1..n_j-1 (so a product that reduces to 0 mod n_j - 1 is written n_j - 1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import prod
from typing import Iterable, Iterator, Sequence

Exponent = tuple[int, ...]


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    sizes: tuple[int, ...]
    J: frozenset[int] = field(default_factory=frozenset)
    ph: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(n) for n in self.sizes))
        object.__setattr__(self, "J", frozenset(int(j) for j in self.J))
        if not self.sizes:
            raise GridError("a grid needs at least one axis")
        if any(n < 2 for n in self.sizes):
            raise GridError(f"every axis size must be >= 2, got {self.sizes}")
        if any(not 1 <= j <= self.m for j in self.J):
            raise GridError(f"J = {sorted(self.J)} names an axis outside 1..{self.m}")
        if self.ph is not None and self.ph < 2:
            raise GridError("closure base must be at least 2")

    @property
    def m(self) -> int:
        return len(self.sizes)

    @property
    def n(self) -> int:
        return prod(self.sizes)

    def with_J(self, J: Iterable[int]) -> GridSpec:
        return GridSpec(self.sizes, frozenset(J), self.ph)

    def with_ph(self, ph: int | None) -> GridSpec:
        return GridSpec(self.sizes, self.J, ph)

    def contains(self, e: Sequence[int]) -> bool:
        return len(e) == self.m and all(0 <= x < n for x, n in zip(e, self.sizes))

    def check(self, e: Sequence[int]) -> Exponent:
        e = tuple(int(x) for x in e)
        if not self.contains(e):
            raise GridError(f"exponent {e} outside the grid {self.sizes}")
        return e

    def exponents(self) -> Iterator[Exponent]:
        return product(*(range(n) for n in self.sizes))

    def check_field(self, q: int) -> None:
        """Divisibility required to realise the J structure over GF(q)."""
        for j, n in enumerate(self.sizes, start=1):
            if j in self.J and (q - 1) % n:
                raise GridError(f"axis {j} in J needs n_{j} = {n} to divide q-1 = {q - 1}")
            if j not in self.J and (q - 1) % (n - 1):
                raise GridError(f"axis {j} outside J needs n_{j}-1 = {n - 1} to divide q-1 = {q - 1}")


def default_J(sizes: Sequence[int], q: int) -> frozenset[int]:
    """Axes whose size divides q-1 go into J; the rest must satisfy n-1 | q-1."""
    J = set()
    for j, n in enumerate(sizes, start=1):
        if (q - 1) % n == 0:
            J.add(j)
        elif (q - 1) % (n - 1):
            raise GridError(f"axis size {n} fits neither n | q-1 nor n-1 | q-1 for q = {q}")
    return frozenset(J)


def realizable_sizes(q: int) -> list[int]:
    return [n for n in range(2, q + 1) if (q - 1) % n == 0 or (q - 1) % (n - 1) == 0]


class DeltaSet:
    """A nonempty set of exponents on a fixed grid."""

    __slots__ = ("grid", "members")

    def __init__(self, grid: GridSpec, members: Iterable[Sequence[int]]):
        ms = frozenset(grid.check(e) for e in members)
        if not ms:
            raise GridError("an exponent set must be nonempty")
        self.grid = grid
        self.members = ms

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __contains__(self, e) -> bool:
        return tuple(e) in self.members

    def __eq__(self, other) -> bool:
        return isinstance(other, DeltaSet) and self.grid.sizes == other.grid.sizes and self.members == other.members

    def __hash__(self) -> int:
        return hash((self.grid.sizes, self.members))

    def __repr__(self) -> str:
        return f"DeltaSet(sizes={self.grid.sizes}, |D|={len(self)})"

    def sorted(self) -> list[Exponent]:
        return sorted(self.members)

    def on(self, grid: GridSpec) -> DeltaSet:
        if grid.sizes != self.grid.sizes:
            raise GridError("cannot move an exponent set to a grid of different shape")
        return DeltaSet(grid, self.members)

    def transpose(self, perm: Sequence[int] | None = None) -> DeltaSet:
        """Permute axes; perm lists old axis indices (1-based) in new order."""
        m = self.grid.m
        perm = tuple(perm) if perm is not None else tuple(range(m, 0, -1))
        g = self.grid
        sizes = tuple(g.sizes[a - 1] for a in perm)
        J = frozenset(perm.index(a) + 1 for a in g.J)
        return DeltaSet(GridSpec(sizes, J, g.ph), (tuple(e[a - 1] for a in perm) for e in self.members))


def exponent_distance(grid: GridSpec, e: Sequence[int]) -> int:
    e = grid.check(e)
    return prod(n - x for n, x in zip(grid.sizes, e))


def d0(delta: DeltaSet) -> int:
    return min(exponent_distance(delta.grid, e) for e in delta.members)


def d0_argmin(delta: DeltaSet) -> Exponent:
    return min(delta.members, key=lambda e: (exponent_distance(delta.grid, e), e))


def divisors_of(e: Exponent) -> Iterator[Exponent]:
    return product(*(range(x + 1) for x in e))


def is_decreasing(delta: DeltaSet) -> bool:
    ms = delta.members
    for e in ms:
        for j, x in enumerate(e):
            if x > 0 and e[:j] + (x - 1,) + e[j + 1:] not in ms:
                return False
    return True


def supp_axis(delta: DeltaSet, j: int) -> set[int]:
    if not 1 <= j <= delta.grid.m:
        raise GridError(f"axis {j} outside 1..{delta.grid.m}")
    return {e[j - 1] for e in delta.members}


def K_j(delta: DeltaSet, j: int) -> int:
    return len(supp_axis(delta, j))


def kmax_j(delta: DeltaSet, j: int) -> int:
    return max(supp_axis(delta, j))


def _need_ph(grid: GridSpec) -> int:
    if grid.ph is None:
        raise GridError("this operation needs the closure base p^h on the grid")
    return grid.ph


def axis_mul(grid: GridSpec, j: int, e: int, factor: int) -> int:
    n = grid.sizes[j - 1]
    if not 0 <= e < n:
        raise GridError(f"exponent {e} outside axis {j} of size {n}")
    if j in grid.J:
        return e * factor % n
    if e == 0:
        return 0
    r = e * factor % (n - 1)
    return r if r else n - 1


def axis_mul_ph(grid: GridSpec, j: int, e: int) -> int:
    return axis_mul(grid, j, e, _need_ph(grid))


def mul_ph(grid: GridSpec, e: Exponent) -> Exponent:
    ph = _need_ph(grid)
    return tuple(axis_mul(grid, j, x, ph) for j, x in enumerate(e, start=1))


def cyclotomic_orbit(grid: GridSpec, e: Sequence[int]) -> frozenset[Exponent]:
    e = grid.check(e)
    orbit = {e}
    x = mul_ph(grid, e)
    while x not in orbit:
        orbit.add(x)
        x = mul_ph(grid, x)
    return frozenset(orbit)


def is_closed(delta: DeltaSet) -> bool:
    g = delta.grid
    _need_ph(g)
    return all(mul_ph(g, e) in delta.members for e in delta.members)


def closure(delta: DeltaSet) -> DeltaSet:
    out: set[Exponent] = set()
    for e in delta.members:
        if e not in out:
            out |= cyclotomic_orbit(delta.grid, e)
    return DeltaSet(delta.grid, out)


def orbits(grid: GridSpec) -> list[frozenset[Exponent]]:
    """All minimal closed sets of the grid, each listed once."""
    seen: set[Exponent] = set()
    out = []
    for e in grid.exponents():
        if e not in seen:
            o = cyclotomic_orbit(grid, e)
            seen |= o
            out.append(o)
    return out


def translate(delta: DeltaSet, v: Sequence[int]) -> DeltaSet:
    if len(v) != delta.grid.m:
        raise GridError("translation vector has the wrong length")
    moved = []
    for e in delta.members:
        x = tuple(a + b for a, b in zip(e, v))
        if not delta.grid.contains(x):
            raise GridError(f"translated exponent {x} leaves the grid {delta.grid.sizes}")
        moved.append(x)
    return DeltaSet(delta.grid, moved)


def box(grid: GridSpec, upper: Sequence[int]) -> DeltaSet:
    return DeltaSet(grid, product(*(range(u + 1) for u in upper)))


def decreasing_sets_2d(n1: int, n2: int) -> Iterator[frozenset[Exponent]]:
    """Every nonempty decreasing subset of {0..n1-1} x {0..n2-1}.

    A decreasing set is a staircase: column e1 holds heights h(e1) that do
    not increase with e1.
    """
    def heights(col: int, cap: int):
        if col == n1:
            yield ()
            return
        for h in range(cap, -1, -1):
            for rest in heights(col + 1, h):
                yield (h,) + rest

    for hs in heights(0, n2):
        if hs[0] == 0:
            continue
        yield frozenset((a, b) for a, h in enumerate(hs) for b in range(h))


# closed single-axis building blocks

def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise GridError(msg)


def omega_a(ph: int, a: int) -> frozenset[int]:
    _check(0 <= a <= ph // 2 - 1, f"a = {a} outside 0..floor(p^h/2)-1 = {ph // 2 - 1}")
    return frozenset(range(a + 1)) | frozenset(range(ph + 1 - a, ph + 1)) if a else frozenset({0})


def omega_star_b(ph: int, b: int) -> frozenset[int]:
    _check(ph % 2 == 0, "the starred sets need characteristic 2")
    _check(0 <= b <= ph // 2 - 2, f"b = {b} outside 0..p^h/2-2 = {ph // 2 - 2}")
    return frozenset(range(ph // 2 - b, ph // 2 + b + 2))


def _check_h(h: int) -> None:
    _check(h >= 2, f"h = {h} must be at least 2")


def omega_3pt(h: int) -> frozenset[int]:
    _check_h(h)
    return frozenset({0, 1, 2 ** h})


def omega_perp(h: int) -> frozenset[int]:
    _check_h(h)
    return frozenset({0}) | frozenset(range(2, 2 ** h))


def check_z(h: int, z: int) -> None:
    _check(2 <= z <= 3, f"z = {z} outside 2..3")
    _check(2 ** h - 2 * z + 1 >= max(0, 2 ** h - 6), f"z = {z} violates 2^h-2z+1 >= max(0, 2^h-6) for h = {h}")


def omega_star_z(h: int, z: int) -> frozenset[int]:
    _check_h(h)
    check_z(h, z)
    return frozenset(range(z, 2 ** h - z + 2))


def window_zt(ph: int, z: int, t: int) -> frozenset[int]:
    """Exponents in Omega_z but not in Omega_t."""
    return frozenset(range(t + 1, z + 1)) | frozenset(range(ph + 1 - z, ph - t + 1))


def window_uv(ph: int, u: int, v: int) -> frozenset[int]:
    """Exponents in Omega*_u but not in Omega*_v."""
    half = ph // 2
    return frozenset(range(half - u, half - v)) | frozenset(range(half + v + 2, half + u + 2))


def single_axis_grid(n: int, in_J: bool, ph: int) -> GridSpec:
    return GridSpec((n,), frozenset({1}) if in_J else frozenset(), ph)
