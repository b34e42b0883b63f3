"""Optimal exponent-set families and their predicted parameter profiles.

Each family is described by a validation routine that checks every
hypothesis and computes the profile arithmetically, plus a builder that
materialises the exponent set.  Failed hypotheses raise FamilyError naming
the clause that does not hold.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import ceil, gcd, prod
from typing import Any, Callable, Iterable, Iterator, Sequence

from .galois import is_prime, prime_power
from .grid import (
    DeltaSet,
    GridSpec,
    omega_3pt,
    omega_a,
    omega_perp,
    omega_star_b,
    omega_star_z,
    window_uv,
    window_zt,
    check_z,
    realizable_sizes,
)


class FamilyError(ValueError):
    pass


def lhs_defect(n: int, k: int, d: int, r: int, delta: int) -> int:
    return n + 1 - k - d - (ceil(k / r) - 1) * (delta - 1)


@dataclass(frozen=True)
class PredictedProfile:
    n: int
    k: int
    d: int
    r: int
    delta: int
    interpolation_axis: int

    @property
    def defect(self) -> int:
        return lhs_defect(self.n, self.k, self.d, self.r, self.delta)

    @property
    def optimal(self) -> bool:
        return self.defect == 0

    def key(self) -> tuple[int, int, int, int, int]:
        return (self.n, self.k, self.d, self.r, self.delta)

    def as_dict(self) -> dict[str, Any]:
        return {"n": self.n, "k": self.k, "d": self.d, "r": self.r, "delta": self.delta,
                "optimal": self.optimal, "defect": self.defect, "axis": self.interpolation_axis}


FAMILIES = (
    "RECT1", "RECTELIM2", "RECTELIM2_SIGMA", "RECTP3", "RECTP3_SIGMA",
    "HYPER1", "HYPERELIM2", "SF_BIV_Q1", "SF_BIV_Q2", "SF_MULT_Q1", "SF_MULT_Q2",
)

# canonical parameter order per family; also fixes the text form
PARAM_ORDER: dict[str, tuple[str, ...]] = {
    "RECT1": ("n1", "n2", "i", "j"),
    "RECTELIM2": ("n1", "n2", "i", "s"),
    "RECTELIM2_SIGMA": ("n1", "n2", "j", "s"),
    "RECTP3": ("n1", "n2", "i", "j"),
    "RECTP3_SIGMA": ("n1", "n2", "i", "j"),
    "HYPER1": ("sizes", "j0", "i"),
    "HYPERELIM2": ("sizes", "j0", "i", "s"),
    "SF_BIV_Q1": ("case", "nprime", "z", "t", "u", "v"),
    "SF_BIV_Q2": ("case", "nprime", "z", "j"),
    "SF_MULT_Q1": ("case", "sizes", "S1", "z", "t", "u", "v"),
    "SF_MULT_Q2": ("case", "sizes", "S1", "z"),
}
SUBFIELD_FAMILIES = ("SF_BIV_Q1", "SF_BIV_Q2", "SF_MULT_Q1", "SF_MULT_Q2")


@dataclass(frozen=True)
class FamilyDescriptor:
    """A family name, the field GF(p^l), the alphabet GF(p^h), the
    interpolation axis and the family parameters."""

    family: str
    p: int
    l: int
    h: int
    axis: int
    params: tuple[tuple[str, Any], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise FamilyError(f"unknown family {self.family!r}")
        order = PARAM_ORDER[self.family]
        extra = [k for k, _ in self.params if k not in order]
        if extra:
            raise FamilyError(f"unknown parameter(s) {extra} for {self.family}")
        norm = []
        got = dict(self.params)
        for k in order:
            if k in got and got[k] is not None:
                v = got[k]
                if k in ("sizes", "S1"):
                    v = tuple(int(x) for x in v)
                else:
                    v = int(v)
                norm.append((k, v))
        object.__setattr__(self, "params", tuple(norm))

    @classmethod
    def make(cls, family: str, p: int, l: int, h: int | None = None, axis: int = 1, **params) -> FamilyDescriptor:
        return cls(family, p, l, l if h is None else h, axis, tuple(params.items()))

    @property
    def q(self) -> int:
        return self.p ** self.l

    @property
    def ph(self) -> int:
        return self.p ** self.h

    def get(self, name: str, default=None):
        return dict(self.params).get(name, default)

    def to_text(self) -> str:
        parts = [f"family={self.family}", f"p={self.p}", f"l={self.l}", f"h={self.h}", f"axis={self.axis}"]
        for k, v in self.params:
            if isinstance(v, tuple):
                v = ",".join(str(x) for x in v) if v else "-"
            parts.append(f"{k}={v}")
        return " ".join(parts)

    @classmethod
    def from_text(cls, text: str) -> FamilyDescriptor:
        kv: dict[str, str] = {}
        for tok in text.split():
            if "=" not in tok:
                raise FamilyError(f"token {tok!r} is not key=value")
            k, v = tok.split("=", 1)
            if k in kv:
                raise FamilyError(f"key {k!r} given twice")
            kv[k] = v
        try:
            fam = kv.pop("family")
            p = int(kv.pop("p"))
            l = int(kv.pop("l"))
        except KeyError as exc:
            raise FamilyError(f"descriptor is missing {exc.args[0]!r}") from None
        h = int(kv.pop("h", l))
        axis = int(kv.pop("axis", 1))
        params: dict[str, Any] = {}
        for k, v in kv.items():
            if k in ("sizes", "S1"):
                params[k] = () if v in ("-", "") else tuple(int(x) for x in v.split(","))
            else:
                params[k] = int(v)
        return cls.make(fam, p, l, h, axis, **params)


@dataclass
class Construction:
    descriptor: FamilyDescriptor
    grid: GridSpec
    profile: PredictedProfile
    _builder: Callable[[], DeltaSet] | None = None
    _delta: DeltaSet | None = None

    @property
    def delta(self) -> DeltaSet:
        if self._delta is None:
            self._delta = self._builder()
        return self._delta

    @property
    def h(self) -> int:
        return self.descriptor.h

    @property
    def axis(self) -> int:
        return self.profile.interpolation_axis


def _req(cond: bool, clause: str) -> None:
    if not cond:
        raise FamilyError(clause)


# bivariate decreasing families

def _rect_profile(n1: int, n2: int, i: int, j: int) -> PredictedProfile:
    _req(0 <= i <= n1 - 1 and 0 <= j <= n2 - 1, f"need 0 <= i <= n1-1 and 0 <= j <= n2-1, got i={i}, j={j}")
    n = n1 * n2
    k = (i + 1) * (j + 1)
    d = (n1 - i) * (n2 - j)
    if j == 0:
        return PredictedProfile(n, k, d, 1, n2, 2)
    if i == 0:
        return PredictedProfile(n, k, d, 1, n1, 1)
    if 1 <= i <= n1 - 2 and j == n2 - 1:
        return PredictedProfile(n, k, d, i + 1, n1 - i, 1)
    if i == n1 - 1 and 1 <= j <= n2 - 2:
        return PredictedProfile(n, k, d, j + 1, n2 - j, 2)
    _req(not (i == n1 - 1 and j == n2 - 1), "i = n1-1 and j = n2-1 gives the whole space, which is not an LRC")
    # non-optimal rectangle: report the axis with the smaller defect
    a = PredictedProfile(n, k, d, i + 1, n1 - i, 1)
    b = PredictedProfile(n, k, d, j + 1, n2 - j, 2)
    return a if a.defect <= b.defect else b


def delta_rect(n1: int, n2: int, i: int, j: int) -> tuple[DeltaSet, PredictedProfile]:
    prof = _rect_profile(n1, n2, i, j)
    g = GridSpec((n1, n2))
    return DeltaSet(g, product(range(i + 1), range(j + 1))), prof


def _rectelim_profile(n1: int, n2: int, i: int, s: int) -> PredictedProfile:
    _req(i <= n1 - 2, f"need i <= n1-2, got i={i}, n1={n1}")
    _req(s < i, f"need s < i, got s={s}, i={i}")
    _req(s >= max(0, 2 * i - n1), f"need s >= max(0, 2i-n1) = {max(0, 2 * i - n1)}, got s={s}")
    return PredictedProfile(n1 * n2, (i + 1) * (n2 - 1) + s + 1, n1 - s, i + 1, n1 - i, 1)


def delta_rectelim(n1: int, n2: int, i: int, s: int, sigma: bool = False) -> tuple[DeltaSet, PredictedProfile]:
    """Staircase: a full-height rectangle with the top row cut back to s.

    With sigma the roles of the axes are exchanged and i plays the part of j.
    """
    if sigma:
        D, prof = delta_rectelim(n2, n1, i, s)
        return D.transpose(), _swap(prof)
    prof = _rectelim_profile(n1, n2, i, s)
    mem = [(a, b) for a in range(i + 1) for b in range(n2 - 1)] + [(a, n2 - 1) for a in range(s + 1)]
    return DeltaSet(GridSpec((n1, n2)), mem), prof


def _rectp_profile(n1: int, n2: int, i: int, j: int) -> PredictedProfile:
    _req(1 <= i <= n1 - 2, f"need 1 <= i <= n1-2, got i={i}")
    _req(j <= n2 - 2, f"need j <= n2-2, got j={j}")
    _req(j >= 1 and i * j >= i * (n2 + 1) - n1,
         f"need j >= max(1, (i(n2+1)-n1)/i) = max(1, {(i * (n2 + 1) - n1) / i:g}), got j={j}")
    return PredictedProfile(n1 * n2, (i + 1) * j + 1, n1 * (n2 - j), i + 1, n1 - i, 1)


def delta_rectwithp(n1: int, n2: int, i: int, j: int, sigma: bool = False) -> tuple[DeltaSet, PredictedProfile]:
    """Rectangle {0..i} x {0..j-1} plus the single point (0, j).

    The sigma variant is {0..i-1} x {0..j} plus (i, 0), with the range
    conditions read on the other axis.
    """
    if sigma:
        D, prof = delta_rectwithp(n2, n1, j, i)
        return D.transpose(), _swap(prof)
    prof = _rectp_profile(n1, n2, i, j)
    mem = [(a, b) for a in range(i + 1) for b in range(j)] + [(0, j)]
    return DeltaSet(GridSpec((n1, n2)), mem), prof


def _swap(prof: PredictedProfile) -> PredictedProfile:
    return PredictedProfile(prof.n, prof.k, prof.d, prof.r, prof.delta, 3 - prof.interpolation_axis)


# multivariate decreasing families

def _check_multi(sizes: Sequence[int], j0: int) -> None:
    _req(len(sizes) >= 3, f"the multivariate families need m >= 3 axes, got m={len(sizes)}")
    _req(all(n >= 2 for n in sizes), "every axis size must be >= 2")
    _req(1 <= j0 <= len(sizes), f"axis j0={j0} outside 1..{len(sizes)}")


def _hyper_profile(sizes: Sequence[int], j0: int, i: int) -> PredictedProfile:
    _check_multi(sizes, j0)
    nj = sizes[j0 - 1]
    _req(0 <= i <= nj - 2, f"need 0 <= i <= n_j0-2 = {nj - 2}, got i={i}")
    N = prod(sizes) // nj
    return PredictedProfile(prod(sizes), N * (i + 1), nj - i, i + 1, nj - i, j0)


def delta_hyperrect(sizes: Sequence[int], j0: int, i: int) -> tuple[DeltaSet, PredictedProfile]:
    sizes = tuple(sizes)
    prof = _hyper_profile(sizes, j0, i)
    ranges = [range(i + 1) if a == j0 else range(n) for a, n in enumerate(sizes, start=1)]
    return DeltaSet(GridSpec(sizes), product(*ranges)), prof


def _hyperelim_profile(sizes: Sequence[int], j0: int, i: int, s: int) -> PredictedProfile:
    _check_multi(sizes, j0)
    nj = sizes[j0 - 1]
    ok = (i == 0 and s == 0) or (max(1, 2 * i - nj + 1) <= s <= i <= nj - 2)
    _req(ok, f"need max(1, 2i-n_j0+1) <= s <= i <= n_j0-2 or i = s = 0, got i={i}, s={s}, n_j0={nj}")
    N = prod(sizes) // nj
    d = nj - s + 1 if s >= 1 else 2 * (nj - i)
    return PredictedProfile(prod(sizes), N * (i + 1) - (i - s + 1), d, i + 1, nj - i, j0)


def _corner(sizes: Sequence[int], j0: int, e: int) -> tuple[int, ...]:
    return tuple(e if a == j0 else n - 1 for a, n in enumerate(sizes, start=1))


def delta_hyperrectelim(sizes: Sequence[int], j0: int, i: int, s: int) -> tuple[DeltaSet, PredictedProfile]:
    sizes = tuple(sizes)
    prof = _hyperelim_profile(sizes, j0, i, s)
    D, _ = delta_hyperrect(sizes, j0, i)
    drop = {_corner(sizes, j0, e) for e in range(s, i + 1)}
    return DeltaSet(D.grid, D.members - drop), prof


# subfield-subcode families

def _field_setup(p: int, l: int, h: int) -> None:
    _req(is_prime(p), f"p = {p} is not prime")
    _req(l >= 1 and h >= 1 and l % h == 0, f"h = {h} must divide l = {l}")


def _check_q1_base(p: int, l: int, h: int) -> int:
    _field_setup(p, l, h)
    ph, q = p ** h, p ** l
    _req(ph >= (4 if p == 2 else 5), f"need p^h >= 4 (p = 2) or p^h >= 5 (p odd), got p^h = {ph}")
    _req((q - 1) % (ph + 1) == 0, f"need p^h+1 = {ph + 1} to divide q-1 = {q - 1}")
    return ph


def _check_zt(ph: int, z: int | None, t: int | None, need_t: bool) -> None:
    _req(z is not None, "parameter z is required")
    _req(1 <= z <= ph // 2 - 1, f"need 1 <= z <= floor(p^h/2)-1 = {ph // 2 - 1}, got z={z}")
    if need_t:
        _req(t is not None, "parameter t is required")
        _req(0 <= t < z, f"need 0 <= t < z, got t={t}, z={z}")
        _req(2 * t >= max(0, 4 * z - ph - 1), f"need 2t >= max(0, 4z-p^h-1) = {max(0, 4 * z - ph - 1)}, got t={t}")


def _check_uv(p: int, ph: int, u: int | None, v: int | None, need_v: bool) -> None:
    _req(p == 2, "the starred cases need characteristic 2")
    _req(u is not None, "parameter u is required")
    _req(0 <= u <= ph // 2 - 2, f"need 0 <= u <= p^h/2-2 = {ph // 2 - 2}, got u={u}")
    if need_v:
        _req(u >= 1, f"need u >= 1 for a v-window, got u={u}")
        _req(v is not None, "parameter v is required")
        _req(0 <= v < u, f"need 0 <= v < u, got v={v}, u={u}")
        _req(2 * v + 1 >= max(0, 4 * u + 1 - ph), f"need 2v+1 >= max(0, 4u+1-p^h) = {max(0, 4 * u + 1 - ph)}, got v={v}")


def _odd_gcd_clause(p: int, ph: int, N: int) -> None:
    if p != 2:
        _req(gcd(N, ph) != 1 or gcd(N, ph + 1) != 1,
             f"for odd p need gcd({N}, p^h) != 1 or gcd({N}, p^h+1) != 1")


def _biv_sizes(axis: int, n_i: int, n_other: int) -> tuple[int, int]:
    return (n_i, n_other) if axis == 1 else (n_other, n_i)


def _place(axis: int, a: int, b: int) -> tuple[int, int]:
    """(coordinate on the interpolation axis, coordinate on the other axis)."""
    return (a, b) if axis == 1 else (b, a)


def sf_biv_q1_setup(p: int, l: int, h: int, axis: int, case: int, nprime: int,
                    z: int | None = None, t: int | None = None, u: int | None = None, v: int | None = None):
    ph = _check_q1_base(p, l, h)
    q = p ** l
    _req(axis in (1, 2), f"interpolation axis must be 1 or 2, got {axis}")
    _req(case in range(1, 7), f"case must be 1..6, got {case}")
    _req(nprime >= 2, f"need n' >= 2, got {nprime}")
    if case in (1, 4):
        _req((q - 1) % nprime == 0, f"case {case} needs n' = {nprime} to divide q-1 = {q - 1}")
        J = frozenset({1, 2})
    else:
        _req((q - 1) % (nprime - 1) == 0, f"case {case} needs n'-1 = {nprime - 1} to divide q-1 = {q - 1}")
        J = frozenset({axis})
    if case <= 3:
        _check_zt(ph, z, t, case == 3)
        if case == 3:
            _odd_gcd_clause(p, ph, nprime)
        a = t if case == 3 else z
        k = (nprime - 1) * (2 * z + 1) + 2 * a + 1
        d = ph + 1 - 2 * a
        r, dl = 2 * z + 1, ph - 2 * z + 1
    else:
        _check_uv(p, ph, u, v, case == 6)
        a = v if case == 6 else u
        k = (nprime - 1) * (2 * u + 2) + 2 * a + 2
        d = ph - 2 * a
        r, dl = 2 * u + 2, ph - 2 * u
    sizes = _biv_sizes(axis, ph + 1, nprime)
    grid = GridSpec(sizes, J, ph)
    prof = PredictedProfile((ph + 1) * nprime, k, d, r, dl, axis)

    def build() -> DeltaSet:
        if case <= 3:
            full, top = omega_a(ph, z), (omega_a(ph, t) if case == 3 else omega_a(ph, z))
        else:
            full, top = omega_star_b(ph, u), (omega_star_b(ph, v) if case == 6 else omega_star_b(ph, u))
        mem = [_place(axis, a_, b_) for a_ in full for b_ in range(nprime - 1)]
        mem += [_place(axis, a_, nprime - 1) for a_ in top]
        return DeltaSet(grid, mem)

    return grid, prof, build


def sf_biv_q2_setup(p: int, l: int, h: int, axis: int, case: int, nprime: int,
                    z: int | None = None, j: int | None = None):
    _field_setup(p, l, h)
    _req(p == 2, "this family needs characteristic 2")
    _req(h >= 2, f"need h >= 2, got h={h}")
    _req(l == 2 * h, f"need h = l/2, got l={l}, h={h}")
    _req(axis in (1, 2), f"interpolation axis must be 1 or 2, got {axis}")
    _req(case in range(1, 9), f"case must be 1..8, got {case}")
    _req(nprime >= 2, f"need n' >= 2, got {nprime}")
    q, ph = 2 ** l, 2 ** h
    other = 3 - axis
    divs = {1: ("n'", q - 1), 2: ("n'-1", q - 1), 3: ("n'", q - 1), 4: ("n'-1", q - 1),
            5: ("n'", ph - 1), 6: ("n'-1", ph - 1), 7: ("n'-1", q - 1), 8: ("n'-1", q - 1)}
    what, modulus = divs[case]
    val = nprime if what == "n'" else nprime - 1
    _req(modulus % val == 0, f"case {case} needs {what} = {val} to divide {modulus}")
    J = frozenset({other}) if case in (1, 3, 5) else frozenset()
    if case in (5, 6, 7):
        _req(j is not None, "parameter j is required")
        lo = max(1, nprime - ph // 2)
        if case == 5:
            _req(lo <= j <= nprime - 1, f"case 5 needs max(1, n'-2^(h-1)) = {lo} <= j <= n'-1 = {nprime - 1}, got j={j}")
        elif case == 6:
            _req(lo <= j < nprime - 1, f"case 6 needs max(1, n'-2^(h-1)) = {lo} <= j < n'-1 = {nprime - 1}, got j={j}")
        else:
            _req(j == nprime - 1, f"case 7 needs j = n'-1 = {nprime - 1}, got j={j}")
        k, d, r, dl = 3 * j + 1, (ph + 2) * (nprime - j), 3, ph
    else:
        if case == 8:
            _req(z is not None, "parameter z is required")
            try:
                check_z(h, z)
            except ValueError as exc:
                raise FamilyError(str(exc)) from None
        a, b, c = {1: (3, 3, ph), 2: (3, 3, ph), 3: (ph - 1, ph - 1, 4), 4: (ph - 1, ph - 1, 4)}.get(
            case, (ph - 1, ph - 2 * (z or 0) + 2, 4))
        k, d, r, dl = a * (nprime - 1) + b, ph + 3 - b, a, c
    sizes = _biv_sizes(axis, ph + 2, nprime)
    grid = GridSpec(sizes, J, ph)
    prof = PredictedProfile((ph + 2) * nprime, k, d, r, dl, axis)

    def build() -> DeltaSet:
        if case in (1, 2):
            mem = [_place(axis, a_, b_) for a_ in omega_3pt(h) for b_ in range(nprime)]
        elif case in (3, 4):
            mem = [_place(axis, a_, b_) for a_ in omega_perp(h) for b_ in range(nprime)]
        elif case in (5, 6, 7):
            mem = [_place(axis, a_, b_) for a_ in omega_3pt(h) for b_ in range(j)] + [_place(axis, 0, j)]
        else:
            mem = [_place(axis, a_, b_) for a_ in omega_perp(h) for b_ in range(nprime - 1)]
            mem += [_place(axis, a_, nprime - 1) for a_ in omega_star_z(h, z)]
        return DeltaSet(grid, mem)

    return grid, prof, build


def _mult_common(sizes: Sequence[int], j0: int, S1: Iterable[int], q: int, n_j0: int):
    sizes = tuple(int(n) for n in sizes)
    m = len(sizes)
    _req(m >= 2, f"need at least two axes, got {m}")
    _req(1 <= j0 <= m, f"axis j0={j0} outside 1..{m}")
    _req(sizes[j0 - 1] == n_j0, f"axis j0 must have size {n_j0}, got {sizes[j0 - 1]}")
    S1 = frozenset(S1)
    others = frozenset(range(1, m + 1)) - {j0}
    _req(S1 <= others, f"S1 = {sorted(S1)} must be a subset of the axes other than j0")
    S2 = others - S1
    for j in sorted(S1):
        _req((q - 1) % sizes[j - 1] == 0, f"axis {j} in S1 needs n_{j} = {sizes[j - 1]} to divide q-1 = {q - 1}")
    for j in sorted(S2):
        _req((q - 1) % (sizes[j - 1] - 1) == 0,
             f"axis {j} in S2 needs n_{j}-1 = {sizes[j - 1] - 1} to divide q-1 = {q - 1}")
    N = prod(sizes) // n_j0
    return sizes, S1, S2, N


def _slab(sizes: Sequence[int], j0: int, omega: Iterable[int]) -> set[tuple[int, ...]]:
    ranges = [sorted(omega) if a == j0 else range(n) for a, n in enumerate(sizes, start=1)]
    return set(product(*ranges))


def sf_mult_q1_setup(p: int, l: int, h: int, j0: int, case: int, sizes: Sequence[int], S1: Iterable[int] = (),
                     z: int | None = None, t: int | None = None, u: int | None = None, v: int | None = None):
    ph = _check_q1_base(p, l, h)
    q = p ** l
    _req(case in range(1, 5), f"case must be 1..4, got {case}")
    sizes, S1, S2, N = _mult_common(sizes, j0, S1, q, ph + 1)
    if case in (2, 4):
        _req(not S1, f"case {case} needs S1 to be empty")
    J = frozenset(S1 | {j0})
    if case <= 2:
        _check_zt(ph, z, t, case == 2)
        if case == 2:
            _odd_gcd_clause(p, ph, N)
        a = 2 * (z - t) if case == 2 else 0
        k, d, r, dl = (2 * z + 1) * N - a, ph + 1 - 2 * z + a, 2 * z + 1, ph - 2 * z + 1
    else:
        _check_uv(p, ph, u, v, case == 4)
        a = 2 * (u - v) if case == 4 else 0
        k, d, r, dl = (2 * u + 2) * N - a, ph - 2 * u + a, 2 * u + 2, ph - 2 * u
    grid = GridSpec(sizes, J, ph)
    prof = PredictedProfile((ph + 1) * N, k, d, r, dl, j0)

    def build() -> DeltaSet:
        if case <= 2:
            mem = _slab(sizes, j0, omega_a(ph, z))
            if case == 2:
                mem -= {_corner(sizes, j0, e) for e in window_zt(ph, z, t)}
        else:
            mem = _slab(sizes, j0, omega_star_b(ph, u))
            if case == 4:
                mem -= {_corner(sizes, j0, e) for e in window_uv(ph, u, v)}
        return DeltaSet(grid, mem)

    return grid, prof, build


def sf_mult_q2_setup(p: int, l: int, h: int, j0: int, case: int, sizes: Sequence[int], S1: Iterable[int] = (),
                     z: int | None = None):
    _field_setup(p, l, h)
    _req(p == 2, "this family needs characteristic 2")
    _req(h >= 2, f"need h >= 2, got h={h}")
    _req(l == 2 * h, f"need h = l/2, got l={l}, h={h}")
    _req(case in range(1, 5), f"case must be 1..4, got {case}")
    q, ph = 2 ** l, 2 ** h
    sizes, S1, S2, N = _mult_common(sizes, j0, S1, q, ph + 2)
    if case in (3, 4):
        _req(not S1, f"case {case} needs S1 to be empty")
    if case == 4:
        _req(z is not None, "parameter z is required")
        try:
            check_z(h, z)
        except ValueError as exc:
            raise FamilyError(str(exc)) from None
    a, b, c = {1: (3, 0, ph), 2: (ph - 1, 0, 4), 3: (3, 2, ph)}.get(case, (ph - 1, 2 * (z or 0) - 3, 4))
    grid = GridSpec(sizes, frozenset(S1), ph)
    prof = PredictedProfile((ph + 2) * N, a * N - b, c + b, a, c, j0)

    def build() -> DeltaSet:
        if case in (1, 3):
            mem = _slab(sizes, j0, omega_3pt(h))
            if case == 3:
                mem -= {_corner(sizes, j0, e) for e in (1, ph)}
        else:
            mem = _slab(sizes, j0, omega_perp(h))
            if case == 4:
                gone = (0,) if z == 2 else (0, 2, ph - 1)
                mem -= {_corner(sizes, j0, e) for e in gone}
        return DeltaSet(grid, mem)

    return grid, prof, build


# public constructors mirroring the family list

def sf_biv_q1(case: int, i: int, ph: int, q: int, n_other: int, z=None, t=None, u=None, v=None):
    p, l = prime_power(q)
    h = _log_p(ph, p)
    grid, prof, build = sf_biv_q1_setup(p, l, h, i, case, n_other, z, t, u, v)
    return grid, build(), prof


def sf_biv_q2(case: int, i: int, h: int, n_other: int, z=None, j=None):
    grid, prof, build = sf_biv_q2_setup(2, 2 * h, h, i, case, n_other, z, j)
    return grid, build(), prof


def sf_mult_q1(case: int, j0: int, ph: int, q: int, sizes: Sequence[int], S1: Iterable[int] = (),
               z=None, t=None, u=None, v=None):
    p, l = prime_power(q)
    h = _log_p(ph, p)
    grid, prof, build = sf_mult_q1_setup(p, l, h, j0, case, sizes, S1, z, t, u, v)
    return grid, build(), prof


def sf_mult_q2(case: int, j0: int, h: int, sizes: Sequence[int], S1: Iterable[int] = (), z=None):
    grid, prof, build = sf_mult_q2_setup(2, 2 * h, h, j0, case, sizes, S1, z)
    return grid, build(), prof


def _log_p(ph: int, p: int) -> int:
    h, x = 0, 1
    while x < ph:
        x *= p
        h += 1
    _req(x == ph and h >= 1, f"p^h = {ph} is not a power of p = {p}")
    return h


# descriptor dispatch

def _setup(desc: FamilyDescriptor):
    f = desc.family
    P = dict(desc.params)
    try:
        if f in SUBFIELD_FAMILIES:
            if f == "SF_BIV_Q1":
                return sf_biv_q1_setup(desc.p, desc.l, desc.h, desc.axis, P["case"], P["nprime"],
                                       P.get("z"), P.get("t"), P.get("u"), P.get("v"))
            if f == "SF_BIV_Q2":
                return sf_biv_q2_setup(desc.p, desc.l, desc.h, desc.axis, P["case"], P["nprime"],
                                       P.get("z"), P.get("j"))
            if f == "SF_MULT_Q1":
                return sf_mult_q1_setup(desc.p, desc.l, desc.h, desc.axis, P["case"], P["sizes"], P.get("S1", ()),
                                        P.get("z"), P.get("t"), P.get("u"), P.get("v"))
            return sf_mult_q2_setup(desc.p, desc.l, desc.h, desc.axis, P["case"], P["sizes"], P.get("S1", ()),
                                    P.get("z"))
        _field_setup(desc.p, desc.l, desc.h)
        if f == "RECT1":
            prof = _rect_profile(P["n1"], P["n2"], P["i"], P["j"])
            build = lambda: delta_rect(P["n1"], P["n2"], P["i"], P["j"])[0]
        elif f in ("RECTELIM2", "RECTELIM2_SIGMA"):
            sig = f.endswith("SIGMA")
            a = P["j"] if sig else P["i"]
            prof = _swap(_rectelim_profile(P["n2"], P["n1"], a, P["s"])) if sig else _rectelim_profile(P["n1"], P["n2"], a, P["s"])
            build = lambda: delta_rectelim(P["n1"], P["n2"], a, P["s"], sig)[0]
        elif f in ("RECTP3", "RECTP3_SIGMA"):
            sig = f.endswith("SIGMA")
            prof = _swap(_rectp_profile(P["n2"], P["n1"], P["j"], P["i"])) if sig else _rectp_profile(P["n1"], P["n2"], P["i"], P["j"])
            build = lambda: delta_rectwithp(P["n1"], P["n2"], P["i"], P["j"], sig)[0]
        elif f == "HYPER1":
            prof = _hyper_profile(P["sizes"], P["j0"], P["i"])
            build = lambda: delta_hyperrect(P["sizes"], P["j0"], P["i"])[0]
        else:
            prof = _hyperelim_profile(P["sizes"], P["j0"], P["i"], P["s"])
            build = lambda: delta_hyperrectelim(P["sizes"], P["j0"], P["i"], P["s"])[0]
    except KeyError as exc:
        raise FamilyError(f"{f} needs parameter {exc.args[0]!r}") from None
    sizes = (P["n1"], P["n2"]) if "n1" in P else tuple(P["sizes"])
    q = desc.q
    _req(all(n <= q for n in sizes), f"axis sizes {sizes} exceed the field size q = {q}")
    return GridSpec(sizes), prof, build


def build(desc: FamilyDescriptor) -> Construction:
    grid, prof, builder = _setup(desc)
    if desc.family not in SUBFIELD_FAMILIES:
        desc = FamilyDescriptor(desc.family, desc.p, desc.l, desc.h, prof.interpolation_axis, desc.params)
    return Construction(desc, grid, prof, builder)


def predict_only(desc: FamilyDescriptor) -> PredictedProfile:
    return _setup(desc)[1]


# bounded catalogue of family instances

def _subfield_degrees(p: int, l: int) -> list[int]:
    return [h for h in range(1, l + 1) if l % h == 0]


def _iter_q1_params(p: int, ph: int, case: int) -> Iterator[dict[str, int]]:
    if case <= 3:
        for z in range(1, ph // 2):
            if case == 3:
                for t in range(0, z):
                    yield {"z": z, "t": t}
            else:
                yield {"z": z}
    elif p == 2:
        for u in range(0, ph // 2 - 1):
            if case in (4, 5):
                yield {"u": u}
            else:
                for v in range(0, u):
                    yield {"u": u, "v": v}


def _iter_mult_q1_params(p: int, ph: int, case: int) -> Iterator[dict[str, int]]:
    mapping = {1: 1, 2: 3, 3: 4, 4: 6}
    yield from _iter_q1_params(p, ph, mapping[case])


def _size_tuples(q: int, count: int, cap: int, any_size: bool = False) -> Iterator[tuple[int, ...]]:
    """Nondecreasing size tuples with product <= cap; the subfield families need root-of-unity sizes."""
    sizes = list(range(2, q + 1)) if any_size else realizable_sizes(q)

    def rec(start: int, left: int, budget: int):
        if left == 0:
            yield ()
            return
        for a in range(start, len(sizes)):
            n = sizes[a]
            if n > budget:
                break
            for rest in rec(a, left - 1, budget // n):
                yield (n,) + rest

    yield from rec(0, count, cap)


def _attempt(desc: FamilyDescriptor) -> PredictedProfile | None:
    try:
        return predict_only(desc)
    except FamilyError:
        return None


def iter_catalog(q_values: Iterable[int], n_max: int = 1000, m_max: int = 4,
                 families: Iterable[str] | None = None) -> Iterator[tuple[FamilyDescriptor, PredictedProfile]]:
    fams = set(families) if families is not None else set(FAMILIES)
    for q in q_values:
        p, l = prime_power(q)
        if fams & {"RECT1", "RECTELIM2", "RECTELIM2_SIGMA", "RECTP3", "RECTP3_SIGMA"}:
            for n1 in range(2, q + 1):
                for n2 in range(2, q + 1):
                    if n1 * n2 > n_max:
                        continue
                    for fam in ("RECT1", "RECTELIM2", "RECTELIM2_SIGMA", "RECTP3", "RECTP3_SIGMA"):
                        if fam not in fams:
                            continue
                        keys = PARAM_ORDER[fam][2:]
                        for a in range(0, max(n1, n2)):
                            for b in range(0, max(n1, n2)):
                                desc = FamilyDescriptor.make(fam, p, l, n1=n1, n2=n2, **dict(zip(keys, (a, b))))
                                prof = _attempt(desc)
                                if prof is not None and prof.optimal:
                                    yield desc, prof
        if fams & {"HYPER1", "HYPERELIM2"}:
            for m in range(3, m_max + 1):
                for sizes in _size_tuples(q, m, n_max, any_size=True):
                    for j0 in sorted({sizes.index(n) + 1 for n in sizes}):
                        for i in range(0, sizes[j0 - 1] - 1):
                            if "HYPER1" in fams:
                                desc = FamilyDescriptor.make("HYPER1", p, l, sizes=sizes, j0=j0, i=i)
                                prof = _attempt(desc)
                                if prof:
                                    yield desc, prof
                            if "HYPERELIM2" in fams:
                                for s in range(0, i + 1):
                                    desc = FamilyDescriptor.make("HYPERELIM2", p, l, sizes=sizes, j0=j0, i=i, s=s)
                                    prof = _attempt(desc)
                                    if prof:
                                        yield desc, prof
        for h in _subfield_degrees(p, l):
            ph = p ** h
            if "SF_BIV_Q1" in fams and (q - 1) % (ph + 1) == 0:
                for case in range(1, 7):
                    for params in _iter_q1_params(p, ph, case):
                        for nprime in range(2, n_max // (ph + 1) + 1):
                            desc = FamilyDescriptor.make("SF_BIV_Q1", p, l, h, 1, case=case, nprime=nprime, **params)
                            prof = _attempt(desc)
                            if prof:
                                yield desc, prof
            if "SF_BIV_Q2" in fams and p == 2 and l == 2 * h and h >= 2:
                for case in range(1, 9):
                    for nprime in range(2, n_max // (ph + 2) + 1):
                        extra: list[dict[str, int]]
                        if case in (5, 6, 7):
                            extra = [{"j": j} for j in range(1, nprime)]
                        elif case == 8:
                            extra = [{"z": 2}, {"z": 3}]
                        else:
                            extra = [{}]
                        for params in extra:
                            desc = FamilyDescriptor.make("SF_BIV_Q2", p, l, h, 1, case=case, nprime=nprime, **params)
                            prof = _attempt(desc)
                            if prof:
                                yield desc, prof
            if "SF_MULT_Q1" in fams and (q - 1) % (ph + 1) == 0:
                for m in range(3, m_max + 1):
                    for others in _size_tuples(q, m - 1, n_max // (ph + 1)):
                        for mask in range(2 ** (m - 1)):
                            S1 = tuple(a + 2 for a in range(m - 1) if mask >> a & 1)
                            for case in range(1, 5):
                                for params in _iter_mult_q1_params(p, ph, case):
                                    desc = FamilyDescriptor.make("SF_MULT_Q1", p, l, h, 1, case=case,
                                                                 sizes=(ph + 1,) + others, S1=S1, **params)
                                    prof = _attempt(desc)
                                    if prof:
                                        yield desc, prof
            if "SF_MULT_Q2" in fams and p == 2 and l == 2 * h and h >= 2:
                for m in range(3, m_max + 1):
                    for others in _size_tuples(q, m - 1, n_max // (ph + 2)):
                        for mask in range(2 ** (m - 1)):
                            S1 = tuple(a + 2 for a in range(m - 1) if mask >> a & 1)
                            for case in range(1, 5):
                                for params in ([{"z": 2}, {"z": 3}] if case == 4 else [{}]):
                                    desc = FamilyDescriptor.make("SF_MULT_Q2", p, l, h, 1, case=case,
                                                                 sizes=(ph + 2,) + others, S1=S1, **params)
                                    prof = _attempt(desc)
                                    if prof:
                                        yield desc, prof


def list_catalog(q_values: Iterable[int], n_min: int = 1, n_max: int = 1000, m_max: int = 4,
                 ph: Iterable[int] | None = None, r: int | None = None, delta: int | None = None,
                 families: Iterable[str] | None = None) -> list[tuple[FamilyDescriptor, PredictedProfile]]:
    """Family instances over the given fields, deduplicated by (n, k, d, r, delta)."""
    phs = set(ph) if ph is not None else None
    seen: set[tuple] = set()
    out = []
    for desc, prof in iter_catalog(q_values, n_max, m_max, families):
        if prof.n < n_min or prof.n > n_max:
            continue
        if phs is not None and desc.ph not in phs:
            continue
        if r is not None and prof.r != r:
            continue
        if delta is not None and prof.delta != delta:
            continue
        key = (desc.ph,) + prof.key()
        if key in seen:
            continue
        seen.add(key)
        out.append((desc, prof))
    return out


def bivariate_predicted(n1: int, n2: int) -> set[tuple[int, int, int, int, int]]:
    """Parameter tuples of the bivariate optimal families on an n1 x n2 grid,
    closed under exchanging the axes."""
    out = set()
    for a, b in ((n1, n2), (n2, n1)):
        n = a * b
        for j in range(b):
            out.add((n, j + 1, a * (b - j), 1, a))
        for i in range(1, a - 1):
            out.add((n, (i + 1) * b, a - i, i + 1, a - i))
            for s in range(max(0, 2 * i - a), i):
                out.add((n, (i + 1) * (b - 1) + s + 1, a - s, i + 1, a - i))
            for j in range(1, b - 1):
                if i * j >= i * (b + 1) - a:
                    out.add((n, (i + 1) * j + 1, a * (b - j), i + 1, a - i))
    return out
