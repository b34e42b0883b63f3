"""Evaluation domains, monomial-Cartesian codes and subfield-subcodes."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Any, Sequence

import numpy as np

from . import linalg
from .families import Construction, FamilyDescriptor, PredictedProfile
from .galois import (
    FieldSpec,
    field_new,
    relative_basis,
    roots_of_unity,
    subfield_basis,
    vin_subfield,
    vtrace,
)
from .grid import DeltaSet, GridError, GridSpec, default_J, is_closed


class CodeError(ValueError):
    pass


@dataclass(frozen=True)
class EvaluationDomain:
    field: FieldSpec
    grid: GridSpec
    axis_points: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def m(self) -> int:
        return self.grid.m

    def points(self) -> np.ndarray:
        """All points as an (n, m) array; the last axis varies fastest."""
        return np.array(list(product(*self.axis_points)), dtype=np.int64).reshape(self.n, self.m)

    def index_grid(self) -> np.ndarray:
        """Per-axis position of every coordinate, shape (n, m)."""
        return np.array(list(product(*(range(n) for n in self.grid.sizes))), dtype=np.int64).reshape(self.n, self.m)

    def has_zero(self) -> bool:
        return any(0 in P for P in self.axis_points)


def build_domain(F: FieldSpec, grid: GridSpec) -> EvaluationDomain:
    try:
        grid.check_field(F.q)
    except GridError as exc:
        raise CodeError(str(exc)) from None
    pts = []
    for j, n in enumerate(grid.sizes, start=1):
        if j in grid.J:
            pts.append(tuple(roots_of_unity(F, n)))
        else:
            pts.append(tuple(roots_of_unity(F, n - 1)) + (0,))
    return EvaluationDomain(F, grid, tuple(pts))


def explicit_domain(F: FieldSpec, grid: GridSpec, axis_points: Sequence[Sequence[int]] | None = None) -> EvaluationDomain:
    """A domain from arbitrary distinct points per axis (default: 0, 1, ..., n_j-1)."""
    if axis_points is None:
        axis_points = [tuple(range(n)) for n in grid.sizes]
    pts = tuple(tuple(int(x) for x in P) for P in axis_points)
    if len(pts) != grid.m:
        raise CodeError("one point list per axis is required")
    for j, (P, n) in enumerate(zip(pts, grid.sizes), start=1):
        if len(P) != n or len(set(P)) != n:
            raise CodeError(f"axis {j} needs {n} distinct points")
        if any(not 0 <= x < F.q for x in P):
            raise CodeError(f"axis {j} has a point outside GF({F.q})")
    return EvaluationDomain(F, grid, pts)


def domain_for(F: FieldSpec, sizes: Sequence[int], J=None) -> EvaluationDomain:
    """Roots-of-unity domain, with J chosen by divisibility when not given."""
    sizes = tuple(sizes)
    if J is None:
        try:
            J = default_J(sizes, F.q)
        except GridError as exc:
            raise CodeError(str(exc)) from None
    return build_domain(F, GridSpec(sizes, frozenset(J)))


def _axis_powers(dom: EvaluationDomain) -> list[np.ndarray]:
    F = dom.field
    out = []
    for P, n in zip(dom.axis_points, dom.grid.sizes):
        arr = np.asarray(P, dtype=np.int64)
        out.append(np.stack([F.vpow(arr, e) for e in range(n)]))
    return out


def evaluate_monomial(dom: EvaluationDomain, e: Sequence[int], _pw: list[np.ndarray] | None = None) -> np.ndarray:
    e = dom.grid.check(e)
    F = dom.field
    pw = _pw if _pw is not None else _axis_powers(dom)
    v = np.ones(1, dtype=np.int64)
    for j, x in enumerate(e):
        v = F.vmul(v[:, None], pw[j][x][None, :]).ravel()
    return v


def evaluate_poly(dom: EvaluationDomain, coeffs: dict[tuple[int, ...], int]) -> np.ndarray:
    F = dom.field
    pw = _axis_powers(dom)
    out = np.zeros(dom.n, dtype=np.int64)
    for e, c in coeffs.items():
        if c:
            out = F.vadd(out, F.vmul(c, evaluate_monomial(dom, e, pw)))
    return out


@dataclass
class CodeMeta:
    domain: EvaluationDomain | None = None
    delta: DeltaSet | None = None
    descriptor: FamilyDescriptor | None = None
    profile: PredictedProfile | None = None
    parent_delta: DeltaSet | None = None


@dataclass
class LinearCode:
    """A code given by a generator matrix over GF(p^l).

    Entries are integer-encoded elements of the big field.  When h < l every
    entry lies in GF(p^h) and the code is a GF(p^h)-linear space spanned by
    the rows.
    """

    field: FieldSpec
    generator: np.ndarray
    h: int | None = None
    meta: CodeMeta = field(default_factory=CodeMeta)

    def __post_init__(self):
        self.generator = linalg.as_matrix(self.generator)
        if self.h is None:
            self.h = self.field.l

    @property
    def n(self) -> int:
        return int(self.generator.shape[1])

    @property
    def k(self) -> int:
        return int(self.generator.shape[0])

    @property
    def alphabet(self) -> int:
        return self.field.p ** self.h

    def scalars(self) -> list[int]:
        """The elements of the alphabet field inside GF(p^l)."""
        F = self.field
        if self.h == F.l:
            return list(range(F.q))
        return [0] + roots_of_unity(F, self.alphabet - 1)

    def scalar_basis(self) -> list[int]:
        return subfield_basis(self.field, self.h)


def mcc(F: FieldSpec, grid: GridSpec | None = None, delta: DeltaSet | None = None,
        domain: EvaluationDomain | None = None, check_rank: bool = True) -> LinearCode:
    if domain is None:
        if grid is None:
            raise CodeError("either a grid or a domain is required")
        domain = build_domain(F, grid)
    if delta is None:
        raise CodeError("an exponent set is required")
    if delta.grid.sizes != domain.grid.sizes:
        raise CodeError("exponent set and domain have different shapes")
    pw = _axis_powers(domain)
    rows = [evaluate_monomial(domain, e, pw) for e in delta.sorted()]
    G = np.stack(rows)
    if check_rank and linalg.rank(F, G) != len(rows):
        raise CodeError("generator rows are dependent; the domain does not separate the exponents")
    return LinearCode(F, G, F.l, CodeMeta(domain=domain, delta=delta))


def encode(code: LinearCode, message: Sequence[int]) -> np.ndarray:
    msg = np.asarray(message, dtype=np.int64).reshape(1, -1)
    if msg.shape[1] != code.k:
        raise CodeError(f"message length {msg.shape[1]} differs from k = {code.k}")
    if code.h < code.field.l:
        if not bool(np.all(vin_subfield(code.field, code.h, msg))):
            raise CodeError(f"message symbols must lie in GF({code.alphabet})")
    elif np.any((msg < 0) | (msg >= code.field.q)):
        raise CodeError("message symbol outside the field")
    return linalg.matmul(code.field, msg, code.generator)[0]


def star_product(F: FieldSpec, u: Sequence[int], v: Sequence[int]) -> np.ndarray:
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if u.shape != v.shape:
        raise CodeError("star product needs vectors of equal length")
    return F.vmul(u, v)


def project(code: LinearCode, R: Sequence[int]) -> LinearCode:
    """Puncture to the coordinates in R (0-based); the generator is reduced to a basis."""
    R = list(R)
    if not R:
        raise CodeError("projection onto an empty coordinate set")
    if any(not 0 <= t < code.n for t in R):
        raise CodeError("projection index out of range")
    G = linalg.row_basis(code.field, code.generator[:, R])
    return LinearCode(code.field, G, code.h)


def _subfield_rows_trace(code: LinearCode, h: int) -> np.ndarray:
    F = code.field
    rows = []
    for beta in relative_basis(F, h):
        rows.append(vtrace(F, h, F.vmul(beta, code.generator)))
    return np.vstack(rows)


def _frobenius_minus_identity(F: FieldSpec, h: int) -> np.ndarray:
    """Matrix over GF(p) of x -> x^(p^h) - x acting on polynomial-basis coordinates."""
    cols = []
    for b in range(F.l):
        x = F.p ** b
        cols.append(F.coeffs(F.sub(F.pow(x, F.p ** h), x)))
    return np.array(cols, dtype=np.int64).T


def _subfield_rows_intersection(code: LinearCode, h: int) -> np.ndarray:
    """Solve for GF(p)-combinations of beta_b * g_i that land in GF(p^h)^n."""
    F = code.field
    Fp = field_new(F.p, 1)
    k, n, l = code.k, code.n, F.l
    if k == 0:
        return np.zeros((0, n), dtype=np.int64)
    basis = [F.p ** b for b in range(l)]
    W = np.vstack([F.vmul(beta, code.generator[i]) for i in range(k) for beta in basis])  # (k*l, n)
    A = linalg.row_basis(Fp, _frobenius_minus_identity(F, h))  # (l-h, l)
    coords = F.vcoeffs(W)  # (k*l, n, l)
    if A.shape[0] == 0:
        return W
    # equations: for every coordinate t, A @ coords(c_t) = 0 with c = sum x_r W_r
    eq = np.einsum("al,rtl->tar", A, coords) % F.p
    M = eq.reshape(n * A.shape[0], k * l)
    X = linalg.nullspace(Fp, M)
    if X.shape[0] == 0:
        return np.zeros((0, n), dtype=np.int64)
    out = np.zeros((X.shape[0], n), dtype=np.int64)
    for r in range(k * l):
        coef = X[:, r]
        nz = np.nonzero(coef)[0]
        for c in range(1, F.p):
            sel = nz[coef[nz] == c]
            if sel.size:
                out[sel] = F.vadd(out[sel], F.vmul(c, W[r])[None, :])
    return out


def subfield_subcode(code: LinearCode, h: int, method: str = "trace") -> LinearCode:
    F = code.field
    if h < 1 or F.l % h:
        raise CodeError(f"h = {h} does not divide l = {F.l}")
    if code.h < F.l:
        raise CodeError("the code is already a subfield code; apply this to the parent code")
    if h == F.l:
        return LinearCode(F, code.generator.copy(), h, code.meta)
    if method == "trace":
        delta = code.meta.delta
        dom = code.meta.domain
        if delta is None or dom is None:
            raise CodeError("the trace method needs the exponent set to check closedness")
        g = dom.grid.with_ph(F.p ** h)
        if not is_closed(delta.on(g)):
            raise CodeError("the trace method requires a closed exponent set")
        rows = _subfield_rows_trace(code, h)
    elif method == "intersection":
        rows = _subfield_rows_intersection(code, h)
    else:
        raise CodeError(f"unknown method {method!r}")
    G = linalg.row_basis(F, rows) if rows.shape[0] else rows
    meta = CodeMeta(domain=code.meta.domain, delta=code.meta.delta, descriptor=code.meta.descriptor,
                    profile=code.meta.profile)
    return LinearCode(F, G, h, meta)


def code_from_construction(con: Construction, domain: EvaluationDomain | None = None) -> LinearCode:
    """Materialise a family instance: the MCC, then its subfield-subcode when h < l."""
    desc = con.descriptor
    F = field_new(desc.p, desc.l)
    grid = con.grid
    if domain is None:
        if desc.family in ("SF_BIV_Q1", "SF_BIV_Q2", "SF_MULT_Q1", "SF_MULT_Q2"):
            domain = build_domain(F, grid)
        else:
            try:
                domain = domain_for(F, grid.sizes)
            except CodeError:
                # no roots-of-unity layout for these sizes; any distinct points will do
                domain = explicit_domain(F, grid)
    code = mcc(F, delta=con.delta.on(domain.grid.with_ph(grid.ph)), domain=domain)
    code.meta.descriptor = desc
    code.meta.profile = con.profile
    if desc.h < desc.l:
        code = subfield_subcode(code, desc.h, "trace")
    return code


def as_subfield_symbols(code: LinearCode, v: Sequence[int]) -> bool:
    if code.h == code.field.l:
        return True
    return bool(np.all(vin_subfield(code.field, code.h, np.asarray(v, dtype=np.int64))))
