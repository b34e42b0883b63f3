"""Recovery lines, exact (r, delta) certificates and erasure recovery.

A line for axis l is the set of coordinates whose points agree everywhere
except in axis l.  Coordinates are 0-based; axes are 1-based.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .code import EvaluationDomain, LinearCode
from .grid import K_j, supp_axis

ERASED = -1


class LocalityError(ValueError):
    pass


class TooManyErasures(LocalityError):
    pass


class InconsistentWord(LocalityError):
    pass


@dataclass(frozen=True)
class RecoveryStructure:
    axis: int
    sizes: tuple[int, ...]
    lines: tuple[tuple[int, ...], ...]

    def line_index(self, t: int) -> int:
        return int(_line_lookup(self)[t])


_LOOKUPS: dict[tuple, np.ndarray] = {}


def _line_lookup(rs: RecoveryStructure) -> np.ndarray:
    key = (rs.sizes, rs.axis)
    if key not in _LOOKUPS:
        out = np.empty(int(np.prod(rs.sizes)), dtype=np.int64)
        for i, line in enumerate(rs.lines):
            out[list(line)] = i
        _LOOKUPS[key] = out
    return _LOOKUPS[key]


def _check_axis(sizes: Sequence[int], l: int) -> None:
    if not 1 <= l <= len(sizes):
        raise LocalityError(f"axis {l} outside 1..{len(sizes)}")


def recovery_structure(sizes: Sequence[int], l: int) -> RecoveryStructure:
    sizes = tuple(sizes)
    _check_axis(sizes, l)
    idx = np.arange(int(np.prod(sizes))).reshape(sizes)
    lines = np.moveaxis(idx, l - 1, -1).reshape(-1, sizes[l - 1])
    return RecoveryStructure(l, sizes, tuple(tuple(int(t) for t in row) for row in lines))


def recovery_line(domain: EvaluationDomain, coordinate: int, l: int) -> tuple[int, ...]:
    sizes = domain.grid.sizes
    _check_axis(sizes, l)
    if not 0 <= coordinate < domain.n:
        raise LocalityError(f"coordinate {coordinate} outside 0..{domain.n - 1}")
    multi = list(np.unravel_index(coordinate, sizes))
    out = []
    for a in range(sizes[l - 1]):
        multi[l - 1] = a
        out.append(int(np.ravel_multi_index(multi, sizes)))
    return tuple(out)


@dataclass(frozen=True)
class LocalityCertificate:
    axis: int
    r: int
    delta: int
    per_line_distance: tuple[int, ...]
    projected_dim: int
    line_dims: tuple[int, ...]
    all_mds: bool

    def as_dict(self) -> dict:
        return {"axis": self.axis, "r": self.r, "delta": self.delta, "K": self.projected_dim,
                "all_mds": self.all_mds, "lines": len(self.per_line_distance)}


@dataclass
class _LineData:
    basis: np.ndarray  # row basis of the projected code
    parity: np.ndarray
    distance: int


class _AxisContext:
    """Per-code, per-axis cache: line geometry and projected codes."""

    def __init__(self, code: LinearCode, l: int, budget: int, dual_budget: int):
        from .verify import min_distance_exact

        dom, delta = _meta(code)
        F = code.field
        self.axis = l
        self.structure = recovery_structure(dom.grid.sizes, l)
        self.support = sorted(supp_axis(delta, l))
        self.K = len(self.support)
        self.points = np.asarray(dom.axis_points[l - 1], dtype=np.int64)
        self.vander = np.stack([F.vpow(self.points, a) for a in self.support], axis=1)  # (n_l, K)
        cache: dict[bytes, _LineData] = {}
        self.lines: list[_LineData] = []
        for line in self.structure.lines:
            B = linalg.row_basis(F, code.generator[:, list(line)])
            key = B.tobytes() + bytes(B.shape)
            if key not in cache:
                sub = LinearCode(F, B, code.h)
                d = min_distance_exact(sub, budget, dual_budget).value
                cache[key] = _LineData(B, linalg.nullspace(F, B), d)
            self.lines.append(cache[key])
        self.delta = min(x.distance for x in self.lines)


def _meta(code: LinearCode):
    dom, delta = code.meta.domain, code.meta.delta
    if dom is None or delta is None:
        raise LocalityError("locality needs a code built from a domain and an exponent set")
    return dom, delta


def _context(code: LinearCode, l: int, budget: int | None = None, dual_budget: int | None = None) -> _AxisContext:
    from .verify import DEFAULT_BUDGET_DUAL, DEFAULT_BUDGET_EXACT

    store = code.__dict__.setdefault("_axis_contexts", {})
    if l not in store:
        dom, delta = _meta(code)
        _check_axis(dom.grid.sizes, l)
        n_l = dom.grid.sizes[l - 1]
        if K_j(delta, l) >= n_l:
            raise LocalityError(f"axis {l}: K_l = {K_j(delta, l)} equals n_l = {n_l}, so the lines carry no redundancy")
        store[l] = _AxisContext(code, l, budget or DEFAULT_BUDGET_EXACT, dual_budget or DEFAULT_BUDGET_DUAL)
    return store[l]


def certify_locality(code: LinearCode, l: int, budget: int | None = None,
                     dual_budget: int | None = None) -> LocalityCertificate:
    """Exact (r, delta) for the recovery lines of axis l.

    delta is the smallest exact distance among the projected line codes and
    r = n_l - delta + 1.
    """
    ctx = _context(code, l, budget, dual_budget)
    n_l = len(ctx.points)
    dists = tuple(x.distance for x in ctx.lines)
    dims = tuple(int(x.basis.shape[0]) for x in ctx.lines)
    mds = all(d == n_l - k + 1 for d, k in zip(dists, dims))
    return LocalityCertificate(l, n_l - ctx.delta + 1, ctx.delta, dists, ctx.K, dims, mds)


def qualifying_axes(code: LinearCode) -> list[int]:
    dom, delta = _meta(code)
    return [l for l in range(1, dom.m + 1) if K_j(delta, l) < dom.grid.sizes[l - 1]]


def _as_received(code: LinearCode, received) -> np.ndarray:
    out = np.empty(code.n, dtype=np.int64)
    if len(received) != code.n:
        raise LocalityError(f"received word has length {len(received)}, expected {code.n}")
    for t, x in enumerate(received):
        out[t] = ERASED if x is None or x == "?" or x == ERASED else int(x)
    if np.any(out >= code.field.q) or np.any(out < ERASED):
        raise LocalityError("received symbol outside the field")
    return out


def recover_line(code: LinearCode, received, line: int | Sequence[int], axis: int | None = None) -> np.ndarray:
    """Fill the erasures of one line; returns the full line in line order.

    line is either an index into the axis structure (axis required) or the
    explicit coordinate tuple of a line.
    """
    y = _as_received(code, received)
    if isinstance(line, (int, np.integer)):
        if axis is None:
            raise LocalityError("a line index needs its axis")
        ctx = _context(code, axis)
        li = int(line)
        coords = ctx.structure.lines[li]
    else:
        coords = tuple(int(t) for t in line)
        ctx, li = _find_line(code, coords, axis)
    return _recover(code, ctx, li, y[list(coords)])


def _find_line(code: LinearCode, coords: tuple[int, ...], axis: int | None):
    dom, _ = _meta(code)
    axes = [axis] if axis is not None else range(1, dom.m + 1)
    for l in axes:
        rs = recovery_structure(dom.grid.sizes, l)
        li = rs.line_index(coords[0])
        if rs.lines[li] == coords:
            return _context(code, l), li
    raise LocalityError("the coordinates do not form a recovery line")


def _recover(code: LinearCode, ctx: _AxisContext, li: int, vals: np.ndarray) -> np.ndarray:
    F = code.field
    er = np.nonzero(vals == ERASED)[0]
    ok = np.nonzero(vals != ERASED)[0]
    data = ctx.lines[li]
    if er.size > ctx.delta - 1:
        raise TooManyErasures(f"{er.size} erasures on a line of axis {ctx.axis}; at most {ctx.delta - 1} are recoverable")
    out = vals.copy()
    if er.size:
        A = ctx.vander[ok]
        filled = None
        if linalg.rank(F, A) == ctx.K:
            g = linalg.solve(F, A, vals[ok])
            if g is None:
                raise InconsistentWord(f"interpolation on a line of axis {ctx.axis} is inconsistent")
            filled = linalg.matmul(F, ctx.vander[er], g.reshape(-1, 1)).ravel()
        else:
            # too few usable points for the monomial basis: solve in the projected code
            x = linalg.solve(F, data.basis[:, ok].T, vals[ok])
            if x is None:
                raise InconsistentWord(f"the unerased symbols on a line of axis {ctx.axis} fit no codeword")
            filled = linalg.matmul(F, x.reshape(1, -1), data.basis[:, er]).ravel()
        out[er] = filled
    if data.parity.shape[0] and np.any(linalg.matmul(F, data.parity, out.reshape(-1, 1))):
        raise InconsistentWord(f"the line of axis {ctx.axis} is not in the projected code")
    return out


@dataclass
class RecoveryResult:
    ok: bool
    word: np.ndarray
    stuck: tuple[int, ...]
    inconsistent_lines: tuple[tuple[int, int], ...] = ()
    rounds: int = 0

    def report(self) -> str:
        if self.ok:
            return f"recovered in {self.rounds} round(s)"
        parts = []
        if self.stuck:
            parts.append("stuck coordinates: " + " ".join(map(str, self.stuck)))
        if self.inconsistent_lines:
            parts.append("inconsistent lines (axis, line): " + " ".join(f"({a},{i})" for a, i in self.inconsistent_lines))
        return "recovery failed; " + "; ".join(parts)


def recover_word(code: LinearCode, received, axes: Sequence[int] | None = None) -> RecoveryResult:
    """Sweep the lines of every qualifying axis in order until no line makes progress."""
    y = _as_received(code, received)
    axes = list(axes) if axes is not None else qualifying_axes(code)
    bad: set[tuple[int, int]] = set()
    rounds = 0
    while True:
        progress = False
        rounds += 1
        for l in axes:
            ctx = _context(code, l)
            for li, line in enumerate(ctx.structure.lines):
                idx = list(line)
                vals = y[idx]
                if not np.any(vals == ERASED) or (l, li) in bad:
                    continue
                try:
                    y[idx] = _recover(code, ctx, li, vals)
                    progress = True
                except TooManyErasures:
                    continue
                except InconsistentWord:
                    bad.add((l, li))
        if not progress:
            break
    stuck = tuple(int(t) for t in np.nonzero(y == ERASED)[0])
    ok = not stuck and not bad
    return RecoveryResult(ok, y, stuck, tuple(sorted(bad)), rounds)
