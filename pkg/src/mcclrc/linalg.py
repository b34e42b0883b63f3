"""Dense linear algebra over a FieldSpec.

Fields with at most 1024 elements go through the compiled table kernels;
larger ones fall back to vectorised numpy row operations.
"""
from __future__ import annotations

import numpy as np

from . import _kernels as K
from .galois import FieldSpec


def _tables(F: FieldSpec):
    add_t, mul_t = F.tables()
    if not hasattr(F, "_kernel_tables"):
        q = F.q
        a = np.arange(q, dtype=np.int64)
        neg = F.vneg(a)
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = F.vinv(a[1:])
        F._kernel_tables = (add_t.astype(np.int64), mul_t.astype(np.int64), neg, inv)
    return F._kernel_tables


def as_matrix(M) -> np.ndarray:
    A = np.array(M, dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(1, -1)
    return A


def rref(F: FieldSpec, M) -> tuple[np.ndarray, list[int]]:
    A = as_matrix(M).copy()
    if A.size == 0:
        return A, []
    if F.has_tables():
        add_t, mul_t, neg, inv = _tables(F)
        piv = K.rref_inplace(A, add_t, mul_t, neg, inv)
        return A, [int(c) for c in piv]
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        A[[r, piv]] = A[[piv, r]]
        A[r] = F.vmul(F.inv(int(A[r, c])), A[r])
        for i in np.nonzero(A[:, c])[0]:
            if i != r:
                A[i] = F.vsub(A[i], F.vmul(int(A[i, c]), A[r]))
        pivots.append(c)
        r += 1
    return A, pivots


def rank(F: FieldSpec, M) -> int:
    return len(rref(F, M)[1])


def row_basis(F: FieldSpec, M) -> np.ndarray:
    R, piv = rref(F, M)
    return R[: len(piv)]


def same_row_space(F: FieldSpec, A, B) -> bool:
    RA = row_basis(F, A)
    RB = row_basis(F, B)
    return RA.shape == RB.shape and bool(np.array_equal(RA, RB))


def nullspace(F: FieldSpec, M) -> np.ndarray:
    """Basis (as rows) of {x : M x = 0}."""
    A = as_matrix(M)
    cols = A.shape[1]
    R, piv = rref(F, A)
    free = [c for c in range(cols) if c not in set(piv)]
    N = np.zeros((len(free), cols), dtype=np.int64)
    for t, f in enumerate(free):
        N[t, f] = 1
        for i, pc in enumerate(piv):
            N[t, pc] = F.neg(int(R[i, f]))
    return N


def matmul(F: FieldSpec, A, B) -> np.ndarray:
    A = as_matrix(A)
    B = as_matrix(B)
    if A.shape[1] != B.shape[0]:
        raise ValueError("shape mismatch in matrix product")
    if F.has_tables():
        add_t, mul_t, _, _ = _tables(F)
        return K.matmul(A, B, add_t, mul_t)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for t in range(A.shape[1]):
        out = F.vadd(out, F.vmul(A[:, t:t + 1], B[t:t + 1, :]))
    return out


def solve(F: FieldSpec, A, b) -> np.ndarray | None:
    """One solution x of A x = b, or None when the system is inconsistent."""
    A = as_matrix(A)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    aug = np.hstack([A, b])
    R, piv = rref(F, aug)
    cols = A.shape[1]
    if piv and piv[-1] == cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, pc in enumerate(piv):
        x[pc] = R[i, cols]
    return x
