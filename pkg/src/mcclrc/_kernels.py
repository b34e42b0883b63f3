"""Compiled inner loops over table-driven finite field arithmetic.

Every kernel takes the dense addition/multiplication tables plus negation and
inversion vectors, so it never needs to know which field it runs in.
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def rref_inplace(A, add_t, mul_t, neg_t, inv_t):
    """Reduced row echelon form in place; returns the pivot columns."""
    rows, cols = A.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for t in range(cols):
                tmp = A[r, t]
                A[r, t] = A[piv, t]
                A[piv, t] = tmp
        s = inv_t[A[r, c]]
        for t in range(c, cols):
            A[r, t] = mul_t[s, A[r, t]]
        for i in range(rows):
            if i != r and A[i, c] != 0:
                f = neg_t[A[i, c]]
                for t in range(c, cols):
                    if A[r, t] != 0:
                        A[i, t] = add_t[A[i, t], mul_t[f, A[r, t]]]
        pivots[r] = c
        r += 1
    return pivots[:r].copy()


@njit(cache=True)
def matmul(A, B, add_t, mul_t):
    n, k = A.shape
    m = B.shape[1]
    out = np.zeros((n, m), dtype=np.int64)
    for i in range(n):
        for t in range(k):
            a = A[i, t]
            if a == 0:
                continue
            for j in range(m):
                b = B[t, j]
                if b != 0:
                    out[i, j] = add_t[out[i, j], mul_t[a, b]]
    return out


@njit(cache=True)
def _valuation(s, p):
    v = 0
    while s % p == 0:
        s //= p
        v += 1
    return v


@njit(cache=True)
def _tail_vectors(G, beta, mul_t):
    k, n = G.shape
    h = beta.shape[0]
    V = np.zeros((k * h, n), dtype=np.int64)
    for j in range(k):
        for b in range(h):
            for t in range(n):
                V[j * h + b, t] = mul_t[beta[b], G[j, t]]
    return V


@njit(cache=True)
def min_weight_gray(G, beta, p, add_t, mul_t, stop_at):
    """Minimum weight over one representative per projective class.

    Codewords are G[i] + sum_{j>i} a_j G[j] with a_j in the subfield spanned
    over GF(p) by beta.  The tail coefficients run through a p-ary Gray code,
    so each step adds one precomputed vector.  Returns (weight, codeword).
    """
    k, n = G.shape
    h = beta.shape[0]
    V = _tail_vectors(G, beta, mul_t)
    best = n + 1
    best_vec = np.zeros(n, dtype=np.int64)
    cur = np.zeros(n, dtype=np.int64)
    for i in range(k):
        w = 0
        for t in range(n):
            cur[t] = G[i, t]
            if cur[t] != 0:
                w += 1
        if w < best:
            best = w
            best_vec[:] = cur
            if best <= stop_at:
                return best, best_vec
        D = (k - 1 - i) * h
        total = 1
        for _ in range(D):
            total *= p
        base = (i + 1) * h
        for s in range(1, total):
            d = base + _valuation(s, p)
            for t in range(n):
                old = cur[t]
                new = add_t[old, V[d, t]]
                cur[t] = new
                if old == 0:
                    if new != 0:
                        w += 1
                elif new == 0:
                    w -= 1
            if w < best:
                best = w
                best_vec[:] = cur
                if best <= stop_at:
                    return best, best_vec
    return best, best_vec


@njit(cache=True)
def weight_histogram_gray(G, beta, p, add_t, mul_t):
    """Projective weight histogram; multiply by (Q-1) for codeword counts."""
    k, n = G.shape
    h = beta.shape[0]
    V = _tail_vectors(G, beta, mul_t)
    hist = np.zeros(n + 1, dtype=np.int64)
    cur = np.zeros(n, dtype=np.int64)
    for i in range(k):
        w = 0
        for t in range(n):
            cur[t] = G[i, t]
            if cur[t] != 0:
                w += 1
        hist[w] += 1
        D = (k - 1 - i) * h
        total = 1
        for _ in range(D):
            total *= p
        base = (i + 1) * h
        for s in range(1, total):
            d = base + _valuation(s, p)
            for t in range(n):
                old = cur[t]
                new = add_t[old, V[d, t]]
                cur[t] = new
                if old == 0:
                    if new != 0:
                        w += 1
                elif new == 0:
                    w -= 1
            hist[w] += 1
    return hist


@njit(cache=True)
def dependent_subset(H, w, add_t, mul_t, neg_t, inv_t, node_budget):
    """Search for w columns of H that are linearly dependent.

    Depth-first over increasing column tuples.  Each stack level keeps every
    later column reduced modulo the span of the chosen ones, so a zero
    reduced column at level w-1 closes a dependent set.  Prefixes are always
    independent: a dependency among fewer columns would have been found at a
    smaller w.  Returns (status, chosen) with status 1 found, 0 none exist,
    -1 budget exhausted.
    """
    rows, n = H.shape
    chosen = np.full(w, -1, dtype=np.int64)
    if w == 0:
        return 0, chosen
    if w == 1:
        for c in range(n):
            z = True
            for r in range(rows):
                if H[r, c] != 0:
                    z = False
                    break
            if z:
                chosen[0] = c
                return 1, chosen
        return 0, chosen
    red = np.zeros((w, rows, n), dtype=np.int64)
    red[0, :, :] = H
    nxt = np.zeros(w, dtype=np.int64)
    depth = 0
    nxt[0] = 0
    nodes = 0
    while depth >= 0:
        c = nxt[depth]
        if c > n - (w - depth):
            depth -= 1
            if depth >= 0:
                nxt[depth] += 1
            continue
        # choose column c at this depth; its reduced vector must be nonzero
        piv = -1
        for r in range(rows):
            if red[depth, r, c] != 0:
                piv = r
                break
        if piv < 0:
            nxt[depth] += 1
            continue
        chosen[depth] = c
        nodes += n - c - 1
        if nodes > node_budget:
            return -1, chosen
        s = neg_t[mul_t[inv_t[red[depth, piv, c]], 1]]
        nd = depth + 1
        for j in range(c + 1, n):
            f = red[depth, piv, j]
            if f == 0:
                for r in range(rows):
                    red[nd, r, j] = red[depth, r, j]
            else:
                g = mul_t[s, f]
                for r in range(rows):
                    red[nd, r, j] = add_t[red[depth, r, j], mul_t[g, red[depth, r, c]]]
            if nd == w - 1:
                zero = True
                for r in range(rows):
                    if red[nd, r, j] != 0:
                        zero = False
                        break
                if zero:
                    chosen[nd] = j
                    return 1, chosen
        if nd == w - 1:
            nxt[depth] += 1
        else:
            depth = nd
            nxt[depth] = c + 1
    return 0, chosen


@njit(cache=True)
def all_minors_nonzero(G, add_t, mul_t, neg_t, inv_t, budget):
    """Check every k x k minor of the k x n matrix G for nonsingularity.

    Returns (status, checked, bad_subset): status 1 all nonzero, 0 a singular
    minor was found, -1 budget exhausted.
    """
    k, n = G.shape
    idx = np.arange(k)
    checked = 0
    M = np.zeros((k, k), dtype=np.int64)
    while True:
        if checked >= budget:
            return -1, checked, idx
        for i in range(k):
            for j in range(k):
                M[i, j] = G[i, idx[j]]
        piv = rref_inplace(M, add_t, mul_t, neg_t, inv_t)
        checked += 1
        if piv.shape[0] < k:
            return 0, checked, idx
        # next combination in lexicographic order
        pos = k - 1
        while pos >= 0 and idx[pos] == n - k + pos:
            pos -= 1
        if pos < 0:
            return 1, checked, idx
        idx[pos] += 1
        for j in range(pos + 1, k):
            idx[j] = idx[j - 1] + 1
