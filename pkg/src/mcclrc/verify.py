"""Independent oracles: exact minimum distance, MDS minors, Singleton-like
defect, weight distributions, footprint witnesses and the exhaustive search
over decreasing exponent sets."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb, prod
from typing import Any, Iterable, Sequence

import numpy as np

from . import _kernels as K
from . import linalg
from .code import EvaluationDomain, LinearCode, build_domain, evaluate_poly, explicit_domain, mcc
from .families import bivariate_predicted, lhs_defect
from .galois import FieldSpec, field_new
from .grid import DeltaSet, GridSpec, default_J, decreasing_sets_2d, exponent_distance, is_decreasing

DEFAULT_BUDGET_EXACT = 20_000_000
DEFAULT_BUDGET_MINORS = 1_000_000
DEFAULT_BUDGET_DUAL = 500_000_000


class BudgetExceeded(RuntimeError):
    pass


class VerifyError(ValueError):
    pass


@dataclass(frozen=True)
class DistanceResult:
    value: int
    method: str  # exhaustive | witness_plus_bound | sampled_upper_bound
    certificate: tuple[int, ...] | None = None
    route: str = ""

    @property
    def is_exact(self) -> bool:
        return self.method != "sampled_upper_bound"


def _kernel_args(code: LinearCode):
    F = code.field
    add_t, mul_t, neg, inv = linalg._tables(F)
    beta = np.asarray(code.scalar_basis(), dtype=np.int64)
    return F, add_t, mul_t, neg, inv, beta


def _basis(code: LinearCode) -> np.ndarray:
    G = linalg.row_basis(code.field, code.generator)
    if G.shape[0] != code.k:
        raise VerifyError("generator matrix is rank deficient")
    return G


def _enumerate_min(code: LinearCode, G: np.ndarray) -> DistanceResult:
    F, add_t, mul_t, _, _, beta = _kernel_args(code)
    w, vec = K.min_weight_gray(G, beta, F.p, add_t, mul_t, 0)
    return DistanceResult(int(w), "exhaustive", tuple(int(x) for x in vec), "enumeration")


def parity_check(code: LinearCode) -> np.ndarray:
    return linalg.nullspace(code.field, code.generator)


def _dual_min(code: LinearCode, node_budget: int) -> DistanceResult:
    F, add_t, mul_t, neg, inv, _ = _kernel_args(code)
    H = parity_check(code)
    n = code.n
    if H.shape[0] == 0:
        # the whole space: a unit vector has weight 1
        vec = [0] * n
        vec[0] = 1
        return DistanceResult(1, "exhaustive", tuple(vec), "dual")
    spent = 0
    for w in range(1, H.shape[0] + 2):
        status, chosen = K.dependent_subset(H, w, add_t, mul_t, neg, inv, max(node_budget - spent, 0))
        if status == -1:
            raise BudgetExceeded(f"dual search exceeded {node_budget} nodes at weight {w}")
        spent += comb(n, w)
        if status == 1:
            S = [int(c) for c in chosen]
            N = linalg.nullspace(F, H[:, S])
            vec = np.zeros(n, dtype=np.int64)
            vec[S] = N[0]
            return DistanceResult(w, "exhaustive", tuple(int(x) for x in vec), "dual")
    raise VerifyError("no dependent column set found; parity-check matrix is inconsistent")


def _dual_cost(n: int, k: int, w_cap: int) -> int:
    return sum(comb(n, w) for w in range(1, w_cap + 1)) * max(n - k, 1)


def min_distance_exact(code: LinearCode, budget: int = DEFAULT_BUDGET_EXACT,
                       dual_budget: int = DEFAULT_BUDGET_DUAL, d_hint: int | None = None) -> DistanceResult:
    """Exact minimum distance with a minimum-weight codeword.

    Enumerates one codeword per projective class when Q^k fits the budget;
    otherwise searches the smallest linearly dependent set of parity-check
    columns.  Both routes are exhaustive.  d_hint only orders the choice of
    route and never influences the result.
    """
    if code.k == 0:
        raise VerifyError("the zero code has no minimum distance")
    G = _basis(code)
    Q = code.alphabet
    n, k = code.n, code.k
    enum_cost = Q ** k // (Q - 1) * n if Q ** k <= budget else None
    cap = min(n - k + 1, d_hint) if d_hint else n - k + 1
    dual_cost = _dual_cost(n, k, cap)
    if enum_cost is not None and (enum_cost <= dual_cost or not code.field.has_tables()):
        return _enumerate_min(code, G)
    if not code.field.has_tables():
        raise BudgetExceeded(f"{Q}^{k} codewords exceed the budget {budget}")
    try:
        return _dual_min(code, dual_budget)
    except BudgetExceeded:
        if enum_cost is not None:
            return _enumerate_min(code, G)
        raise BudgetExceeded(f"{Q}^{k} codewords exceed the budget {budget} and the dual search "
                             f"exceeded {dual_budget} nodes") from None


def weight(v: Sequence[int]) -> int:
    return int(np.count_nonzero(np.asarray(v)))


def in_code(code: LinearCode, v: Sequence[int]) -> bool:
    v = np.asarray(v, dtype=np.int64).reshape(1, -1)
    return linalg.rank(code.field, np.vstack([code.generator, v])) == linalg.rank(code.field, code.generator)


def weight_distribution(code: LinearCode, budget: int = DEFAULT_BUDGET_EXACT) -> dict[int, int]:
    Q = code.alphabet
    if Q ** code.k > budget:
        raise BudgetExceeded(f"{Q}^{code.k} codewords exceed the budget {budget}")
    G = _basis(code)
    F, add_t, mul_t, _, _, beta = _kernel_args(code)
    hist = K.weight_histogram_gray(G, beta, F.p, add_t, mul_t)
    out = {0: 1}
    for w, c in enumerate(hist):
        if c:
            out[w] = out.get(w, 0) + int(c) * (Q - 1)
    return out


def sampled_min_weight(code: LinearCode, trials: int, seed: int = 0) -> DistanceResult:
    """Best weight among ``trials`` sampled nonzero codewords; an upper bound only.

    Samples are drawn from random information sets: after a random column
    permutation the generator is brought to systematic form and the sampled
    messages have at most three nonzero symbols on the information set, which
    is where low-weight words concentrate.
    """
    rng = np.random.default_rng(seed)
    F = code.field
    n, k = code.n, code.k
    if k == 0 or trials <= 0:
        return DistanceResult(n + 1, "sampled_upper_bound", None, "sampling")
    scal = np.asarray(code.scalars(), dtype=np.int64)
    nonzero = scal[scal != 0]
    G = _basis(code)
    best, best_vec = n + 1, None
    batch = 1024
    done = 0
    while done < trials:
        perm = rng.permutation(n)
        R, _ = linalg.rref(F, G[:, perm])
        b = min(batch, trials - done)
        # row i gets w_i random nonzero symbols; the first k rows are unit vectors
        w = rng.integers(2, min(3, k) + 1, size=b) if k > 1 else np.ones(b, dtype=np.int64)
        w[:min(b, k)] = 1
        rank_in_row = np.argsort(rng.random((b, k)), axis=1).argsort(axis=1)
        M = np.where(rank_in_row < w[:, None], nonzero[rng.integers(0, len(nonzero), size=(b, k))], 0)
        first = min(b, k)
        M[:first] = 0
        M[np.arange(first), rng.permutation(k)[:first]] = 1
        C = linalg.matmul(F, M, R)
        ws = np.count_nonzero(C, axis=1)
        i = int(np.argmin(ws))
        if ws[i] < best:
            best = int(ws[i])
            best_vec = np.empty(n, dtype=np.int64)
            best_vec[perm] = C[i]
        done += b
    cert = tuple(int(x) for x in best_vec) if best_vec is not None else None
    return DistanceResult(best, "sampled_upper_bound", cert, "sampling")


def is_mds(code: LinearCode, budget: int = DEFAULT_BUDGET_MINORS) -> bool:
    G = _basis(code)
    k, n = G.shape
    if comb(n, k) > budget:
        raise BudgetExceeded(f"C({n},{k}) = {comb(n, k)} minors exceed the budget {budget}")
    F = code.field
    if F.has_tables():
        add_t, mul_t, neg, inv = linalg._tables(F)
        status, _, _ = K.all_minors_nonzero(G, add_t, mul_t, neg, inv, budget)
        return status == 1
    from itertools import combinations
    return all(linalg.rank(F, G[:, list(S)]) == k for S in combinations(range(n), k))


def singleton_defect(n: int, k: int, d: int, r: int, delta: int) -> int:
    if min(n, k, d, r, delta) < 1:
        raise VerifyError("all parameters must be positive")
    return lhs_defect(n, k, d, r, delta)


def is_optimal(n: int, k: int, d: int, r: int, delta: int) -> bool:
    return singleton_defect(n, k, d, r, delta) == 0


def footprint_witness(domain: EvaluationDomain, delta: DeltaSet, e: Sequence[int]) -> np.ndarray:
    """Evaluate prod_j prod_{s<e_j} (X_j - beta_{j,s}) with beta the first points of each axis.

    The word vanishes exactly where some coordinate hits one of the chosen
    points, so its weight is prod (n_j - e_j)."""
    e = tuple(int(x) for x in e)
    if e not in delta:
        raise VerifyError(f"{e} is not in the exponent set")
    if not is_decreasing(delta):
        raise VerifyError("the footprint witness needs a decreasing exponent set")
    F = domain.field
    # expand the product as a polynomial: per axis a univariate coefficient list
    per_axis = []
    for j, x in enumerate(e):
        poly = [1]
        for s in range(x):
            root = domain.axis_points[j][s]
            nxt = [0] * (len(poly) + 1)
            for a, c in enumerate(poly):
                nxt[a + 1] = F.add(nxt[a + 1], c)
                nxt[a] = F.sub(nxt[a], F.mul(c, root))
            poly = nxt
        per_axis.append(poly)
    coeffs: dict[tuple[int, ...], int] = {}
    for combo in np.ndindex(*(len(p) for p in per_axis)):
        c = 1
        for j, a in enumerate(combo):
            c = F.mul(c, per_axis[j][a])
        if c:
            coeffs[tuple(int(a) for a in combo)] = c
    return evaluate_poly(domain, coeffs)


def search_domain(F: FieldSpec, n1: int, n2: int) -> EvaluationDomain:
    """A roots-of-unity domain when the sizes allow one, else the first field elements."""
    try:
        J = default_J((n1, n2), F.q)
        return build_domain(F, GridSpec((n1, n2), J))
    except ValueError:
        return explicit_domain(F, GridSpec((n1, n2)))


@dataclass
class SearchResult:
    q: int
    n1: int
    n2: int
    found: set[tuple[int, int, int, int, int]]
    predicted: set[tuple[int, int, int, int, int]]
    sets_checked: int
    distance_mismatches: list[tuple] = field(default_factory=list)

    @property
    def matches(self) -> bool:
        return self.found == self.predicted and not self.distance_mismatches


def exhaustive_decreasing_search(F: FieldSpec, n1: int, n2: int, budget: int = DEFAULT_BUDGET_EXACT,
                                 dual_budget: int = DEFAULT_BUDGET_DUAL) -> SearchResult:
    """Every decreasing exponent set on an n1 x n2 grid: exact distance,
    exact locality on both axes, and the tuples that meet the bound."""
    from .locality import certify_locality

    if max(n1, n2) > 6:
        raise VerifyError("the exhaustive search is limited to grids up to 6 x 6")
    dom = search_domain(F, n1, n2)
    found: set[tuple[int, int, int, int, int]] = set()
    bad = []
    count = 0
    for members in decreasing_sets_2d(n1, n2):
        count += 1
        D = DeltaSet(dom.grid, members)
        code = mcc(F, delta=D, domain=dom)
        d0 = min(exponent_distance(dom.grid, e) for e in members)
        res = min_distance_exact(code, budget, dual_budget, d_hint=d0)
        if res.value != d0:
            bad.append((tuple(sorted(members)), res.value, d0))
        for axis in (1, 2):
            try:
                cert = certify_locality(code, axis)
            except ValueError:
                continue
            tup = (code.n, code.k, res.value, cert.r, cert.delta)
            if lhs_defect(*tup) == 0:
                found.add(tup)
    return SearchResult(F.q, n1, n2, found, bivariate_predicted(n1, n2), count, bad)


@dataclass
class RecoveryStats:
    trials: int = 0
    recovered: int = 0
    wrong: int = 0
    capacity_declared: int = 0
    capacity_missed: int = 0
    detection_trials: int = 0
    detected: int = 0

    @property
    def failures(self) -> int:
        return self.wrong + self.capacity_missed + (self.detection_trials - self.detected)


def recovery_trials(code: LinearCode, axis: int, trials: int = 1000, seed: int = 0) -> RecoveryStats:
    """Random codewords against three erasure patterns on one random line each:
    at most delta-1 erasures (must recover), delta erasures (must refuse) and
    erasures plus one corrupted symbol with margin >= 2 (must detect)."""
    from . import locality as L

    rng = np.random.default_rng(seed)
    ctx = L._context(code, axis)
    F = code.field
    scal = np.asarray(code.scalars(), dtype=np.int64)
    msgs = scal[rng.integers(0, len(scal), size=(trials, code.k))]
    words = linalg.matmul(F, msgs, code.generator)
    lines = ctx.structure.lines
    n_l, dl = len(ctx.points), ctx.delta
    st = RecoveryStats(trials=trials)
    for t in range(trials):
        li = int(rng.integers(len(lines)))
        truth = words[t, list(lines[li])]
        e = int(rng.integers(0, dl))
        vals = truth.copy()
        vals[rng.choice(n_l, e, replace=False)] = L.ERASED
        try:
            out = L._recover(code, ctx, li, vals)
            if np.array_equal(out, truth):
                st.recovered += 1
            else:
                st.wrong += 1
        except L.LocalityError:
            st.wrong += 1
        vals = truth.copy()
        vals[rng.choice(n_l, dl, replace=False)] = L.ERASED
        try:
            L._recover(code, ctx, li, vals)
            st.capacity_missed += 1
        except L.TooManyErasures:
            st.capacity_declared += 1
        top = min(dl - 1, ctx.lines[li].distance - 2)
        if top >= 1:
            st.detection_trials += 1
            e = int(rng.integers(1, top + 1))
            pos = rng.choice(n_l, e + 1, replace=False)
            vals = truth.copy()
            vals[pos[:e]] = L.ERASED
            flip = int(pos[e])
            vals[flip] = F.add(int(vals[flip]), int(scal[1 + rng.integers(len(scal) - 1)]))
            try:
                L._recover(code, ctx, li, vals)
            except L.InconsistentWord:
                st.detected += 1
    return st


# report helpers

@dataclass
class Report:
    lines: list[str] = field(default_factory=list)
    passed: int = 0
    failed: int = 0
    skipped: int = 0

    def check(self, name: str, instance: str, ok: bool, details: str = "") -> bool:
        self.lines.append(f"CHECK {name} {instance} {'PASS' if ok else 'FAIL'} {details}".rstrip())
        if ok:
            self.passed += 1
        else:
            self.failed += 1
        return ok

    def skip(self, name: str, instance: str, details: str) -> None:
        self.lines.append(f"CHECK {name} {instance} SKIP {details}")
        self.skipped += 1

    def summary(self) -> dict[str, Any]:
        return {"passed": self.passed, "failed": self.failed, "skipped": self.skipped}

    def render(self) -> str:
        return "\n".join(self.lines + ["SUMMARY " + json.dumps(self.summary(), sort_keys=True)])
