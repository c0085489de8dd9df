"""Determinant decision suite and complete-bipartite spectral audit.

Two families of known-answer problems live here. The determinant suite
feeds 240 exactly singular 2x2 matrices through an LU elimination and
records, per case, whether the computed determinant tests equal to zero;
the score for a backend is simply how many comparisons come out true.
The spectral suite builds Laplacians of complete bipartite graphs K(m,n),
whose spectrum is known in closed form (Bollobas: 0, then m with
multiplicity n-1, then n with multiplicity m-1, then m+n), runs a
symmetric eigensolver, and scores seven quantities against those
certified values.

Naming note: pct_N is the percentage of eigenvalues testing equal to m
(correct count n-1) and pct_M the percentage testing equal to n (correct
count m-1). The crossing is deliberate and kept consistent with the
report layout; the subscript names the multiplicity, not the value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .datasets import DetCase, GraphSpec, det_cases
from .distributions import ConvergenceError
from .metric import NA, LreScore, score

__all__ = [
    "DOUBLE",
    "EQUALITY_POLICIES",
    "SINGLE",
    "DetDecision",
    "LaplacianMatrix",
    "SpectralCaseResult",
    "SpectralScore",
    "build_laplacian",
    "det_lu",
    "eig_sym",
    "run_det_suite",
    "run_spectral_case",
    "score_spectrum",
]

# dense symmetric matrix with zero row sums; diagonal holds vertex degrees
LaplacianMatrix = np.ndarray

SINGLE = "single"
DOUBLE = "double"
EQUALITY_POLICIES = (SINGLE, DOUBLE)

_SYMMETRY_TOL = 1e-12
_JACOBI_TOL_FACTOR = 1e-14
_JACOBI_MAX_SWEEPS = 100
_MAX_LAPLACIAN_DIM = 10_000


def det_lu(M) -> float:
    """2x2 determinant via LU elimination with partial pivoting.

    Pivots by swapping rows when |a21| > |a11|, then eliminates with a
    reciprocal multiply (the form scaled LU kernels use); the
    divide-then-multiply variant rounds differently and flips a couple of
    dozen decisions across the 240-case grid. A zero pivot after pivoting
    means a zero column, so the determinant is exactly 0.
    """
    a = np.asarray(M, dtype=float)
    if a.shape != (2, 2):
        raise ValueError("det_lu takes a 2x2 matrix")
    a11, a12 = a[0, 0], a[0, 1]
    a21, a22 = a[1, 0], a[1, 1]
    sign = 1.0
    if abs(a21) > abs(a11):
        a11, a12, a21, a22 = a21, a22, a11, a12
        sign = -1.0
    if a11 == 0.0:
        return 0.0
    l21 = a21 * (1.0 / a11)
    return sign * (a11 * (a22 - l21 * a12))


@dataclass(frozen=True)
class DetDecision:
    """Outcome of one singular-determinant comparison.

    decided_zero records the literal ``computed_det == 0.0`` test; both
    fields are None when the backend errored (the case is excluded from
    the correct count and reported).
    """

    case: DetCase
    computed_det: float | None
    decided_zero: bool | None
    error: str | None = None

    def __post_init__(self) -> None:
        if self.error is None:
            if self.computed_det is None or self.decided_zero is None:
                raise ValueError("successful decision needs a determinant value")
            if self.decided_zero != (self.computed_det == 0.0):
                raise ValueError("decided_zero must mirror computed_det == 0.0")
        elif self.computed_det is not None or self.decided_zero is not None:
            raise ValueError("errored decision carries no determinant value")


def run_det_suite(backend) -> tuple[list[DetDecision], int]:
    """Evaluate all 240 grid cases on a backend and count zero decisions.

    Every matrix in the grid is exactly singular, so decided_zero is the
    correct answer and correct_count is the number of cases deciding it.
    Backend errors exclude a case from the count but keep it in the list.
    """
    decisions: list[DetDecision] = []
    correct = 0
    for case in det_cases():
        res = backend.det(case.matrix())
        if res.error is not None:
            decisions.append(DetDecision(case, None, None, res.error))
            continue
        value = float(res.value)
        decided = value == 0.0
        decisions.append(DetDecision(case, value, decided))
        if decided:
            correct += 1
    return decisions, correct


def build_laplacian(spec: GraphSpec) -> LaplacianMatrix:
    """Dense Laplacian D - A of the complete bipartite graph K(m,n).

    First m diagonal entries are n, the remaining n are m; off-diagonal
    blocks are -1 where an edge joins the two sides. All entries are
    small integers, hence exact in double precision.
    """
    m, n = spec.m, spec.n
    dim = m + n
    if dim > _MAX_LAPLACIAN_DIM:
        raise ValueError(f"Laplacian dimension {dim} exceeds cap {_MAX_LAPLACIAN_DIM}")
    L = np.zeros((dim, dim))
    L[:m, m:] = -1.0
    L[m:, :m] = -1.0
    idx = np.arange(dim)
    L[idx[:m], idx[:m]] = float(n)
    L[idx[m:], idx[m:]] = float(m)
    return L


@njit(cache=True)
def _jacobi_eigvals(A, tol_factor, max_sweeps):
    # cyclic two-sided Jacobi on a working copy; returns sorted
    # eigenvalues, sweep count, and a convergence flag
    n = A.shape[0]
    a = A.copy()
    fro = 0.0
    for i in range(n):
        for j in range(n):
            fro += a[i, j] * a[i, j]
    fro = np.sqrt(fro)
    thresh = tol_factor * fro
    sweeps = 0
    converged = False
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > off:
                    off = abs(a[p, q])
        if off < thresh:
            converged = True
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= thresh:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                tau = (aqq - app) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
    if not converged:
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > off:
                    off = abs(a[p, q])
        converged = off < thresh
    vals = np.empty(n)
    for i in range(n):
        vals[i] = a[i, i]
    return np.sort(vals), sweeps, converged


def eig_sym(M) -> np.ndarray:
    """Eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi.

    Rotations run in sweeps until every off-diagonal magnitude drops
    below 1e-14 times the Frobenius norm, at most 100 sweeps. Input must
    be square and symmetric within 1e-12 absolute.
    """
    A = np.ascontiguousarray(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise ValueError("eig_sym takes a nonempty square matrix")
    if float(np.abs(A - A.T).max()) > _SYMMETRY_TOL:
        raise ValueError(f"matrix is not symmetric within {_SYMMETRY_TOL:g} absolute")
    vals, _, ok = _jacobi_eigvals(A, _JACOBI_TOL_FACTOR, _JACOBI_MAX_SWEEPS)
    if not ok:
        raise ConvergenceError(
            f"Jacobi sweeps exhausted ({_JACOBI_MAX_SWEEPS}) before off-diagonal decay"
        )
    return vals


@dataclass(frozen=True)
class SpectralScore:
    """Seven scored quantities for one K(m,n) spectrum.

    l1 scores the smallest eigenvalue against 0, l_mn the largest against
    m+n, l_s the eigenvalue sum against 2mn. The sorted interior is
    assigned positionally: eigs[1..n-1] are certified m (l_m is the worst
    of them) and eigs[n..n+m-2] certified n (l_n likewise). pct_n and
    pct_m count equality tests over the whole spectrum, divided by the
    correct multiplicities n-1 and m-1; values above 100 are reported as
    is. Degenerate blocks (m = 1, or m = n = 1) score NA / None.
    """

    m: int
    n: int
    policy: str
    l1: LreScore
    l_mn: LreScore
    l_s: LreScore
    l_n: LreScore
    l_m: LreScore
    pct_n: float | None
    pct_m: float | None


def _na_score() -> LreScore:
    return score(math.nan, math.nan, backend_error=True)


def _min_score(block: np.ndarray, certified: float) -> LreScore:
    if block.size == 0:
        return _na_score()
    scores = [score(float(v), certified) for v in block]
    return min(scores, key=lambda s: s.raw)


def _equal_count(eigs: np.ndarray, value: float, policy: str) -> int:
    if policy == SINGLE:
        return int(np.count_nonzero(
            eigs.astype(np.float32) == np.float32(value)))
    return int(np.count_nonzero(eigs == value))


def score_spectrum(eigs, m: int, n: int, equality_policy: str = SINGLE) -> SpectralScore:
    """Score an ascending eigenvalue list against the K(m,n) closed form.

    The equality policy rounds both operands to nearest single precision
    before comparing (default) or compares doubles exactly; the exact
    test is kept to show how integer-eigenvalue checks collapse without
    rounding.
    """
    if equality_policy not in EQUALITY_POLICIES:
        raise ValueError(f"unknown equality policy {equality_policy!r}")
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    v = np.asarray(eigs, dtype=float)
    if v.ndim != 1 or v.size != m + n:
        raise ValueError(f"expected {m + n} eigenvalues, got shape {v.shape}")
    l1 = score(float(v[0]), 0.0)
    l_mn = score(float(v[-1]), float(m + n))
    # fsum: the sum is scored as a single quantity, so the auditor must
    # not inject its own rounding on top of the backend's
    l_s = score(math.fsum(v.tolist()), 2.0 * m * n)
    l_m = _min_score(v[1:n], float(m))
    l_n = _min_score(v[n:n + m - 1], float(n))
    pct_n = None
    if n > 1:
        pct_n = 100.0 * _equal_count(v, float(m), equality_policy) / (n - 1)
    pct_m = None
    if m > 1:
        pct_m = 100.0 * _equal_count(v, float(n), equality_policy) / (m - 1)
    return SpectralScore(
        m=m, n=n, policy=equality_policy,
        l1=l1, l_mn=l_mn, l_s=l_s, l_n=l_n, l_m=l_m,
        pct_n=pct_n, pct_m=pct_m,
    )


@dataclass(frozen=True)
class SpectralCaseResult:
    """One graph's audit outcome; score is None when the backend errored."""

    graph: GraphSpec
    score: SpectralScore | None
    error: str | None = None


def run_spectral_case(spec: GraphSpec, backend,
                      equality_policy: str = SINGLE) -> SpectralCaseResult:
    """Build the Laplacian, fetch the backend spectrum, and score it."""
    L = build_laplacian(spec)
    res = backend.eig_sym(L)
    if res.error is not None:
        return SpectralCaseResult(spec, None, res.error)
    sc = score_spectrum(res.values, spec.m, spec.n, equality_policy)
    return SpectralCaseResult(spec, sc)
