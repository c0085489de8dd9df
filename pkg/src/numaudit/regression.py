"""Least-squares kernels under audit, and the regression scoring pass.

Two solver paths with deliberately different numerical character share one
interface: ``orthogonal`` runs a Householder QR, ``normal_equations`` forms
the Gram matrix and factors it by Cholesky. On well-conditioned problems
they agree; on ill-conditioned polynomial designs the Gram matrix squares
the condition number, so the normal-equations path either loses roughly
twice as many digits or trips the rank gate outright. That contrast is the
point: both are kept naive, in plain double precision, because they stand
in for the solvers being audited, not for the certifying oracle
(:func:`numaudit.oracle.certify_regression`, which works in exact rational
arithmetic).

Rank deficiency is declared when a pivot or R-diagonal falls below
``1e-12`` times the largest one; the audit surfaces that as an NA score
rather than a crash.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .datasets import Dataset, design_matrix
from .metric import NA, LreScore, score
from .oracle import RankDeficientError, certify_regression

__all__ = [
    "LS_METHODS",
    "NORMAL_EQUATIONS",
    "ORTHOGONAL",
    "RANK_TOL",
    "RegressionResult",
    "audit_regression",
    "fit_ls",
]

NORMAL_EQUATIONS = "normal_equations"
ORTHOGONAL = "orthogonal"
LS_METHODS = (NORMAL_EQUATIONS, ORTHOGONAL)

# relative pivot / diagonal threshold for declaring rank deficiency
RANK_TOL = 1e-12


def _solve_householder(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Solve min ||Xb - y|| by Householder QR without pivoting."""
    A = X.copy()
    b = y.copy()
    n, p = A.shape
    col_norms = np.sqrt((X * X).sum(axis=0))
    for j in range(p):
        v = A[j:, j].copy()
        alpha = -math.copysign(np.linalg.norm(v), v[0] if v[0] != 0 else 1.0)
        v[0] -= alpha
        nv = np.linalg.norm(v)
        if nv == 0.0:
            continue  # column already zero below the diagonal
        v /= nv
        A[j:, j:] -= 2.0 * np.outer(v, v @ A[j:, j:])
        b[j:] -= 2.0 * v * (v @ b[j:])
    # |R_jj| / ||X[:,j]|| measures how much of column j survives
    # orthogonalization against its predecessors; a dependent column
    # leaves only rounding noise
    for j in range(p):
        if abs(A[j, j]) <= RANK_TOL * col_norms[j]:
            raise RankDeficientError(
                "R diagonal below rank threshold in Householder QR"
            )
    beta = np.zeros(p)
    for i in range(p - 1, -1, -1):
        beta[i] = (b[i] - A[i, i + 1:] @ beta[i + 1:]) / A[i, i]
    return beta


def _solve_normal_equations(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Solve via the Gram matrix and an unpivoted Cholesky factorization."""
    G = X.T @ X
    rhs = X.T @ y
    p = G.shape[0]
    scale = max(G[i, i] for i in range(p))
    L = np.zeros_like(G)
    for i in range(p):
        for j in range(i + 1):
            s = G[i, j] - L[i, :j] @ L[j, :j]
            if i == j:
                if s <= RANK_TOL * scale:
                    raise RankDeficientError(
                        "non-positive or negligible pivot in Cholesky of the Gram matrix"
                    )
                L[i, i] = math.sqrt(s)
            else:
                L[i, j] = s / L[j, j]
    z = np.zeros(p)
    for i in range(p):
        z[i] = (rhs[i] - L[i, :i] @ z[:i]) / L[i, i]
    beta = np.zeros(p)
    for i in range(p - 1, -1, -1):
        beta[i] = (z[i] - L[i + 1:, i] @ beta[i + 1:]) / L[i, i]
    return beta


def fit_ls(X, y, method: str = ORTHOGONAL) -> tuple[np.ndarray, float]:
    """Least-squares fit in plain double precision.

    Returns ``(beta, rsd)`` where rsd is the residual standard deviation
    sqrt(rss / (n - p)). Requires strictly more rows than parameters.
    Raises :class:`numaudit.oracle.RankDeficientError` when a pivot or
    R diagonal falls below RANK_TOL times the largest.
    """
    # packed copies: strided views would route BLAS reductions through a
    # different kernel and perturb the last bit, breaking layout
    # independence and the power-of-two scaling equivariance
    X = np.ascontiguousarray(X, dtype=float)
    y = np.ascontiguousarray(y, dtype=float)
    if X.ndim != 2:
        raise ValueError("X must be a 2-d design matrix")
    if y.ndim != 1 or y.shape[0] != X.shape[0]:
        raise ValueError("y must be a vector with one entry per row of X")
    n, p = X.shape
    if n <= p:
        raise ValueError(f"need more observations than parameters (n={n}, p={p})")
    if method == ORTHOGONAL:
        beta = _solve_householder(X, y)
    elif method == NORMAL_EQUATIONS:
        beta = _solve_normal_equations(X, y)
    else:
        raise ValueError(f"unknown least-squares method {method!r}")
    r = y - X @ beta
    rsd = math.sqrt((r @ r) / (n - p))
    return beta, rsd


@dataclass(frozen=True)
class RegressionResult:
    """Scored outcome of one regression audit.

    ``beta`` and ``rsd`` are the backend's estimates (None when the backend
    reported an error), ``beta_scores`` holds one LRE per coefficient, and
    ``min_beta_lre`` is the score of the worst coefficient. NA propagates:
    a failed fit yields NA scores, never a fabricated digit count.
    """

    dataset: str
    method: str
    beta: tuple[float, ...] | None
    rsd: float | None
    beta_scores: tuple[LreScore, ...] | None
    min_beta_lre: LreScore
    rsd_lre: LreScore
    error: str | None = None


def _na_score() -> LreScore:
    return score(math.nan, math.nan, backend_error=True)


def certified_coefficients(ds: Dataset) -> tuple[tuple[float, ...], float]:
    """Certified (beta, rsd) for a regression dataset.

    File-supplied certificates win; otherwise the exact rational oracle
    certifies on the spot.
    """
    model = ds.model
    if model is None:
        raise ValueError(f"dataset {ds.name!r} carries no regression model")
    if model.certified_beta is not None and model.certified_rsd is not None:
        return model.certified_beta, model.certified_rsd
    X = design_matrix(ds.x, model.degree, model.intercept)
    beta_dd, rsd_dd = certify_regression(X, ds.y)
    return tuple(float(b) for b in beta_dd), float(rsd_dd)


def audit_regression(ds: Dataset, backend, method: str = ORTHOGONAL) -> RegressionResult:
    """Run one backend fit against the certified coefficients and score it."""
    if method not in LS_METHODS:
        raise ValueError(f"unknown least-squares method {method!r}")
    cert_beta, cert_rsd = certified_coefficients(ds)
    model = ds.model
    res = backend.regress(ds.x, ds.y, model.degree, model.intercept, method)
    if res.error is not None:
        return RegressionResult(
            dataset=ds.name,
            method=method,
            beta=None,
            rsd=None,
            beta_scores=None,
            min_beta_lre=_na_score(),
            rsd_lre=_na_score(),
            error=res.error,
        )
    beta = tuple(float(b) for b in res.beta)
    if len(beta) != len(cert_beta):
        return RegressionResult(
            dataset=ds.name,
            method=method,
            beta=beta,
            rsd=res.rsd,
            beta_scores=None,
            min_beta_lre=_na_score(),
            rsd_lre=_na_score(),
            error=f"backend returned {len(beta)} coefficients, expected {len(cert_beta)}",
        )
    beta_scores = tuple(score(b, c) for b, c in zip(beta, cert_beta))
    if any(s.display.kind == NA for s in beta_scores):
        min_beta = _na_score()
    else:
        min_beta = min(beta_scores, key=lambda s: s.raw)
    rsd_val = math.nan if res.rsd is None else float(res.rsd)
    rsd_lre = score(rsd_val, cert_rsd, backend_error=res.rsd is None)
    return RegressionResult(
        dataset=ds.name,
        method=method,
        beta=beta,
        rsd=rsd_val if res.rsd is not None else None,
        beta_scores=beta_scores,
        min_beta_lre=min_beta,
        rsd_lre=rsd_lre,
    )
