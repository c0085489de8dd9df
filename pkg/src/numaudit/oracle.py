"""Double-double arithmetic and certified reference values.

Certified statistics are produced with double-double (pairwise
compensated) arithmetic: an unevaluated sum of two doubles carrying
roughly 32 significant decimal digits. That is double the 16 digits being
scored, so certification error cannot move any LRE at the 0.1 display
granularity. Regression certificates go further and solve the normal
equations exactly in rational arithmetic, then round once to
double-double at the end.

The building blocks are the classical error-free transformations: Knuth
two-sum, Dekker split/two-product (splitter 2^27 + 1), and the qd-style
add/mul/div/sqrt compositions. Summations additionally exploit math.fsum,
which returns the correctly rounded sum of any iterable of doubles; feeding
the negated rounded sum back through fsum recovers the residual, giving the
exact sum as a double-double in two passes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1, Dekker splitting constant


def two_sum(a: float, b: float) -> tuple[float, float]:
    """Error-free sum: returns (s, e) with s = fl(a+b) and s + e = a + b exactly."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def quick_two_sum(a: float, b: float) -> tuple[float, float]:
    """Error-free sum assuming |a| >= |b|."""
    s = a + b
    e = b - (s - a)
    return s, e


def split(a: float) -> tuple[float, float]:
    """Dekker split of a into high and low 26-bit halves."""
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a: float, b: float) -> tuple[float, float]:
    """Error-free product: (p, e) with p = fl(a*b) and p + e = a*b exactly."""
    p = a * b
    ahi, alo = split(a)
    bhi, blo = split(b)
    e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, e


@dataclass(frozen=True)
class DD:
    """Unevaluated sum hi + lo of two doubles, |lo| <= ulp(hi)/2."""

    hi: float
    lo: float = 0.0

    def __float__(self) -> float:
        return self.hi + self.lo

    def is_zero(self) -> bool:
        return self.hi == 0.0 and self.lo == 0.0


def dd_add(a: DD, b: DD) -> DD:
    s, e = two_sum(a.hi, b.hi)
    t, f = two_sum(a.lo, b.lo)
    e += t
    s, e = quick_two_sum(s, e)
    e += f
    s, e = quick_two_sum(s, e)
    return DD(s, e)


def dd_neg(a: DD) -> DD:
    return DD(-a.hi, -a.lo)


def dd_sub(a: DD, b: DD) -> DD:
    return dd_add(a, dd_neg(b))


def dd_mul(a: DD, b: DD) -> DD:
    p, e = two_prod(a.hi, b.hi)
    e += a.hi * b.lo + a.lo * b.hi
    p, e = quick_two_sum(p, e)
    return DD(p, e)


def dd_div(a: DD, b: DD) -> DD:
    if b.hi == 0.0 and b.lo == 0.0:
        raise ZeroDivisionError("double-double division by zero")
    q1 = a.hi / b.hi
    r = dd_sub(a, dd_mul(b, DD(q1)))
    q2 = r.hi / b.hi
    r = dd_sub(r, dd_mul(b, DD(q2)))
    q3 = r.hi / b.hi
    s, e = quick_two_sum(q1, q2)
    s, e = quick_two_sum(s, e + q3)
    return DD(s, e)


def dd_sqrt(a: DD) -> DD:
    if a.hi < 0.0:
        raise ValueError("double-double sqrt of a negative value")
    if a.hi == 0.0 and a.lo == 0.0:
        return DD(0.0)
    s = math.sqrt(a.hi)
    # one Newton correction at double-double residual precision
    p, e = two_prod(s, s)
    r = dd_sub(a, DD(p, e))
    d = r.hi / (2.0 * s)
    s, e2 = quick_two_sum(s, d)
    return DD(s, e2)


def dd_sum_exact(values) -> DD:
    """Exact sum of a sequence of doubles as a double-double.

    math.fsum gives the correctly rounded sum; a second fsum over the
    values plus the negated rounded sum recovers the residual. The result
    represents the exact sum to well beyond 30 significant digits.
    """
    vals = list(values)
    hi = math.fsum(vals)
    lo = math.fsum(vals + [-hi])
    return DD(hi, lo)


def dd_from_fraction(value: Fraction) -> DD:
    """Correctly rounded double-double of an exact rational."""
    hi = float(value)
    lo = float(value - Fraction(hi))
    return DD(hi, lo)


# vectorized error-free transforms for bulk certification -----------------


def _v_two_sum(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def _v_quick_two_sum(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    s = a + b
    e = b - (s - a)
    return s, e


def _v_two_prod(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p = a * b
    t = _SPLITTER * a
    ahi = t - (t - a)
    alo = a - ahi
    t = _SPLITTER * b
    bhi = t - (t - b)
    blo = b - bhi
    e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, e


def _dd_exact_sum(arrays, scalars=()) -> DD:
    """Exact sum over a mix of double arrays and scalar doubles."""
    vals = np.concatenate(arrays).tolist()
    vals.extend(scalars)
    hi = math.fsum(vals)
    lo = math.fsum(vals + [-hi])
    return DD(hi, lo)


def _dd_pair_sum(hi: np.ndarray, lo: np.ndarray) -> DD:
    """Exact sum over a double-double array (hi_i + lo_i terms)."""
    return _dd_exact_sum([hi, lo])


def _triple_dot(a: np.ndarray, ae: np.ndarray, b: np.ndarray, be: np.ndarray,
                lo: float) -> DD:
    """Exact sum of (a_t + ae_t - lo)(b_t + be_t - lo) over t.

    Each factor is an exact triple. Every cross term goes through an
    error-free product, so fsum adds the exact expansion; nothing is
    rounded before the final two-pass summation. Keeping the terms exact
    matters when the sum cancels heavily, as the lag-1 autocorrelation
    numerator does on near-symmetric data.
    """
    m = a.size
    p1, q1 = _v_two_prod(a, b)
    p2, q2 = _v_two_prod(a, be)
    p3, q3 = _v_two_prod(ae, b)
    p4, q4 = _v_two_prod(ae, be)
    p5, q5 = _v_two_prod(a, lo)
    p6, q6 = _v_two_prod(ae, lo)
    p7, q7 = _v_two_prod(b, lo)
    p8, q8 = _v_two_prod(be, lo)
    c1, c2 = two_prod(lo, lo)
    d1, d2 = two_prod(c1, float(m))
    d3, d4 = two_prod(c2, float(m))
    return _dd_exact_sum(
        [p1, q1, p2, q2, p3, q3, p4, q4,
         -p5, -q5, -p6, -q6, -p7, -q7, -p8, -q8],
        [d1, d2, d3, d4],
    )


@dataclass(frozen=True)
class CertifiedStats:
    """Certified univariate statistics.

    autocorr_r1 uses the NIST StRD lag-1 definition: a single global mean
    and the denominator summed over all n centered squares. This differs
    from the Pearson correlation of the shifted subvectors that typical
    platform kernels compute; the systematic gap between the two
    definitions is part of what the stats audit measures.
    """

    mean: DD
    stddev: DD
    autocorr_r1: DD | None
    n: int


def certify_stats(data) -> CertifiedStats:
    """Certify mean, sample standard deviation, and lag-1 autocorrelation.

    The mean comes from the exact sum. Each deviation is kept as an exact
    triple (the error-free pair v - mean.hi plus the mean's low word),
    second-moment sums expand those triples through error-free products,
    and fsum adds the expansion exactly. The only roundings left are the
    double-double mean itself - whose error is common to all deviations
    and cancels to first order in centered sums - and the final
    quotients, so certified values track exact rational arithmetic to
    roughly 31 significant digits even when the autocorrelation numerator
    cancels by several orders of magnitude.
    """
    v = np.asarray(data, dtype=float)
    n = v.size
    if n < 2:
        raise ValueError("certify_stats needs at least 2 observations")
    mean = dd_div(dd_sum_exact(v.tolist()), DD(float(n)))

    s, e = _v_two_sum(v, np.full_like(v, -mean.hi))
    ss = _triple_dot(s, e, s, e, mean.lo)

    var = dd_div(ss, DD(float(n - 1)))
    stddev = dd_sqrt(var)

    autocorr = None
    if n >= 3 and not ss.is_zero():
        num = _triple_dot(s[:-1], e[:-1], s[1:], e[1:], mean.lo)
        autocorr = dd_div(num, ss)

    return CertifiedStats(mean=mean, stddev=stddev, autocorr_r1=autocorr, n=n)


class RankDeficientError(ValueError):
    """Raised when the certifier detects a rank-deficient design matrix."""


def certify_regression(X, y) -> tuple[list[DD], DD]:
    """Certify least-squares coefficients and residual standard deviation.

    Solves the normal equations X'X beta = X'y exactly: doubles are
    rationals, and with at most a dozen parameters the Gram matrix,
    right-hand side, square-root-free LDL' elimination, and residual sum
    of squares all fit comfortably in Fraction arithmetic. The returned
    coefficients are correctly rounded double-doubles no matter how
    ill-conditioned the design is, exactly representable solutions come
    out bit-exact, and a non-positive pivot is an exact witness of rank
    deficiency rather than a numerical guess. Returns (beta, rsd) with
    rsd = sqrt(sum r_i^2 / (n - p)).
    """
    Xa = np.asarray(X, dtype=float)
    ya = np.asarray(y, dtype=float)
    n, p = Xa.shape
    if n <= p:
        raise ValueError("need more observations than parameters")

    xq = [[Fraction(v) for v in row] for row in Xa.tolist()]
    yq = [Fraction(v) for v in ya.tolist()]
    A = [[sum(xq[t][i] * xq[t][j] for t in range(n)) for j in range(p)] for i in range(p)]
    b = [sum(xq[t][i] * yq[t] for t in range(n)) for i in range(p)]

    # unit lower triangle L and diagonal D of the exact Gram matrix
    L = [[Fraction(1) if i == j else Fraction(0) for j in range(p)] for i in range(p)]
    D = [Fraction(0)] * p
    for j in range(p):
        s = A[j][j] - sum(L[j][k] * L[j][k] * D[k] for k in range(j))
        if s <= 0:
            raise RankDeficientError("non-positive pivot in exact LDL' of the Gram matrix")
        D[j] = s
        for i in range(j + 1, p):
            t = A[i][j] - sum(L[i][k] * L[j][k] * D[k] for k in range(j))
            L[i][j] = t / D[j]

    z = [Fraction(0)] * p
    for i in range(p):
        z[i] = b[i] - sum(L[i][k] * z[k] for k in range(i))
    beta_q = [Fraction(0)] * p
    for i in range(p - 1, -1, -1):
        beta_q[i] = z[i] / D[i] - sum(L[k][i] * beta_q[k] for k in range(i + 1, p))

    rss = Fraction(0)
    for t in range(n):
        r = yq[t] - sum(xq[t][j] * beta_q[j] for j in range(p))
        rss += r * r

    beta = [dd_from_fraction(q) for q in beta_q]
    rsd = dd_sqrt(dd_from_fraction(rss / (n - p)))
    return beta, rsd
