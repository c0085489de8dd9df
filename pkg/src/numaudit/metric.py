"""LRE scoring: number of matching significant decimal digits.

The log relative error of a computed value x against a certified value c is

    lre(x, c) = -log10(|x - c| / |c|)   if c != 0
    lre(x, 0) = -log10(|x|)

which is approximately the count of correct significant digits of x. Raw
scores are mapped onto display categories (a one-decimal value between 1.0
and 16.0, "0", "--", "Inf", or "NA") for reporting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Double precision carries at most ~16 significant decimal digits; raw
# scores above this are indistinguishable from exact.
LRE_CAP = 16.0

VALUE = "value"
ZERO = "zero"
DASH = "dash"
INF = "inf"
NA = "na"


@dataclass(frozen=True)
class Display:
    """Display category of an LRE score.

    kind is one of "value", "zero", "dash", "inf", "na"; value is set only
    for kind "value" and holds the truncated one-decimal score.
    """

    kind: str
    value: float | None = None

    def cell(self) -> str:
        """Table-cell text for this category."""
        if self.kind == VALUE:
            return f"{self.value:.1f}"
        return {ZERO: "0", DASH: "--", INF: "Inf", NA: "NA"}[self.kind]


@dataclass(frozen=True)
class LreScore:
    """A scored comparison of a computed value against a certified value."""

    raw: float
    display: Display
    computed: float
    certified: float


def lre(x: float, c: float) -> float:
    """Log relative error of x against certified c; +inf on exact agreement.

    Total over finite inputs. Can be negative (relative error above 1) and
    can exceed 16; callers decide how to cap. Non-finite inputs are a
    caller bug: NaN results must be routed through the backend-error path
    before scoring.
    """
    if math.isnan(x) or math.isnan(c) or math.isinf(x) or math.isinf(c):
        raise ValueError("lre requires finite inputs; non-finite values are backend errors")
    if c != 0.0:
        num = abs(x - c)
        if num == 0.0:
            return math.inf
        # num may overflow to inf for opposite-sign huge operands; log10(inf)
        # is inf and the score becomes -inf, which categorizes as "--".
        return -math.log10(num / abs(c))
    if x == 0.0:
        return math.inf
    return -math.log10(abs(x))


def categorize(raw: float, backend_error: bool = False) -> Display:
    """Map a raw LRE (or a backend failure) to its display category.

    NA if the backend errored; Inf on exact match or raw above the 16.0
    cap; "--" when the relative error exceeds 1 (raw < 0); "0" for raw in
    [0, 1); otherwise the raw truncated (not rounded) to one decimal.
    """
    if backend_error:
        return Display(NA)
    if raw == math.inf or raw > LRE_CAP:
        return Display(INF)
    if raw < 0.0:
        return Display(DASH)
    if raw < 1.0:
        return Display(ZERO)
    # truncation, never rounding: overstating accuracy is worse than
    # understating it
    truncated = math.floor(raw * 10.0) / 10.0
    return Display(VALUE, min(truncated, LRE_CAP))


def score(x: float, c: float, backend_error: bool = False) -> LreScore:
    """Score computed x against certified c, routing errors to NA."""
    if backend_error or math.isnan(x) or math.isinf(x):
        return LreScore(math.nan, Display(NA), x, c)
    raw = lre(x, c)
    return LreScore(raw, categorize(raw), x, c)


def lre_for_bootstrap(s: LreScore) -> float:
    """Collapse a score to the finite value used by the stability study.

    Inf maps to 16.0 (the highest accuracy double precision can express),
    Value keeps its untruncated raw, Zero and Dash clamp at 0 so stability
    estimates stay finite on adversarial resamples. NA cannot proceed.
    """
    kind = s.display.kind
    if kind == NA:
        raise ValueError("cannot bootstrap an NA score")
    if kind == INF:
        return LRE_CAP
    if kind == VALUE:
        return min(s.raw, LRE_CAP)
    # zero and dash
    return max(s.raw, 0.0)
