"""Bundled datasets, deterministic case grids, and a small text fixture format.

Three kinds of inputs live here:

* univariate and regression datasets, either generated in code with frozen
  recipes or loaded from ``.strd`` fixture files bundled with the package;
* the 2x2 near-singular determinant grid (240 cases);
* the bipartite-graph and distribution-table case lists.

The ``.strd`` format is a plain UTF-8 text file: ``key = value`` header
lines, a blank separator line, then one datum (or one ``x y`` pair) per
line. Certified values in headers are written with shortest round-trip
``repr`` so a save/load cycle is bit-exact.

Everything here is pure and reproducible: the same calls return the same
bits on every platform, which is what makes the audit scores comparable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Callable, Iterator

import numpy as np

from .oracle import DD, CertifiedStats, certify_regression, certify_stats

DIFFICULTIES = ("low", "average", "high")

GRAPH_FAMILIES = ("balanced", "skewed", "explicit")

DISTRIBUTION_FAMILIES = (
    "gamma_cdf",
    "binomial",
    "poisson_pmf",
    "poisson_cdf",
    "normal_quantile",
    "chi2_quantile",
    "beta_quantile",
    "t_quantile",
    "f_quantile",
)

# canonical audit order; stats suites run the first group, regression the second
STATS_DATASETS = (
    "pidigits",
    "lottery-synth",
    "lew-synth",
    "mavro-synth",
    "michelso-synth",
    "numacc1",
    "numacc2",
    "numacc3",
    "numacc4",
)

REGRESSION_DATASETS = (
    "norris-synth",
    "pontius-synth",
    "noint1-synth",
    "noint2-synth",
    "filip-synth",
    "wampler-synth",
)


@dataclass(frozen=True)
class RegressionModel:
    """Polynomial least-squares model attached to an x-y dataset.

    With an intercept the design columns are x^0 .. x^degree, without one
    they are x^1 .. x^degree. Certified values, when present, are the
    nearest doubles to the exact least-squares solution for the dataset's
    double-rounded x and y.
    """

    degree: int
    intercept: bool
    certified_beta: tuple[float, ...] | None = None
    certified_rsd: float | None = None

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise ValueError("polynomial degree must be >= 1")
        if self.certified_beta is not None and len(self.certified_beta) != self.n_params:
            raise ValueError(
                f"expected {self.n_params} certified coefficients, "
                f"got {len(self.certified_beta)}"
            )

    @property
    def n_params(self) -> int:
        return self.degree + 1 if self.intercept else self.degree


@dataclass(frozen=True, eq=False)
class Dataset:
    """One named dataset: a data vector plus optional certified values."""

    name: str
    difficulty: str
    data: np.ndarray
    certified: CertifiedStats | None = None
    model: RegressionModel | None = None

    def __post_init__(self) -> None:
        if self.difficulty not in DIFFICULTIES:
            raise ValueError(f"difficulty must be one of {DIFFICULTIES}")
        if self.data.size == 0:
            raise ValueError("dataset has no data")
        if self.model is not None and (self.data.ndim != 2 or self.data.shape[1] != 2):
            raise ValueError("a regression model requires x-y pair data")
        if self.model is None and self.data.ndim != 1:
            raise ValueError("univariate data must be one-dimensional")
        self.data.setflags(write=False)

    @property
    def n(self) -> int:
        return int(self.data.shape[0])

    @property
    def x(self) -> np.ndarray:
        if self.model is None:
            raise ValueError(f"{self.name} has no regression model")
        return self.data[:, 0]

    @property
    def y(self) -> np.ndarray:
        if self.model is None:
            raise ValueError(f"{self.name} has no regression model")
        return self.data[:, 1]


@dataclass(frozen=True)
class DetCase:
    """One cell of the near-singular determinant grid.

    The matrix [[b, b*eps], [s/eps, s]] has exact determinant zero for
    every (j, k) since b*eps * s/eps == b*s in exact arithmetic; only
    rounding in the stored entries and in the elimination makes computed
    determinants nonzero.
    """

    j: int
    k: int

    def __post_init__(self) -> None:
        if not 0 <= self.j <= 15:
            raise ValueError("j must be in 0..15")
        if not 1 <= self.k <= 15:
            raise ValueError("k must be in 1..15")

    @property
    def b(self) -> float:
        return 10.0 ** self.j

    @property
    def s(self) -> float:
        return 10.0 ** -self.j

    @property
    def epsilon(self) -> float:
        return 1.0 - 10.0 ** -self.k

    @property
    def case_index(self) -> int:
        """Position in the lexicographic (j, k) enumeration, 0-based."""
        return self.j * 15 + (self.k - 1)

    def matrix(self) -> np.ndarray:
        b, s, eps = self.b, self.s, self.epsilon
        return np.array([[b, b * eps], [s / eps, s]])


@dataclass(frozen=True)
class GraphSpec:
    """Complete bipartite graph K(m, n) with m <= n."""

    m: int
    n: int
    family: str = "explicit"

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < self.m:
            raise ValueError("need 1 <= m <= n")
        if self.family not in GRAPH_FAMILIES:
            raise ValueError(f"family must be one of {GRAPH_FAMILIES}")
        if self.family == "balanced" and self.n != self.m + 1:
            raise ValueError("balanced graphs have n == m + 1")
        if self.family == "skewed" and (self.m != 2 or self.n % 2 == 0):
            raise ValueError("skewed graphs have m == 2 and odd n")

    @classmethod
    def balanced(cls, m: int) -> "GraphSpec":
        return cls(m, m + 1, "balanced")

    @classmethod
    def skewed(cls, m: int) -> "GraphSpec":
        return cls(2, 2 * m - 1, "skewed")

    @property
    def dim(self) -> int:
        return self.m + self.n

    @property
    def label(self) -> str:
        return f"K({self.m},{self.n})"


@dataclass(frozen=True)
class DistributionCase:
    """One distribution-table row: a function, its parameters, one input,
    and the certified reference value for that input."""

    family: str
    params: tuple[tuple[str, float], ...]
    input: float
    certified: float

    def __post_init__(self) -> None:
        if self.family not in DISTRIBUTION_FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")

    def param_dict(self) -> dict[str, float]:
        return dict(self.params)

    @property
    def case_id(self) -> str:
        ps = ",".join(f"{k}={v!r}" for k, v in self.params)
        return f"{self.family}({ps})[{self.input!r}]"


# ---------------------------------------------------------------------------
# .strd fixture files


_SCALAR_KEYS = ("certified_mean", "certified_sd", "certified_autocorr", "certified_rsd")


def _parse_float(name: str, token: str, where: str) -> float:
    try:
        v = float(token)
    except ValueError:
        raise ValueError(f"{where}: non-numeric value for {name}: {token!r}") from None
    if not math.isfinite(v):
        raise ValueError(f"{where}: non-finite value for {name}: {token!r}")
    return v


def load_strd(path: str | Path) -> Dataset:
    """Parse one ``.strd`` fixture file.

    Errors name the offending 1-based line number. Values survive a
    save/load cycle bit-exactly because both sides use shortest
    round-trip decimal strings.
    """
    p = Path(path)
    lines = p.read_text(encoding="utf-8").split("\n")
    if lines and lines[-1] == "":
        lines.pop()  # artifact of the trailing newline, not a blank line

    sep = next((i for i, line in enumerate(lines) if line.strip() == ""), None)
    if sep is None:
        raise ValueError(f"{p.name}: missing blank separator line before data")

    header: dict[str, tuple[str, int]] = {}
    for i in range(sep):
        lineno = i + 1
        line = lines[i]
        if "=" not in line:
            raise ValueError(f"{p.name}:{lineno}: malformed header line {line.strip()!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key in header:
            raise ValueError(f"{p.name}:{lineno}: duplicate header key {key!r}")
        known = key in ("name", "difficulty", "model") or key in _SCALAR_KEYS
        if not known and not _is_beta_key(key):
            raise ValueError(f"{p.name}:{lineno}: unknown header key {key!r}")
        header[key] = (value, lineno)

    end = len(lines)
    while end > sep + 1 and lines[end - 1].strip() == "":
        end -= 1

    rows: list[list[float]] = []
    width = None
    for i in range(sep + 1, end):
        lineno = i + 1
        tokens = lines[i].split()
        if not tokens:
            raise ValueError(f"{p.name}:{lineno}: blank line inside data section")
        if width is None:
            if len(tokens) not in (1, 2):
                raise ValueError(f"{p.name}:{lineno}: expected 1 or 2 columns")
            width = len(tokens)
        elif len(tokens) != width:
            raise ValueError(f"{p.name}:{lineno}: expected {width} columns, got {len(tokens)}")
        try:
            vals = [float(t) for t in tokens]
        except ValueError:
            raise ValueError(f"{p.name}:{lineno}: non-numeric datum {lines[i].strip()!r}") from None
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"{p.name}:{lineno}: non-finite datum")
        rows.append(vals)
    if not rows:
        raise ValueError(f"{p.name}: empty data section")

    for req in ("name", "difficulty"):
        if req not in header:
            raise ValueError(f"{p.name}: missing required header key {req!r}")
    name = header["name"][0]
    difficulty = header["difficulty"][0]

    model = _parse_model(header, p.name)
    if model is not None and width != 2:
        raise ValueError(f"{p.name}: model requires x-y pair data")
    if model is None and width == 2:
        raise ValueError(f"{p.name}: x-y pair data requires a model line")

    certified = None
    has_mean = "certified_mean" in header
    has_sd = "certified_sd" in header
    if has_mean != has_sd:
        raise ValueError(f"{p.name}: certified_mean and certified_sd must appear together")
    if has_mean:
        mean = _parse_float("certified_mean", *_at(header, "certified_mean", p.name))
        sd = _parse_float("certified_sd", *_at(header, "certified_sd", p.name))
        autocorr = None
        if "certified_autocorr" in header:
            autocorr = DD(_parse_float("certified_autocorr", *_at(header, "certified_autocorr", p.name)))
        certified = CertifiedStats(mean=DD(mean), stddev=DD(sd), autocorr_r1=autocorr, n=len(rows))
    elif "certified_autocorr" in header:
        raise ValueError(f"{p.name}: certified_autocorr requires certified_mean and certified_sd")

    data = np.array([r[0] for r in rows]) if width == 1 else np.array(rows)
    return Dataset(name=name, difficulty=difficulty, data=data, certified=certified, model=model)


def _at(header: dict[str, tuple[str, int]], key: str, fname: str) -> tuple[str, str]:
    value, lineno = header[key]
    return value, f"{fname}:{lineno}"


def _is_beta_key(key: str) -> bool:
    prefix = "certified_beta_"
    return key.startswith(prefix) and key[len(prefix):].isdigit()


def _parse_model(header: dict[str, tuple[str, int]], fname: str) -> RegressionModel | None:
    beta_keys = sorted(
        (int(k.rsplit("_", 1)[1]), k) for k in header if _is_beta_key(k)
    )
    if "model" not in header:
        if beta_keys or "certified_rsd" in header:
            raise ValueError(f"{fname}: certified regression values require a model line")
        return None

    value, lineno = header["model"]
    tokens = value.split()
    ok = (
        len(tokens) == 3
        and tokens[0] == "polynomial"
        and tokens[1].isdigit()
        and tokens[2] in ("intercept", "nointercept")
    )
    if not ok:
        raise ValueError(
            f"{fname}:{lineno}: model line must be "
            f"'polynomial <degree> intercept|nointercept', got {value!r}"
        )
    degree = int(tokens[1])
    intercept = tokens[2] == "intercept"

    beta = None
    if beta_keys:
        indices = [i for i, _ in beta_keys]
        if indices != list(range(len(indices))):
            raise ValueError(f"{fname}: certified_beta_i indices must be contiguous from 0")
        beta = tuple(
            _parse_float(k, *_at(header, k, fname)) for _, k in beta_keys
        )
    rsd = None
    if "certified_rsd" in header:
        rsd = _parse_float("certified_rsd", *_at(header, "certified_rsd", fname))

    return RegressionModel(degree=degree, intercept=intercept, certified_beta=beta, certified_rsd=rsd)


def save_strd(dataset: Dataset, path: str | Path) -> None:
    """Write a dataset in the ``.strd`` format (UTF-8, LF line endings)."""
    out = [f"name = {dataset.name}", f"difficulty = {dataset.difficulty}"]
    cert = dataset.certified
    if cert is not None:
        out.append(f"certified_mean = {cert.mean.hi!r}")
        out.append(f"certified_sd = {cert.stddev.hi!r}")
        if cert.autocorr_r1 is not None:
            out.append(f"certified_autocorr = {cert.autocorr_r1.hi!r}")
    model = dataset.model
    if model is not None:
        kind = "intercept" if model.intercept else "nointercept"
        out.append(f"model = polynomial {model.degree} {kind}")
        if model.certified_beta is not None:
            for i, b in enumerate(model.certified_beta):
                out.append(f"certified_beta_{i} = {b!r}")
        if model.certified_rsd is not None:
            out.append(f"certified_rsd = {model.certified_rsd!r}")
    out.append("")
    if dataset.data.ndim == 1:
        out.extend(repr(float(v)) for v in dataset.data)
    else:
        out.extend(f"{float(xv)!r} {float(yv)!r}" for xv, yv in dataset.data)
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# case grids


def det_cases() -> tuple[DetCase, ...]:
    """All 240 determinant grid cases, lexicographic in (j, k).

    Note: b * s rounds to 1.0 for every j except j = 11, where the nearest
    double to 1e-11 makes the product come out one ulp below 1.0.
    """
    return tuple(DetCase(j, k) for j in range(16) for k in range(1, 16))


def graph_cases() -> tuple[GraphSpec, ...]:
    """The audited complete bipartite graphs, balanced then skewed."""
    return (
        GraphSpec.balanced(9),
        GraphSpec.balanced(99),
        GraphSpec.balanced(999),
        GraphSpec.skewed(9),
        GraphSpec.skewed(99),
        GraphSpec.skewed(999),
    )


# distribution reference rows; references are certified to the digits shown
_GAMMA_CDF_ROWS = (
    # (x, alpha), scale beta = 1
    (0.1, 0.1, 8.27552e-01),
    (0.2, 0.1, 8.79420e-01),
    (0.2, 0.2, 7.64435e-01),
    (0.4, 0.3, 7.76381e-01),
    (0.5, 0.4, 7.48019e-01),
)

_BINOM_CDF_ROWS = (
    # k for n=1030, p=1/2
    (1, 8.96114e-308),
    (2, 4.61499e-305),
    (100, 1.39413e-169),
    (300, 2.91621e-42),
    (400, 3.89735e-13),
    (410, 3.19438e-11),
)

_POISSON_PMF_ROWS = (
    # k for lambda=200
    (0, 1.38390e-87),
    (103, 1.41720e-14),
    (315, 1.41948e-14),
    (400, 5.58069e-36),
    (900, 1.73230e-286),
)

_POISSON_CDF_ROWS = (
    # k with lambda = k
    (10**5, 0.500841),
    (10**7, 0.500084),
    (10**9, 0.500008),
)

_NORMAL_QUANTILE_ROWS = (
    (0.5, 0.0),
    (1e-198, -30.0529),
    (1e-300, -37.0471),
)

_CHI2_QUANTILE_ROWS = (
    # (p_upper, df)
    (2e-1, 1.0, 1.64237),
    (1e-7, 1.0, 28.3740),
    (1e-7, 5.0, 40.8630),
    (1e-12, 1.0, 50.8441),
    (0.48, 778.0, 779.312),
    (0.52, 782.0, 779.353),
)

_BETA_QUANTILE_ROWS = (
    # p for alpha=5, beta=2
    (1e-2, 2.94314e-01),
    (1e-3, 1.81386e-01),
    (1e-4, 1.12969e-01),
    (1e-5, 7.07371e-02),
    (1e-6, 4.44270e-02),
    (1e-7, 2.79523e-02),
    (1e-8, 1.76057e-02),
    (1e-9, 1.10963e-02),
    (1e-10, 6.99645e-03),
    (1e-11, 4.41255e-03),
    (1e-12, 2.78337e-03),
    (1e-13, 1.75589e-03),
    (1e-100, 6.98827e-21),
)

_T_QUANTILE_ROWS = (
    # p_upper for df=1
    (1e-8, 3.18310e07),
    (1e-11, 3.18310e10),
    (1e-12, 3.18310e11),
    (1e-13, 3.18310e12),
    (1e-100, 3.18310e99),
)

_F_QUANTILE_ROWS = (
    # p_upper for d1=d2=1
    (1e-5, 4.05285e09),
    (1e-6, 4.05285e11),
    (1e-12, 4.05285e23),
    (1e-13, 4.05285e25),
    (1e-100, 4.05285e199),
)


def distribution_cases() -> tuple[DistributionCase, ...]:
    """All distribution-table rows in canonical audit order."""
    cases: list[DistributionCase] = []
    for x, a, c in _GAMMA_CDF_ROWS:
        cases.append(DistributionCase("gamma_cdf", (("alpha", a), ("beta", 1.0)), x, c))
    for k, c in _BINOM_CDF_ROWS:
        cases.append(DistributionCase("binomial", (("n", 1030.0), ("p", 0.5)), float(k), c))
    for k, c in _POISSON_PMF_ROWS:
        cases.append(DistributionCase("poisson_pmf", (("lam", 200.0),), float(k), c))
    for k, c in _POISSON_CDF_ROWS:
        cases.append(DistributionCase("poisson_cdf", (("lam", float(k)),), float(k), c))
    for p, c in _NORMAL_QUANTILE_ROWS:
        cases.append(DistributionCase("normal_quantile", (("mu", 0.0), ("sigma", 1.0)), p, c))
    for p, df, c in _CHI2_QUANTILE_ROWS:
        cases.append(DistributionCase("chi2_quantile", (("df", df),), p, c))
    for p, c in _BETA_QUANTILE_ROWS:
        cases.append(DistributionCase("beta_quantile", (("a", 5.0), ("b", 2.0)), p, c))
    for p, c in _T_QUANTILE_ROWS:
        cases.append(DistributionCase("t_quantile", (("df", 1.0),), p, c))
    for p, c in _F_QUANTILE_ROWS:
        cases.append(DistributionCase("f_quantile", (("d1", 1.0), ("d2", 1.0)), p, c))
    return tuple(cases)


# ---------------------------------------------------------------------------
# bundled dataset builders


def design_matrix(x: np.ndarray, degree: int, intercept: bool) -> np.ndarray:
    """Polynomial power basis, columns x^0.. or x^1.. depending on intercept.

    Powers use bare ** so the certifier and the audited fitting kernels
    see bit-identical design matrices.
    """
    lo = 0 if intercept else 1
    return np.array([[xv**d for d in range(lo, degree + 1)] for xv in np.asarray(x, float)])


def _lcg(seed: int) -> Iterator[int]:
    # 48-bit LCG (drand48 multiplier family); frozen so bundled data never drifts
    state = seed & 0xFFFFFFFFFFFF
    while True:
        state = (25214903917 * state + 11) & 0xFFFFFFFFFFFF
        yield state >> 16


def _alternating(mid: str, lo: str, hi: str) -> np.ndarray:
    return np.array([float(mid)] + [float(lo), float(hi)] * 500)


def _decimal_pattern_cert(mid: str) -> CertifiedStats:
    # closed forms for the [mid, lo, hi, lo, hi, ...] pattern with n = 1001:
    # mean = mid, sd = 0.1, r1 = -999/1000 exactly, all as decimal reals.
    # The data vector holds double-rounded copies of the decimals, so these
    # certified values sit a representation floor away from any statistic
    # computed on the stored doubles; that gap is what the audit measures.
    return CertifiedStats(
        mean=DD(float(mid)), stddev=DD(0.1), autocorr_r1=DD(-0.999), n=1001
    )


def _build_numacc1() -> Dataset:
    data = np.array([10000001.0, 10000003.0, 10000002.0])
    # deviations (-1, +1, 0): sd = 1, r1 = (-1 * 1 + 1 * 0) / 2 = -0.5
    cert = CertifiedStats(mean=DD(10000002.0), stddev=DD(1.0), autocorr_r1=DD(-0.5), n=3)
    return Dataset("numacc1", "average", data, certified=cert)


def _build_numacc2() -> Dataset:
    return Dataset("numacc2", "average", _alternating("1.2", "1.1", "1.3"),
                   certified=_decimal_pattern_cert("1.2"))


def _build_numacc3() -> Dataset:
    return Dataset("numacc3", "average", _alternating("1000000.2", "1000000.1", "1000000.3"),
                   certified=_decimal_pattern_cert("1000000.2"))


def _build_numacc4() -> Dataset:
    return Dataset("numacc4", "high", _alternating("10000000.2", "10000000.1", "10000000.3"),
                   certified=_decimal_pattern_cert("10000000.2"))


def _build_lottery() -> Dataset:
    g = _lcg(271828)
    data = np.array([float(4 + next(g) % 996) for _ in range(218)])
    return Dataset("lottery-synth", "low", data, certified=certify_stats(data))


def _build_lew() -> Dataset:
    g = _lcg(161803)
    data = np.array([float(-579 + next(g) % 880) for _ in range(200)])
    return Dataset("lew-synth", "low", data, certified=certify_stats(data))


def _build_mavro() -> Dataset:
    g = _lcg(314159)
    # 2.001953125 = 1025/512 and the offsets are multiples of 2^-18, so
    # every datum and every partial sum is exactly representable
    data = np.array([2.001953125 + (next(g) % 64) / 262144.0 for _ in range(50)])
    return Dataset("mavro-synth", "average", data, certified=certify_stats(data))


def _gen_michelso() -> Dataset:
    g = _lcg(20250814)
    # 299.75 + q/256 with q in -13..12: dyadic, exactly representable
    data = np.array([299.75 + ((next(g) % 26) - 13) / 256.0 for _ in range(100)])
    return Dataset("michelso-synth", "average", data, certified=certify_stats(data))


def _gen_norris() -> Dataset:
    g = _lcg(1994)
    x = np.array([10.0 * i for i in range(100)])
    y = np.array([1.0 + 2.0 * xv + ((next(g) % 200) - 100) * 0.01 for xv in x])
    beta, rsd = certify_regression(design_matrix(x, 1, True), y)
    model = RegressionModel(1, True, tuple(b.hi for b in beta), rsd.hi)
    return Dataset("norris-synth", "low", np.column_stack([x, y]), model=model)


def _build_pontius() -> Dataset:
    g = _lcg(1975)
    x = np.array([150000.0 * (i + 1) for i in range(40)])
    y = np.array([6.0e-4 + 7.0e-7 * xv + 2.0e-15 * xv * xv + ((next(g) % 100) - 50) * 1e-10
                  for xv in x])
    beta, rsd = certify_regression(design_matrix(x, 2, True), y)
    model = RegressionModel(2, True, tuple(b.hi for b in beta), rsd.hi)
    return Dataset("pontius-synth", "low", np.column_stack([x, y]), model=model)


def _build_noint1() -> Dataset:
    x = np.arange(60.0, 71.0)
    y = 2.0 * x
    # exact fit through the origin: beta = 2, rsd = 0
    model = RegressionModel(1, False, (2.0,), 0.0)
    return Dataset("noint1-synth", "average", np.column_stack([x, y]), model=model)


def _build_noint2() -> Dataset:
    x = np.array([1.0, 2.0, 3.0])
    y = np.array([3.0, 4.0, 4.0])
    beta, rsd = certify_regression(design_matrix(x, 1, False), y)
    model = RegressionModel(1, False, (beta[0].hi,), rsd.hi)
    return Dataset("noint2-synth", "average", np.column_stack([x, y]), model=model)


def _build_filip() -> Dataset:
    g = _lcg(8101)
    x = np.array([0.5 + i / 81.0 for i in range(82)])
    # degree-10 polynomial with all-ones coefficients plus a tiny dither
    # so the residual standard deviation is nonzero; condition ~6.5e9
    y = np.array([sum(xv**k for k in range(11)) + ((next(g) % 1000) - 500) * 1e-9 for xv in x])
    beta, rsd = certify_regression(design_matrix(x, 10, True), y)
    model = RegressionModel(10, True, tuple(b.hi for b in beta), rsd.hi)
    return Dataset("filip-synth", "high", np.column_stack([x, y]), model=model)


def _build_wampler() -> Dataset:
    x = np.arange(21.0)
    y = np.array([float(sum(int(xv) ** k for k in range(6))) for xv in x])
    # y is an exact integer polynomial with all-ones coefficients
    model = RegressionModel(5, True, (1.0,) * 6, 0.0)
    return Dataset("wampler-synth", "high", np.column_stack([x, y]), model=model)


_FILE_BUILTINS = ("pidigits", "michelso-synth", "norris-synth")

_BUILDERS: dict[str, Callable[[], Dataset]] = {
    "lottery-synth": _build_lottery,
    "lew-synth": _build_lew,
    "mavro-synth": _build_mavro,
    "numacc1": _build_numacc1,
    "numacc2": _build_numacc2,
    "numacc3": _build_numacc3,
    "numacc4": _build_numacc4,
    "norris-synth": _gen_norris,  # kept for fixture regeneration checks
    "pontius-synth": _build_pontius,
    "noint1-synth": _build_noint1,
    "noint2-synth": _build_noint2,
    "filip-synth": _build_filip,
    "wampler-synth": _build_wampler,
    "michelso-synth": _gen_michelso,  # kept for fixture regeneration checks
}


def builtin_names() -> tuple[str, ...]:
    return STATS_DATASETS + REGRESSION_DATASETS


@lru_cache(maxsize=None)
def load_builtin(name: str) -> Dataset:
    """Load a bundled dataset by name (cached; treat the result as read-only)."""
    if name in _FILE_BUILTINS:
        ref = resources.files("numaudit").joinpath("data", f"{name}.strd")
        with resources.as_file(ref) as p:
            ds = load_strd(p)
        if ds.name != name:
            raise ValueError(f"fixture {name}.strd declares name {ds.name!r}")
        return ds
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown builtin dataset {name!r}") from None


def resolve_dataset(spec: str) -> Dataset:
    """Resolve a CLI dataset argument: ``builtin:<name>`` or a file path."""
    if spec.startswith("builtin:"):
        return load_builtin(spec[len("builtin:"):])
    return load_strd(spec)
