"""Resampling stability study for the basic-statistics audit.

Each of B resamples draws n indices with replacement from the original
dataset, certifies the resampled vector with the double-double oracle,
scores the backend on it, and collapses the score to a finite LRE (Inf
maps to 16, the most digits a double can witness). The reported
stability is

    s_lre = sqrt( (1/(B-1)) * sum_r (LRE(r) - base_lre)^2 )

where base_lre is the ORIGINAL dataset's LRE, not the resample mean;
the deviation is measured from the one known reference point, so this
is deliberately not the textbook sample variance and must not be
"corrected".

Resampling is counter-based: index r draws from a Philox stream keyed by
(seed, r), so any resample can be generated independently of the others
and parallel evaluation cannot change the result. Aggregation walks
indexes in order and sums with fsum; worker count never affects a bit.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .datasets import Dataset
from .metric import NA, LreScore, lre_for_bootstrap, score
from .oracle import CertifiedStats, certify_stats

__all__ = [
    "STATISTICS",
    "BootstrapConfig",
    "StabilityResult",
    "certified_stat",
    "resample",
    "stability",
]

STATISTICS = ("mean", "std", "autocorr")

_CERT_ATTR = {"mean": "mean", "std": "stddev", "autocorr": "autocorr_r1"}


@dataclass(frozen=True)
class BootstrapConfig:
    """Resample count and RNG seed for one stability run.

    statistic may be fixed here or passed per call; when both are given
    they must agree.
    """

    resamples: int = 100
    seed: int = 0
    statistic: str | None = None

    def __post_init__(self) -> None:
        if self.resamples < 2:
            raise ValueError("need at least 2 resamples")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.statistic is not None and self.statistic not in STATISTICS:
            raise ValueError(f"unknown statistic {self.statistic!r}")


@dataclass(frozen=True)
class StabilityResult:
    """Stability estimate for one (dataset, statistic, backend) triple.

    lre_samples holds the collapsed LRE of each valid resample in index
    order; skipped lists (index, reason) pairs for resamples the backend
    or oracle could not handle.
    """

    base_lre: float
    lre_samples: tuple[float, ...]
    s_lre: float
    skipped: tuple[tuple[int, str], ...] = ()
    base_score: LreScore | None = None


def resample(data, seed: int, index: int) -> np.ndarray:
    """Draw len(data) elements with replacement, keyed by (seed, index).

    The Philox stream is constructed fresh from the pair, so resample r
    never depends on how many other resamples ran or in what order.
    """
    v = np.ascontiguousarray(data, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("resample takes a nonempty 1-d vector")
    gen = np.random.Generator(
        np.random.Philox(key=[np.uint64(seed), np.uint64(index)]))
    idx = gen.integers(0, v.size, size=v.size)
    return v[idx]


def certified_stat(ds: Dataset, statistic: str) -> float:
    """Certified value of one statistic: file certificate, else oracle."""
    if statistic not in STATISTICS:
        raise ValueError(f"unknown statistic {statistic!r}")
    attr = _CERT_ATTR[statistic]
    value = getattr(ds.certified, attr, None) if ds.certified else None
    if value is None:
        value = getattr(certify_stats(ds.data), attr)
    if value is None:
        raise ValueError(f"{statistic} of {ds.name!r} is not certifiable")
    return float(value)


def _backend_fn(backend, statistic: str):
    # statistic names coincide with Backend method names
    return getattr(backend, statistic)


def stability(ds: Dataset, statistic: str, backend,
              cfg: BootstrapConfig | None = None,
              jobs: int = 1) -> StabilityResult:
    """Run the resampling study for one statistic on one dataset."""
    cfg = cfg or BootstrapConfig()
    if statistic not in STATISTICS:
        raise ValueError(f"unknown statistic {statistic!r}")
    if cfg.statistic is not None and cfg.statistic != statistic:
        raise ValueError(
            f"config is pinned to {cfg.statistic!r}, asked for {statistic!r}")
    fn = _backend_fn(backend, statistic)
    attr = _CERT_ATTR[statistic]

    base_cert = certified_stat(ds, statistic)
    base_res = fn(ds.data)
    if base_res.error is not None:
        raise ValueError(
            f"backend cannot compute {statistic} on {ds.name!r}: {base_res.error}")
    base_score = score(base_res.value, base_cert)
    if base_score.display.kind == NA:
        raise ValueError(f"backend returned a non-finite {statistic} on {ds.name!r}")
    base = lre_for_bootstrap(base_score)

    def one(r: int) -> tuple[int, float | None, str | None]:
        sample = resample(ds.data, cfg.seed, r)
        cert: CertifiedStats = certify_stats(sample)
        c = getattr(cert, attr)
        if c is None:
            return r, None, f"oracle cannot certify {statistic} of resample {r}"
        res = fn(sample)
        if res.error is not None:
            return r, None, f"backend: {res.error}"
        sc = score(res.value, float(c))
        if sc.display.kind == NA:
            return r, None, "backend returned a non-finite value"
        return r, lre_for_bootstrap(sc), None

    indexes = range(cfg.resamples)
    if jobs <= 1:
        outcomes = [one(r) for r in indexes]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(one, indexes))

    samples: list[float] = []
    skipped: list[tuple[int, str]] = []
    for r, value, reason in outcomes:  # already in index order
        if value is None:
            skipped.append((r, reason))
        else:
            samples.append(value)
    if len(samples) < 2:
        raise ValueError(
            f"only {len(samples)} valid resamples for {statistic} on {ds.name!r}")
    dev = math.fsum((v - base) ** 2 for v in samples)
    s_lre = math.sqrt(dev / (len(samples) - 1))
    return StabilityResult(
        base_lre=base,
        lre_samples=tuple(samples),
        s_lre=s_lre,
        skipped=tuple(skipped),
        base_score=base_score,
    )
