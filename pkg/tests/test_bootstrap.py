"""Counter-based resampling and the LRE stability estimate."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from numaudit.backend import BackendResult, HostBackend
from numaudit.bootstrap import (
    STATISTICS,
    BootstrapConfig,
    StabilityResult,
    certified_stat,
    resample,
    stability,
)
from numaudit.datasets import Dataset, load_builtin


def make_dataset(values, name="synthetic"):
    return Dataset(name=name, difficulty="low", data=np.asarray(values, float))


class TestBootstrapConfig:
    def test_defaults(self):
        cfg = BootstrapConfig()
        assert cfg.resamples == 100 and cfg.seed == 0 and cfg.statistic is None

    def test_rejects_tiny_resamples(self):
        with pytest.raises(ValueError, match="at least 2"):
            BootstrapConfig(resamples=1)

    def test_rejects_seed_out_of_range(self):
        with pytest.raises(ValueError, match="64"):
            BootstrapConfig(seed=-1)
        with pytest.raises(ValueError, match="64"):
            BootstrapConfig(seed=2 ** 64)
        BootstrapConfig(seed=2 ** 64 - 1)

    def test_rejects_unknown_statistic(self):
        with pytest.raises(ValueError, match="unknown statistic"):
            BootstrapConfig(statistic="median")


class TestResample:
    def test_length_one_is_identity(self):
        out = resample([42.0], seed=9, index=3)
        assert out.tolist() == [42.0]

    def test_same_key_bit_identical(self):
        data = np.linspace(0.0, 1.0, 37)
        a = resample(data, seed=5, index=11)
        b = resample(data, seed=5, index=11)
        assert np.array_equal(a, b)

    def test_different_index_differs(self):
        data = np.arange(32.0)
        a = resample(data, seed=0, index=0)
        b = resample(data, seed=0, index=1)
        assert not np.array_equal(a, b)

    def test_rejects_empty(self):
        with pytest.raises(ValueError, match="nonempty"):
            resample([], seed=0, index=0)

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(allow_nan=False, allow_infinity=False),
                    min_size=1, max_size=40),
           st.integers(0, 2 ** 64 - 1), st.integers(0, 2 ** 32))
    def test_draws_are_from_the_data(self, values, seed, index):
        out = resample(values, seed, index)
        assert out.shape == (len(values),)
        assert np.isin(out, np.asarray(values)).all()

    def test_index_uniformity(self):
        # 1e6 total draws across 1e5 keyed streams; each of the 10
        # values should appear within 1% of its 10% share
        data = np.arange(10.0)
        counts = np.zeros(10)
        for i in range(100_000):
            for v in resample(data, 7, i):
                counts[int(v)] += 1
        freq = counts / counts.sum()
        assert np.abs(freq - 0.1).max() < 1e-3


class TestCertifiedStat:
    def test_file_certificate_wins(self):
        ds = load_builtin("pidigits")
        assert certified_stat(ds, "mean") == float(ds.certified.mean)

    def test_oracle_fallback(self):
        ds = make_dataset([1.0, 2.0, 3.0, 4.0])
        assert certified_stat(ds, "mean") == 2.5

    def test_uncertifiable_statistic(self):
        with pytest.raises(ValueError, match="not certifiable"):
            certified_stat(make_dataset([1.0, 2.0]), "autocorr")

    def test_unknown_statistic(self):
        with pytest.raises(ValueError, match="unknown statistic"):
            certified_stat(make_dataset([1.0]), "mode")


class _NanBackend:
    def std(self, data):
        return BackendResult.ok_value(math.nan)


class _RefusingBackend:
    def mean(self, data):
        return BackendResult.fail("mean not implemented")


class _FlakyBackend:
    """Delegates to the host but errors on chosen call ordinals."""

    def __init__(self, fail_calls):
        self.host = HostBackend()
        self.fail_calls = set(fail_calls)
        self.calls = 0

    def mean(self, data):
        self.calls += 1
        if self.calls in self.fail_calls:
            return BackendResult.fail("intermittent fault")
        return self.host.mean(data)


class TestStability:
    def setup_method(self):
        self.host = HostBackend()

    def test_constant_data_is_perfectly_stable(self):
        ds = make_dataset([7.0] * 50, name="constant")
        res = stability(ds, "mean", self.host,
                        BootstrapConfig(resamples=50, seed=123))
        assert res.base_lre == 16.0
        assert all(v == 16.0 for v in res.lre_samples)
        assert res.s_lre == 0.0  # exactly, not approximately

    def test_worker_count_never_changes_a_bit(self):
        ds = load_builtin("michelso-synth")
        cfg = BootstrapConfig(resamples=20, seed=42)
        serial = stability(ds, "std", self.host, cfg, jobs=1)
        threaded = stability(ds, "std", self.host, cfg, jobs=8)
        assert serial == threaded

    def test_frozen_seed_reproduces_recorded_run(self):
        ds = load_builtin("michelso-synth")
        res = stability(ds, "std", self.host,
                        BootstrapConfig(resamples=100, seed=42))
        assert res.base_lre == pytest.approx(15.456078910586987, rel=1e-12)
        assert res.s_lre == pytest.approx(0.33357486931605856, rel=1e-12)
        assert len(res.lre_samples) == 100 and res.skipped == ()

    def test_s_lre_matches_reported_samples(self):
        ds = load_builtin("lew-synth")
        res = stability(ds, "mean", self.host,
                        BootstrapConfig(resamples=30, seed=9))
        dev = math.fsum((v - res.base_lre) ** 2 for v in res.lre_samples)
        assert res.s_lre == math.sqrt(dev / (len(res.lre_samples) - 1))

    def test_config_statistic_must_agree(self):
        ds = make_dataset([1.0, 2.0, 3.0])
        cfg = BootstrapConfig(statistic="mean")
        with pytest.raises(ValueError, match="pinned"):
            stability(ds, "std", self.host, cfg)

    def test_unknown_statistic(self):
        with pytest.raises(ValueError, match="unknown statistic"):
            stability(make_dataset([1.0, 2.0]), "mode", self.host)

    def test_backend_failure_on_base_raises(self):
        ds = make_dataset([1.0, 2.0, 3.0])
        with pytest.raises(ValueError, match="cannot compute"):
            stability(ds, "mean", _RefusingBackend())

    def test_non_finite_base_raises(self):
        ds = make_dataset([1.0, 2.0, 3.0])
        with pytest.raises(ValueError, match="non-finite"):
            stability(ds, "std", _NanBackend())

    def test_partial_backend_failures_are_skipped(self):
        ds = make_dataset(list(range(1, 21)))
        # call 1 is the base fit, so resample r arrives as call r + 2
        backend = _FlakyBackend(fail_calls={3, 5})
        res = stability(ds, "mean", backend,
                        BootstrapConfig(resamples=10, seed=1))
        assert len(res.lre_samples) == 8
        assert [r for r, _ in res.skipped] == [1, 3]
        assert all("intermittent fault" in reason for _, reason in res.skipped)

    def test_too_few_valid_resamples_raises(self):
        ds = make_dataset(list(range(1, 21)))
        backend = _FlakyBackend(fail_calls=set(range(2, 12)))
        with pytest.raises(ValueError, match="valid resamples"):
            stability(ds, "mean", backend, BootstrapConfig(resamples=10, seed=1))

    def test_statistics_tuple(self):
        assert STATISTICS == ("mean", "std", "autocorr")

    def test_result_carries_base_score(self):
        ds = make_dataset([7.0] * 10)
        res = stability(ds, "mean", self.host, BootstrapConfig(resamples=5, seed=0))
        assert isinstance(res, StabilityResult)
        assert res.base_score is not None
        assert res.base_score.display.cell() == "Inf"
