"""Tests for bundled datasets, case grids, and the .strd fixture format."""

import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest

from numaudit.datasets import (
    Dataset,
    DetCase,
    DistributionCase,
    GraphSpec,
    RegressionModel,
    STATS_DATASETS,
    REGRESSION_DATASETS,
    _gen_michelso,
    _gen_norris,
    builtin_names,
    design_matrix,
    det_cases,
    distribution_cases,
    graph_cases,
    load_builtin,
    load_strd,
    resolve_dataset,
    save_strd,
)
from numaudit.oracle import DD, CertifiedStats, dd_mul

from helpers_rational import rat_autocorr_r1, rat_mean, rat_variance, rel_err


def write(tmp_path, text, name="case.strd"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


GOOD_UNIVARIATE = """\
name = demo
difficulty = low
certified_mean = 2.5
certified_sd = 1.2909944487358056
certified_autocorr = -0.5

1.0
2.0
3.0
4.0
"""

GOOD_PAIRS = """\
name = demo-fit
difficulty = average
model = polynomial 1 intercept
certified_beta_0 = 1.0
certified_beta_1 = 2.0
certified_rsd = 0.0

0.0 1.0
1.0 3.0
2.0 5.0
"""


class TestStrdParsing:
    def test_univariate_loads(self, tmp_path):
        ds = load_strd(write(tmp_path, GOOD_UNIVARIATE))
        assert ds.name == "demo"
        assert ds.difficulty == "low"
        assert ds.n == 4 and ds.data.ndim == 1
        assert ds.certified.mean.hi == 2.5
        assert ds.certified.autocorr_r1.hi == -0.5
        assert ds.certified.n == 4
        assert ds.model is None

    def test_pairs_load(self, tmp_path):
        ds = load_strd(write(tmp_path, GOOD_PAIRS))
        assert ds.model == RegressionModel(1, True, (1.0, 2.0), 0.0)
        assert ds.data.shape == (3, 2)
        assert list(ds.x) == [0.0, 1.0, 2.0]
        assert list(ds.y) == [1.0, 3.0, 5.0]
        assert ds.certified is None

    def test_certified_optional(self, tmp_path):
        ds = load_strd(write(tmp_path, "name = a\ndifficulty = high\n\n1.0\n2.0\n"))
        assert ds.certified is None and ds.model is None

    def test_round_trip_bit_exact(self, tmp_path):
        # awkward values on purpose: subnormal, negative zero, non-dyadic
        data = np.array([5e-324, -0.0, 0.1, 1e308, -2.5000000000000004])
        cert = CertifiedStats(
            mean=DD(0.30000000000000004), stddev=DD(1.2e-308), autocorr_r1=None, n=5
        )
        ds = Dataset("weird", "high", data, certified=cert)
        p1 = tmp_path / "a.strd"
        p2 = tmp_path / "b.strd"
        save_strd(ds, p1)
        back = load_strd(p1)
        assert back.data.tobytes() == data.tobytes()
        assert back.certified.mean.hi == 0.30000000000000004
        assert back.certified.stddev.hi == 1.2e-308
        save_strd(back, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_round_trip_pairs(self, tmp_path):
        ds0 = load_builtin("noint2-synth")
        p1 = tmp_path / "a.strd"
        p2 = tmp_path / "b.strd"
        save_strd(ds0, p1)
        back = load_strd(p1)
        assert back.data.tobytes() == ds0.data.tobytes()
        assert back.model.certified_beta == ds0.model.certified_beta
        assert back.model.certified_rsd == ds0.model.certified_rsd
        save_strd(back, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_resolve_dataset_path_and_builtin(self, tmp_path):
        p = write(tmp_path, GOOD_UNIVARIATE)
        assert resolve_dataset(str(p)).name == "demo"
        assert resolve_dataset("builtin:numacc1") is load_builtin("numacc1")


class TestStrdErrors:
    def test_malformed_header_names_line(self, tmp_path):
        p = write(tmp_path, "name = a\nbogus line\ndifficulty = low\n\n1.0\n")
        with pytest.raises(ValueError, match=r":2: malformed header"):
            load_strd(p)

    def test_duplicate_key(self, tmp_path):
        p = write(tmp_path, "name = a\nname = b\ndifficulty = low\n\n1.0\n")
        with pytest.raises(ValueError, match=r":2: duplicate"):
            load_strd(p)

    def test_unknown_key(self, tmp_path):
        p = write(tmp_path, "name = a\ndifficulty = low\ncertified_median = 1\n\n1.0\n")
        with pytest.raises(ValueError, match=r":3: unknown header key"):
            load_strd(p)

    def test_missing_separator(self, tmp_path):
        p = write(tmp_path, "name = a\ndifficulty = low\n")
        with pytest.raises(ValueError, match="missing blank separator"):
            load_strd(p)

    def test_empty_data(self, tmp_path):
        p = write(tmp_path, "name = a\ndifficulty = low\n\n")
        with pytest.raises(ValueError, match="empty data section"):
            load_strd(p)

    def test_blank_line_inside_data(self, tmp_path):
        p = write(tmp_path, "name = a\ndifficulty = low\n\n1.0\n\n2.0\n")
        with pytest.raises(ValueError, match=r":5: blank line inside data"):
            load_strd(p)

    def test_non_numeric_datum_names_line(self, tmp_path):
        p = write(tmp_path, "name = a\ndifficulty = low\n\n1.0\ntwo\n3.0\n")
        with pytest.raises(ValueError, match=r":5: non-numeric datum 'two'"):
            load_strd(p)

    def test_non_finite_datum_rejected(self, tmp_path):
        p = write(tmp_path, "name = a\ndifficulty = low\n\n1.0\nnan\n")
        with pytest.raises(ValueError, match=r":5: non-finite"):
            load_strd(p)

    def test_mixed_column_counts(self, tmp_path):
        p = write(tmp_path, GOOD_PAIRS.replace("2.0 5.0", "5.0"))
        with pytest.raises(ValueError, match=r":10: expected 2 columns"):
            load_strd(p)

    def test_three_columns_rejected(self, tmp_path):
        p = write(tmp_path, "name = a\ndifficulty = low\n\n1.0 2.0 3.0\n")
        with pytest.raises(ValueError, match="expected 1 or 2 columns"):
            load_strd(p)

    def test_missing_name(self, tmp_path):
        p = write(tmp_path, "difficulty = low\n\n1.0\n")
        with pytest.raises(ValueError, match="missing required header key 'name'"):
            load_strd(p)

    def test_missing_difficulty(self, tmp_path):
        p = write(tmp_path, "name = a\n\n1.0\n")
        with pytest.raises(ValueError, match="missing required header key 'difficulty'"):
            load_strd(p)

    def test_bad_difficulty_value(self, tmp_path):
        p = write(tmp_path, "name = a\ndifficulty = extreme\n\n1.0\n")
        with pytest.raises(ValueError, match="difficulty"):
            load_strd(p)

    def test_pairs_without_model(self, tmp_path):
        p = write(tmp_path, "name = a\ndifficulty = low\n\n1.0 2.0\n")
        with pytest.raises(ValueError, match="requires a model line"):
            load_strd(p)

    def test_model_with_univariate_data(self, tmp_path):
        p = write(tmp_path, "name = a\ndifficulty = low\nmodel = polynomial 1 intercept\n\n1.0\n")
        with pytest.raises(ValueError, match="model requires x-y pair data"):
            load_strd(p)

    def test_bad_model_line(self, tmp_path):
        p = write(tmp_path, "name = a\ndifficulty = low\nmodel = quadratic spline\n\n1.0 2.0\n")
        with pytest.raises(ValueError, match=r":3: model line must be"):
            load_strd(p)

    def test_beta_without_model(self, tmp_path):
        p = write(tmp_path, "name = a\ndifficulty = low\ncertified_beta_0 = 1.0\n\n1.0\n")
        with pytest.raises(ValueError, match="require a model line"):
            load_strd(p)

    def test_non_contiguous_beta(self, tmp_path):
        text = (
            "name = a\ndifficulty = low\nmodel = polynomial 2 intercept\n"
            "certified_beta_0 = 1.0\ncertified_beta_2 = 3.0\n\n1.0 2.0\n"
        )
        with pytest.raises(ValueError, match="contiguous"):
            load_strd(write(tmp_path, text))

    def test_beta_count_mismatch(self, tmp_path):
        text = (
            "name = a\ndifficulty = low\nmodel = polynomial 2 intercept\n"
            "certified_beta_0 = 1.0\ncertified_beta_1 = 3.0\n\n1.0 2.0\n"
        )
        with pytest.raises(ValueError, match="certified coefficients"):
            load_strd(write(tmp_path, text))

    def test_mean_without_sd(self, tmp_path):
        p = write(tmp_path, "name = a\ndifficulty = low\ncertified_mean = 1.0\n\n1.0\n")
        with pytest.raises(ValueError, match="must appear together"):
            load_strd(p)

    def test_autocorr_alone(self, tmp_path):
        p = write(tmp_path, "name = a\ndifficulty = low\ncertified_autocorr = 0.1\n\n1.0\n")
        with pytest.raises(ValueError, match="certified_autocorr requires"):
            load_strd(p)

    def test_non_numeric_certified_names_line(self, tmp_path):
        p = write(tmp_path, "name = a\ndifficulty = low\ncertified_mean = x\ncertified_sd = 1\n\n1.0\n")
        with pytest.raises(ValueError, match=r":3: non-numeric value for certified_mean"):
            load_strd(p)


class TestBuiltinRegistry:
    def test_names_and_grouping(self):
        assert builtin_names() == STATS_DATASETS + REGRESSION_DATASETS
        assert len(builtin_names()) == 15

    def test_unknown_name(self):
        with pytest.raises(KeyError, match="unknown builtin"):
            load_builtin("nope")

    def test_cached_and_read_only(self):
        ds = load_builtin("lew-synth")
        assert load_builtin("lew-synth") is ds
        with pytest.raises(ValueError):
            ds.data[0] = 99.0

    @pytest.mark.parametrize("name", STATS_DATASETS)
    def test_stats_sets_are_univariate_with_certified(self, name):
        ds = load_builtin(name)
        assert ds.data.ndim == 1
        assert ds.model is None
        assert ds.certified is not None
        assert ds.certified.n == ds.n
        assert ds.certified.autocorr_r1 is not None

    @pytest.mark.parametrize("name", REGRESSION_DATASETS)
    def test_regression_sets_have_full_models(self, name):
        ds = load_builtin(name)
        assert ds.data.ndim == 2 and ds.data.shape[1] == 2
        m = ds.model
        assert m is not None
        assert len(m.certified_beta) == m.n_params
        assert m.certified_rsd is not None and m.certified_rsd >= 0.0
        assert ds.n > m.n_params


class TestNumAccRecipes:
    def test_numacc1_closed_form_matches_oracle(self):
        from numaudit.oracle import certify_stats

        ds = load_builtin("numacc1")
        assert list(ds.data) == [10000001.0, 10000003.0, 10000002.0]
        oracle = certify_stats(ds.data)
        assert (oracle.mean.hi, oracle.mean.lo) == (10000002.0, 0.0)
        assert (oracle.stddev.hi, oracle.stddev.lo) == (1.0, 0.0)
        assert (oracle.autocorr_r1.hi, oracle.autocorr_r1.lo) == (-0.5, 0.0)
        assert ds.certified.mean.hi == 10000002.0

    @pytest.mark.parametrize(
        "name,mid",
        [("numacc2", "1.2"), ("numacc3", "1000000.2"), ("numacc4", "10000000.2")],
    )
    def test_alternating_pattern(self, name, mid):
        ds = load_builtin(name)
        assert ds.n == 1001
        assert ds.data[0] == float(mid)
        assert np.all(ds.data[1::2] == ds.data[1])
        assert np.all(ds.data[2::2] == ds.data[2])
        c = ds.certified
        assert c.mean.hi == float(mid) and c.mean.lo == 0.0
        assert c.stddev.hi == 0.1
        assert c.autocorr_r1.hi == -0.999

    def test_decimal_certified_rationale(self):
        # the certified sd 0.1 is the decimal-pattern value; the sd of the
        # double-rounded data differs at the representation floor, which is
        # exactly the gap the stats audit is built to expose
        from numaudit.oracle import certify_stats

        ds = load_builtin("numacc4")
        oracle_sd = certify_stats(ds.data).stddev.hi
        assert oracle_sd != 0.1
        assert abs(oracle_sd - 0.1) / 0.1 < 1e-7


class TestExactRepresentability:
    FIVE = ("pidigits", "lottery-synth", "lew-synth", "mavro-synth", "michelso-synth")

    @pytest.mark.parametrize("name", FIVE)
    def test_naive_sum_exact_and_mean_matches(self, name):
        # each datum and every left-to-right partial sum is exactly
        # representable, so a naive host mean agrees with the certified
        # double bit for bit
        ds = load_builtin(name)
        naive = 0.0
        exact = Fraction(0)
        for v in ds.data:
            naive += float(v)
            exact += Fraction(float(v))
        assert Fraction(naive) == exact
        assert naive / ds.n == ds.certified.mean.hi

    @pytest.mark.parametrize("name", ("pidigits", "lottery-synth", "lew-synth", "numacc1"))
    def test_integer_sets_certified_to_30_digits(self, name):
        from numaudit.oracle import certify_stats

        ds = load_builtin(name)
        vals = [float(v) for v in ds.data]
        assert all(v == int(v) for v in vals)
        c = certify_stats(ds.data)
        assert rel_err(c.mean.hi, c.mean.lo, rat_mean(vals)) < Fraction(1, 10**30)
        var = dd_mul(c.stddev, c.stddev)
        assert rel_err(var.hi, var.lo, rat_variance(vals)) < Fraction(1, 10**30)
        r1 = c.autocorr_r1
        assert rel_err(r1.hi, r1.lo, rat_autocorr_r1(vals)) < Fraction(1, 10**30)
        # bundled header certificates are the nearest-double projections
        assert ds.certified.mean.hi == c.mean.hi
        assert ds.certified.stddev.hi == c.stddev.hi
        assert ds.certified.autocorr_r1.hi == r1.hi

    def test_mavro_grid(self):
        ds = load_builtin("mavro-synth")
        q = (ds.data - 2.001953125) * 262144.0
        assert np.all(q == np.round(q))
        assert q.min() >= 0 and q.max() <= 63

    def test_michelso_grid(self):
        ds = load_builtin("michelso-synth")
        q = (ds.data - 299.75) * 256.0
        assert np.all(q == np.round(q))
        assert q.min() >= -13 and q.max() <= 12


class TestPiDigits:
    def test_shape_and_prefix(self):
        ds = load_builtin("pidigits")
        assert ds.n == 5000
        assert ds.difficulty == "low"
        assert list(ds.data[:10]) == [3, 1, 4, 1, 5, 9, 2, 6, 5, 3]

    def test_digit_sum(self):
        # the first 5000 digits of pi (leading 3 included) sum to 22679
        ds = load_builtin("pidigits")
        assert int(ds.data.sum()) == 22679
        assert ds.certified.mean.hi == 22679 / 5000

    def test_feynman_point(self):
        # six consecutive nines starting at decimal position 762
        ds = load_builtin("pidigits")
        assert list(ds.data[762:768]) == [9.0] * 6
        assert ds.data[761] == 4.0


class TestRegressionCertificates:
    @staticmethod
    def mp_lstsq(X, y, dps=60):
        with mp.workdps(dps):
            Xm = mp.matrix([[mp.mpf(v) for v in row] for row in np.asarray(X, float)])
            ym = mp.matrix([mp.mpf(v) for v in np.asarray(y, float)])
            beta = mp.lu_solve(Xm.T * Xm, Xm.T * ym)
            r = Xm * beta - ym
            n, p = Xm.rows, Xm.cols
            rsd = mp.sqrt(sum(t * t for t in r) / (n - p))
            return [float(b) for b in beta], float(rsd)

    @pytest.mark.parametrize("name", ("norris-synth", "pontius-synth", "filip-synth"))
    def test_certified_beta_matches_mpmath(self, name):
        ds = load_builtin(name)
        m = ds.model
        X = design_matrix(ds.x, m.degree, m.intercept)
        beta, rsd = self.mp_lstsq(X, ds.y)
        # both solvers are far beyond double precision; the nearest-double
        # projections must agree exactly
        assert tuple(beta) == m.certified_beta
        assert rsd == m.certified_rsd

    def test_noint1_exact(self):
        m = load_builtin("noint1-synth").model
        assert m.certified_beta == (2.0,) and m.certified_rsd == 0.0

    def test_noint2_closed_form(self):
        # beta = sum(xy)/sum(x^2) = 23/14, rss = 45/14, rsd = sqrt(45/28)
        m = load_builtin("noint2-synth").model
        assert m.certified_beta == (float(Fraction(23, 14)),)
        with mp.workdps(40):
            assert m.certified_rsd == float(mp.sqrt(mp.mpf(45) / 28))

    def test_wampler_exact(self):
        ds = load_builtin("wampler-synth")
        m = ds.model
        assert m.certified_beta == (1.0,) * 6 and m.certified_rsd == 0.0
        # y really is the all-ones degree-5 polynomial, exactly
        xs = [int(v) for v in ds.x]
        assert [int(v) for v in ds.y] == [sum(x**k for k in range(6)) for x in xs]


class TestFixtureFiles:
    def test_michelso_fixture_matches_generator(self, tmp_path):
        from numaudit.datasets import _FILE_BUILTINS
        from importlib import resources

        assert "michelso-synth" in _FILE_BUILTINS
        out = tmp_path / "regen.strd"
        save_strd(_gen_michelso(), out)
        ref = resources.files("numaudit").joinpath("data", "michelso-synth.strd")
        assert out.read_bytes() == ref.read_bytes()

    def test_norris_fixture_matches_generator(self, tmp_path):
        from importlib import resources

        out = tmp_path / "regen.strd"
        save_strd(_gen_norris(), out)
        ref = resources.files("numaudit").joinpath("data", "norris-synth.strd")
        assert out.read_bytes() == ref.read_bytes()


class TestDetGrid:
    def test_enumeration(self):
        cases = det_cases()
        assert len(cases) == 240
        assert (cases[0].j, cases[0].k) == (0, 1)
        assert (cases[-1].j, cases[-1].k) == (15, 15)
        assert [c.case_index for c in cases] == list(range(240))
        assert det_cases() == cases

    def test_grid_values(self):
        for c in det_cases():
            assert c.b == float(10**c.j)
            assert c.s == 10.0 ** -c.j
            assert c.epsilon == 1.0 - 10.0 ** -c.k
            assert 0.0 < c.epsilon < 1.0

    def test_product_invariant(self):
        # b*s rounds to exactly 1.0 everywhere except j=11, where the
        # nearest double to 1e-11 pushes the product one ulp low
        for c in det_cases():
            if c.j == 11:
                assert c.b * c.s == math.nextafter(1.0, 0.0)
            else:
                assert c.b * c.s == 1.0

    def test_matrix_entries(self):
        c = DetCase(3, 2)
        m = c.matrix()
        assert m[0, 0] == 1000.0
        assert m[0, 1] == 1000.0 * 0.99
        assert m[1, 0] == 0.001 / 0.99
        assert m[1, 1] == 0.001

    def test_validation(self):
        with pytest.raises(ValueError):
            DetCase(16, 1)
        with pytest.raises(ValueError):
            DetCase(0, 0)
        with pytest.raises(ValueError):
            DetCase(-1, 5)


class TestGraphSpecs:
    def test_case_list(self):
        cases = graph_cases()
        assert [g.label for g in cases] == [
            "K(9,10)", "K(99,100)", "K(999,1000)", "K(2,17)", "K(2,197)", "K(2,1997)",
        ]
        assert [g.family for g in cases] == ["balanced"] * 3 + ["skewed"] * 3
        assert [g.dim for g in cases] == [19, 199, 1999, 19, 199, 1999]
        assert all(g.m <= g.n for g in cases)

    def test_validation(self):
        with pytest.raises(ValueError):
            GraphSpec(3, 2)
        with pytest.raises(ValueError):
            GraphSpec(0, 5)
        with pytest.raises(ValueError):
            GraphSpec(3, 5, "balanced")
        with pytest.raises(ValueError):
            GraphSpec(3, 7, "skewed")
        with pytest.raises(ValueError):
            GraphSpec(2, 4, "skewed")
        with pytest.raises(ValueError):
            GraphSpec(2, 3, "weird")
        assert GraphSpec(7, 7).dim == 14  # explicit square graph is fine


class TestDistributionTable:
    def test_row_counts(self):
        cases = distribution_cases()
        assert len(cases) == 51
        by_family = {}
        for c in cases:
            by_family[c.family] = by_family.get(c.family, 0) + 1
        assert by_family == {
            "gamma_cdf": 5,
            "binomial": 6,
            "poisson_pmf": 5,
            "poisson_cdf": 3,
            "normal_quantile": 3,
            "chi2_quantile": 6,
            "beta_quantile": 13,
            "t_quantile": 5,
            "f_quantile": 5,
        }

    def test_reproducible_and_unique(self):
        cases = distribution_cases()
        assert distribution_cases() == cases
        ids = [c.case_id for c in cases]
        assert len(set(ids)) == len(ids)

    def test_param_conventions(self):
        cases = distribution_cases()
        gamma = [c for c in cases if c.family == "gamma_cdf"]
        assert gamma[0].param_dict() == {"alpha": 0.1, "beta": 1.0}
        assert gamma[0].input == 0.1 and gamma[0].certified == 8.27552e-01
        binom = [c for c in cases if c.family == "binomial"]
        assert all(c.param_dict() == {"n": 1030.0, "p": 0.5} for c in binom)
        assert binom[0].input == 1.0 and binom[0].certified == 8.96114e-308
        pcdf = [c for c in cases if c.family == "poisson_cdf"]
        assert all(c.param_dict()["lam"] == c.input for c in pcdf)
        assert pcdf[-1].input == 1e9

    def test_spot_certified_values(self):
        cases = {c.case_id: c for c in distribution_cases()}
        normal_exact = [c for c in cases.values()
                        if c.family == "normal_quantile" and c.input == 0.5]
        assert normal_exact[0].certified == 0.0
        t_tail = [c for c in cases.values()
                  if c.family == "t_quantile" and c.input == 1e-100]
        assert t_tail[0].certified == 3.18310e99

    def test_all_certified_finite(self):
        for c in distribution_cases():
            assert math.isfinite(c.certified)
            assert math.isfinite(c.input)

    def test_family_validation(self):
        with pytest.raises(ValueError, match="unknown family"):
            DistributionCase("cauchy_cdf", (), 0.5, 0.5)
