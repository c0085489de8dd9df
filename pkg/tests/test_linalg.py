"""Determinant decision grid and bipartite spectral audit."""

import json
import math
from importlib import resources

import numpy as np
import pytest

from numaudit.backend import BackendResult, HostBackend
from numaudit.datasets import DetCase, GraphSpec, det_cases
from numaudit.distributions import ConvergenceError
from numaudit.linalg import (
    DOUBLE,
    SINGLE,
    DetDecision,
    SpectralScore,
    build_laplacian,
    det_lu,
    eig_sym,
    run_det_suite,
    run_spectral_case,
    score_spectrum,
)
from numaudit.metric import NA


def golden_det():
    text = resources.files("numaudit.data").joinpath("det_golden.json").read_text()
    return json.loads(text)


class TestDetLu:
    def test_identity(self):
        assert det_lu([[1.0, 0.0], [0.0, 1.0]]) == 1.0

    def test_diagonal(self):
        assert det_lu([[2.0, 0.0], [0.0, 3.0]]) == 6.0

    def test_pivot_swap_keeps_sign(self):
        # |a21| > |a11| forces a row swap; the sign flip restores det
        assert det_lu([[1.0, 0.0], [3.0, 2.0]]) == 2.0
        assert det_lu([[0.0, 1.0], [1.0, 0.0]]) == -1.0

    def test_zero_pivot_after_swap_is_zero(self):
        assert det_lu([[0.0, 1.0], [0.0, 2.0]]) == 0.0
        assert det_lu([[0.0, 0.0], [0.0, 0.0]]) == 0.0

    def test_rejects_wrong_shape(self):
        with pytest.raises(ValueError, match="2x2"):
            det_lu([[1.0, 2.0, 3.0]] * 3)

    def test_grid_case_example(self):
        m = DetCase(j=0, k=1).matrix()
        assert m[0][0] == 1.0 and m[0][1] == 0.9
        assert m[1][0] == 1.0 / 0.9 and m[1][1] == 1.0
        # singular by construction; this one the LU kernel misses
        assert det_lu(m) != 0.0


class TestDetDecision:
    def test_success_requires_consistent_flag(self):
        case = DetCase(0, 1)
        DetDecision(case, 0.0, True)
        DetDecision(case, 1e-18, False)
        with pytest.raises(ValueError, match="mirror"):
            DetDecision(case, 1e-18, True)
        with pytest.raises(ValueError, match="determinant value"):
            DetDecision(case, None, None)

    def test_error_excludes_value(self):
        case = DetCase(0, 1)
        DetDecision(case, None, None, "backend gone")
        with pytest.raises(ValueError, match="no determinant"):
            DetDecision(case, 0.0, True, "backend gone")


class _ClosedFormDet:
    def det(self, matrix):
        m = matrix
        return BackendResult.ok_value(m[0][0] * m[1][1] - m[0][1] * m[1][0])


class _FlakyDet:
    def det(self, matrix):
        return BackendResult.fail("no determinant support")


class TestDetSuite:
    def test_host_matches_recorded_golden(self):
        golden = golden_det()
        decisions, correct = run_det_suite(HostBackend())
        assert len(decisions) == 240 == golden["cases"]
        assert correct == golden["correct"] == 146
        zero_cases = [d.case.case_index for d in decisions if d.decided_zero]
        assert zero_cases == golden["zero_cases"]

    def test_deterministic(self):
        host = HostBackend()
        first = run_det_suite(host)
        second = run_det_suite(host)
        assert first == second

    def test_closed_form_backend_has_its_own_count(self):
        # a textbook ad - bc expansion rounds differently from LU and
        # lands on a different, equally stable, decision count
        decisions, correct = run_det_suite(_ClosedFormDet())
        assert correct == 176
        assert len(decisions) == 240

    def test_backend_errors_excluded_from_count(self):
        decisions, correct = run_det_suite(_FlakyDet())
        assert correct == 0
        assert all(d.error is not None for d in decisions)
        assert len(decisions) == 240


class TestBuildLaplacian:
    def test_k11(self):
        L = build_laplacian(GraphSpec(1, 1))
        assert L.tolist() == [[1.0, -1.0], [-1.0, 1.0]]

    def test_k9_10_structure(self):
        L = build_laplacian(GraphSpec(9, 10))
        assert L.shape == (19, 19)
        assert np.array_equal(np.diag(L), [10.0] * 9 + [9.0] * 10)
        assert np.array_equal(L, L.T)
        assert np.abs(L.sum(axis=0)).max() == 0.0  # zero row sums
        assert np.all(L[:9, 9:] == -1.0)
        assert np.all(L[:9, :9] - np.diag(np.diag(L[:9, :9])) == 0.0)

    def test_dimension_cap(self):
        with pytest.raises(ValueError, match="exceeds cap"):
            build_laplacian(GraphSpec(1, 10_000))


class TestEigSym:
    def test_diagonal_is_exact(self):
        vals = eig_sym(np.diag([3.0, 1.0, 2.0]))
        assert vals.tolist() == [1.0, 2.0, 3.0]

    def test_one_by_one(self):
        assert eig_sym([[4.0]]).tolist() == [4.0]

    def test_k23_closed_form(self):
        vals = eig_sym(build_laplacian(GraphSpec(2, 3)))
        assert np.abs(vals - [0.0, 2.0, 2.0, 3.0, 5.0]).max() < 1e-12

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError, match="not symmetric"):
            eig_sym([[1.0, 2.0], [0.0, 1.0]])

    def test_rejects_non_square(self):
        with pytest.raises(ValueError, match="square"):
            eig_sym(np.ones((2, 3)))

    def test_tolerates_tiny_asymmetry(self):
        M = np.array([[2.0, 1.0], [1.0 + 1e-13, 2.0]])
        vals = eig_sym(M)
        assert vals.shape == (2,)

    @pytest.mark.parametrize("m,n", [(9, 10), (2, 17), (99, 100), (2, 197)])
    def test_spectral_invariants(self, m, n):
        L = build_laplacian(GraphSpec(m, n))
        vals = eig_sym(L)
        dim = m + n
        # trace preservation
        tr = float(np.trace(L))
        assert abs(math.fsum(vals.tolist()) - tr) <= 1e-12 * (1.0 + abs(tr))
        # positive semidefinite up to rounding
        assert vals[0] >= -1e-10
        # second-smallest eigenvalue positive: the graph is connected
        assert vals[1] > 0.0
        # closed-form multiset within absolute tolerance
        expected = np.array([0.0] + [float(m)] * (n - 1)
                            + [float(n)] * (m - 1) + [float(dim)])
        assert np.abs(vals - expected).max() <= 1e-9 * dim


class TestScoreSpectrum:
    def test_exact_closed_form_scores_inf(self):
        m, n = 3, 4
        eigs = [0.0] + [3.0] * 3 + [4.0] * 2 + [7.0]
        sc = score_spectrum(eigs, m, n)
        for s in (sc.l1, sc.l_mn, sc.l_s, sc.l_n, sc.l_m):
            assert math.isinf(s.raw)
        assert sc.pct_n == 100.0
        assert sc.pct_m == 100.0

    def test_validation(self):
        with pytest.raises(ValueError, match="equality policy"):
            score_spectrum([0.0, 2.0], 1, 1, "float16")
        with pytest.raises(ValueError, match="1 <= m <= n"):
            score_spectrum([0.0, 0.0, 0.0], 2, 1)
        with pytest.raises(ValueError, match="expected 3 eigenvalues"):
            score_spectrum([0.0, 2.0], 1, 2)

    def test_m_equal_one_degenerates(self):
        # star graph K(1,n): no eigenvalues certified n, no pct_m
        sc = score_spectrum([0.0, 1.0, 1.0, 4.0], 1, 3)
        assert sc.l_n.display.kind == NA
        assert sc.pct_m is None
        assert sc.pct_n is not None

    def test_single_policy_forgives_float32_noise(self):
        m, n = 2, 3
        eigs = [0.0, 2.0 + 1e-9, 2.0 - 1e-9, 3.0, 5.0]
        single = score_spectrum(eigs, m, n, SINGLE)
        double = score_spectrum(eigs, m, n, DOUBLE)
        assert single.pct_n == 100.0
        assert double.pct_n == 0.0

    def test_pct_unclamped_above_100(self):
        # three eigenvalues test equal to m=2 but the correct count is 2
        eigs = [0.0, 2.0, 2.0, 2.0, 5.0]
        sc = score_spectrum(eigs, 2, 3)
        assert sc.pct_n == 150.0

    def test_positional_assignment(self):
        # interior blocks are taken by position in the sorted list
        m, n = 2, 3
        eigs = [0.0, 2.0, 2.5, 3.0, 5.0]
        sc = score_spectrum(eigs, m, n)
        # v[1:3] scored against m=2: the 2.5 entry is the worst
        assert sc.l_m.raw == pytest.approx(-math.log10(0.25), abs=1e-12)
        # v[3:4] scored against n=3: exact
        assert math.isinf(sc.l_n.raw)


class _FailEig:
    def eig_sym(self, matrix):
        return BackendResult.fail("no eigensolver")


class TestRunSpectralCase:
    def test_host_k9_10(self):
        res = run_spectral_case(GraphSpec(9, 10), HostBackend())
        assert res.error is None
        sc = res.score
        assert isinstance(sc, SpectralScore)
        for s in (sc.l1, sc.l_mn, sc.l_s, sc.l_n, sc.l_m):
            assert s.raw >= 13.0
        assert sc.pct_n == 100.0 and sc.pct_m == 100.0

    def test_error_propagates(self):
        res = run_spectral_case(GraphSpec(2, 3), _FailEig())
        assert res.score is None
        assert res.error == "no eigensolver"
