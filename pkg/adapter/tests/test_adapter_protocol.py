"""Wire-level behavior of a live adapter process."""

import json

import pytest

from adapter_session import AdapterSession

CORE_CAPABILITIES = {"mean", "std", "autocorr_pearson_shifted",
                     "regress", "det", "eig_sym"}
DIST_CAPABILITIES = {
    "dist:gamma_cdf", "dist:binomial", "dist:poisson_pmf", "dist:poisson_cdf",
    "dist:normal_quantile", "dist:chi2_quantile", "dist:beta_quantile",
    "dist:t_quantile", "dist:f_quantile",
}


class TestHandshake:
    def test_first_line_declares_protocol_and_capabilities(self):
        with AdapterSession() as s:
            assert s.handshake["protocol"] == 1
            caps = set(s.handshake["capabilities"])
            assert CORE_CAPABILITIES <= caps
            assert {c for c in caps if c.startswith("dist:")} == DIST_CAPABILITIES


class TestRequestResponse:
    def test_mean_round_trip(self):
        with AdapterSession() as s:
            resp = s.ask(id=1, op="mean", data=[1.0, 2.0, 3.0])
            assert resp == {"id": 1, "value": 2.0, "hex": (2.0).hex()}

    def test_ids_echo_in_order(self):
        with AdapterSession() as s:
            for i in (10, 11, 12):
                assert s.ask(id=i, op="mean", data=[float(i)])["id"] == i

    def test_hex_field_matches_decimal_bit_for_bit(self):
        with AdapterSession() as s:
            resp = s.ask(id=1, op="std", data=[0.1, 0.2, 0.4])
            assert float.fromhex(resp["hex"]) == resp["value"]

    def test_regress_payload_shape(self):
        with AdapterSession() as s:
            resp = s.ask(id=1, op="regress", x=[1.0, 2.0, 3.0, 4.0],
                         y=[3.0, 5.0, 7.0, 9.0], degree=1, intercept=True,
                         method="orthogonal")
            assert [float.fromhex(h) for h in resp["beta_hex"]] == resp["beta"]
            assert float.fromhex(resp["rsd_hex"]) == resp["rsd"]
            assert resp["beta"] == pytest.approx([1.0, 2.0], abs=1e-10)
            assert resp["rsd"] == pytest.approx(0.0, abs=1e-10)

    def test_eig_values_ascending_with_hex(self):
        with AdapterSession() as s:
            resp = s.ask(id=1, op="eig", matrix=[[2.0, -1.0], [-1.0, 2.0]])
            assert resp["values"] == [1.0, 3.0]
            assert [float.fromhex(h) for h in resp["values_hex"]] == [1.0, 3.0]

    def test_det(self):
        with AdapterSession() as s:
            resp = s.ask(id=1, op="det", matrix=[[2.0, 0.0], [0.0, 3.0]])
            assert resp["value"] == 6.0

    def test_dist(self):
        with AdapterSession() as s:
            resp = s.ask(id=2, op="dist", family="normal_quantile",
                         mu=0.0, sigma=1.0, x=0.5)
            assert resp == {"id": 2, "value": 0.0, "hex": (0.0).hex()}


class TestErrorPaths:
    def test_unsupported_op_then_session_continues(self):
        with AdapterSession() as s:
            resp = s.ask(id=1, op="median", data=[1.0])
            assert resp["id"] == 1
            assert "unsupported op" in resp["error"]
            assert s.ask(id=2, op="mean", data=[4.0])["value"] == 4.0

    def test_malformed_json_line_then_session_continues(self):
        with AdapterSession() as s:
            resp = json.loads(s.send_line('{"id": 3, "op": "mean"'))
            assert resp["id"] is None
            assert "not valid JSON" in resp["error"]
            assert s.ask(id=4, op="mean", data=[1.0])["value"] == 1.0

    def test_non_object_request(self):
        with AdapterSession() as s:
            resp = json.loads(s.send_line("[1, 2, 3]"))
            assert "not an object" in resp["error"]

    def test_missing_field_is_reported(self):
        with AdapterSession() as s:
            resp = s.ask(id=1, op="mean")
            assert "lacks field 'data'" in resp["error"]

    def test_non_finite_result_is_error_not_nan(self):
        with AdapterSession() as s:
            resp = s.ask(id=1, op="autocorr", data=[2.0] * 8)
            assert "non-finite" in resp["error"]

    def test_overflowing_quantile_is_error(self):
        # the stock F(1,1) inverse survival function overflows here even
        # though the true quantile is representable
        with AdapterSession() as s:
            resp = s.ask(id=1, op="dist", family="f_quantile",
                         d1=1.0, d2=1.0, x=1e-100)
            assert "non-finite" in resp["error"]

    def test_bad_matrix_payload_is_error(self):
        with AdapterSession() as s:
            resp = s.ask(id=1, op="eig", matrix=[[1.0, 2.0], [2.0 + 1e-9, 1.0]])
            assert resp["id"] == 1 and "symmetric" in resp["error"]
            resp = s.ask(id=2, op="det", matrix=[[1.0, 2.0]])
            assert "square" in resp["error"]

    def test_blank_lines_are_skipped(self):
        with AdapterSession() as s:
            s.proc.stdin.write("\n   \n")
            s.proc.stdin.flush()
            assert s.ask(id=1, op="mean", data=[2.0])["value"] == 2.0

    def test_eof_ends_the_process_cleanly(self):
        s = AdapterSession()
        s.proc.stdin.close()
        assert s.proc.wait(timeout=10) == 0
