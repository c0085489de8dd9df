"""Audit targets: in-process host kernels and external processes.

A backend is the system whose floating-point behavior is being measured.
The host backend computes every statistic the way a straightforward
double-precision platform would: naive left-to-right summation, two-pass
sample standard deviation, textbook Pearson correlation of the shifted
subvectors, unpivoted least squares, LU determinants, Jacobi
eigenvalues. Nothing here is accuracy-enhanced on purpose; the certified
answers come from the oracle module, never from a backend.

External backends speak a line-delimited JSON protocol over
stdin/stdout, one request line per response line:

  handshake (adapter's first line, before any request):
      {"protocol": 1, "capabilities": ["mean", "std", ...]}
  requests (each carries a monotonically increasing "id"):
      {"id": 1, "op": "mean", "data": [1.0, 2.0, 3.0]}
      {"id": 2, "op": "std", "data": [...]}
      {"id": 3, "op": "autocorr", "data": [...]}
      {"id": 4, "op": "regress", "x": [...], "y": [...],
       "degree": 2, "intercept": true, "method": "orthogonal"}
      {"id": 5, "op": "det", "matrix": [[..., ...], [..., ...]]}
      {"id": 6, "op": "eig", "matrix": [[...], ...]}
      {"id": 7, "op": "dist", "family": "gamma_cdf",
       "alpha": 0.1, "beta": 1.0, "x": 0.1}
  responses echo the id:
      {"id": 1, "value": 2.0}
      {"id": 4, "beta": [...], "rsd": 0.5}
      {"id": 6, "values": [...]}
      {"id": 7, "error": "unsupported"}

Doubles travel as shortest round-trip decimals; a response may add a
hexadecimal float form ("hex" for value, "rsd_hex" for rsd, and
"beta_hex"/"values_hex" as parallel arrays) which takes precedence over
the decimal field, making bit-exact transport trivial from any
platform. A mismatched protocol version is a hard error; per-request
failures (process exit, 60 s timeout, malformed or non-finite payload)
mark that case NA and the audit continues. Capability tags are mean,
std, autocorr_pearson_shifted, regress, det, eig_sym, and dist:<family>;
an op whose tag the adapter did not declare is NA without a round trip.
One request is in flight per process at a time, enforced with a lock;
host kernels are pure and safe to call from any thread.
"""

from __future__ import annotations

import json
import math
import queue
import shlex
import subprocess
import threading
from dataclasses import dataclass

import numpy as np
from numba import njit

from .datasets import DISTRIBUTION_FAMILIES, design_matrix
from .distributions import (
    ConvergenceError,
    beta_quantile,
    binom_cdf,
    chi2_quantile,
    f_quantile,
    gamma_cdf,
    normal_quantile,
    poisson_cdf,
    poisson_pmf,
    t_quantile,
)
from .linalg import det_lu, eig_sym
from .oracle import RankDeficientError
from .regression import LS_METHODS, ORTHOGONAL, fit_ls

__all__ = [
    "Backend",
    "BackendResult",
    "ExternalBackend",
    "HostBackend",
    "PROTOCOL_VERSION",
    "ProtocolError",
    "REQUEST_TIMEOUT",
    "MAX_PAYLOAD_NUMBERS",
    "make_backend",
]

PROTOCOL_VERSION = 1
REQUEST_TIMEOUT = 60.0
MAX_PAYLOAD_NUMBERS = 10_000_000

HOST_CAPABILITIES = frozenset(
    {"mean", "std", "autocorr_pearson_shifted", "regress", "det", "eig_sym"}
    | {f"dist:{fam}" for fam in DISTRIBUTION_FAMILIES}
)

# op name on the wire -> capability tag an adapter must declare
_OP_CAPABILITY = {
    "mean": "mean",
    "std": "std",
    "autocorr": "autocorr_pearson_shifted",
    "regress": "regress",
    "det": "det",
    "eig": "eig_sym",
}


class ProtocolError(RuntimeError):
    """Unrecoverable wire-protocol failure (bad handshake, wrong version)."""


@dataclass(frozen=True)
class BackendResult:
    """Outcome of one backend call; exactly one payload shape is set.

    error carries a human-readable reason and means the case scores NA.
    """

    value: float | None = None
    values: tuple[float, ...] | None = None
    beta: tuple[float, ...] | None = None
    rsd: float | None = None
    error: str | None = None

    @classmethod
    def ok_value(cls, v: float) -> "BackendResult":
        return cls(value=float(v))

    @classmethod
    def ok_values(cls, vs) -> "BackendResult":
        return cls(values=tuple(float(v) for v in vs))

    @classmethod
    def ok_fit(cls, beta, rsd: float) -> "BackendResult":
        return cls(beta=tuple(float(b) for b in beta), rsd=float(rsd))

    @classmethod
    def fail(cls, reason: str) -> "BackendResult":
        return cls(error=reason)


class Backend:
    """Interface every audit target implements."""

    backend_id: str = "backend"

    def capabilities(self) -> frozenset[str]:
        raise NotImplementedError

    def mean(self, data) -> BackendResult:
        raise NotImplementedError

    def std(self, data) -> BackendResult:
        raise NotImplementedError

    def autocorr(self, data) -> BackendResult:
        raise NotImplementedError

    def regress(self, x, y, degree: int, intercept: bool,
                method: str = ORTHOGONAL) -> BackendResult:
        raise NotImplementedError

    def det(self, matrix) -> BackendResult:
        raise NotImplementedError

    def eig_sym(self, matrix) -> BackendResult:
        raise NotImplementedError

    def dist(self, family: str, params: dict, x: float) -> BackendResult:
        raise NotImplementedError

    def close(self) -> None:
        pass

    def __enter__(self) -> "Backend":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


@njit(cache=True)
def _naive_mean(v):
    s = 0.0
    for i in range(v.size):
        s += v[i]
    return s / v.size


@njit(cache=True)
def _two_pass_std(v):
    m = _naive_mean(v)
    ss = 0.0
    for i in range(v.size):
        d = v[i] - m
        ss += d * d
    return np.sqrt(ss / (v.size - 1))


@njit(cache=True)
def _pearson_shifted(v):
    # correlation of v[:-1] against v[1:], each centered on its own mean
    n = v.size - 1
    ma = 0.0
    mb = 0.0
    for i in range(n):
        ma += v[i]
        mb += v[i + 1]
    ma /= n
    mb /= n
    sxy = 0.0
    sxx = 0.0
    syy = 0.0
    for i in range(n):
        da = v[i] - ma
        db = v[i + 1] - mb
        sxy += da * db
        sxx += da * da
        syy += db * db
    return sxy / np.sqrt(sxx * syy)


def _as_vector(data) -> np.ndarray:
    v = np.ascontiguousarray(data, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("expected a nonempty 1-d vector")
    return v


class HostBackend(Backend):
    """In-process plain-double kernels standing in for an audited platform."""

    backend_id = "host"

    def capabilities(self) -> frozenset[str]:
        return HOST_CAPABILITIES

    def mean(self, data) -> BackendResult:
        v = _as_vector(data)
        return BackendResult.ok_value(_naive_mean(v))

    def std(self, data) -> BackendResult:
        v = _as_vector(data)
        if v.size < 2:
            return BackendResult.fail("std needs at least 2 observations")
        return BackendResult.ok_value(_two_pass_std(v))

    def autocorr(self, data) -> BackendResult:
        v = _as_vector(data)
        if v.size < 3:
            return BackendResult.fail("autocorr needs at least 3 observations")
        try:
            r = _pearson_shifted(v)
        except ZeroDivisionError:
            r = math.nan
        if math.isnan(r) or math.isinf(r):
            return BackendResult.fail("autocorr undefined: zero variance in a shifted subvector")
        return BackendResult.ok_value(r)

    def regress(self, x, y, degree: int, intercept: bool,
                method: str = ORTHOGONAL) -> BackendResult:
        if method not in LS_METHODS:
            return BackendResult.fail(f"unknown least-squares method {method!r}")
        try:
            X = design_matrix(np.asarray(x, float), degree, intercept)
            beta, rsd = fit_ls(X, np.asarray(y, float), method)
        except (RankDeficientError, ValueError) as exc:
            return BackendResult.fail(str(exc))
        return BackendResult.ok_fit(beta, rsd)

    def det(self, matrix) -> BackendResult:
        try:
            return BackendResult.ok_value(det_lu(matrix))
        except ValueError as exc:
            return BackendResult.fail(str(exc))

    def eig_sym(self, matrix) -> BackendResult:
        try:
            return BackendResult.ok_values(eig_sym(matrix))
        except (ValueError, ConvergenceError) as exc:
            return BackendResult.fail(str(exc))

    def dist(self, family: str, params: dict, x: float) -> BackendResult:
        try:
            value = _dist_dispatch(family, params, x)
        except (ConvergenceError, ValueError, KeyError,
                ZeroDivisionError, OverflowError) as exc:
            return BackendResult.fail(f"{family}: {exc}")
        if math.isnan(value) or math.isinf(value):
            return BackendResult.fail(f"{family}: non-finite result")
        return BackendResult.ok_value(value)


def _dist_dispatch(family: str, params: dict, x: float) -> float:
    if family == "gamma_cdf":
        return gamma_cdf(x, params["alpha"], params.get("beta", 1.0))
    if family == "binomial":
        return binom_cdf(int(x), int(params["n"]), params["p"])
    if family == "poisson_pmf":
        return poisson_pmf(int(x), params["lam"])
    if family == "poisson_cdf":
        return poisson_cdf(int(x), params["lam"])
    if family == "normal_quantile":
        return normal_quantile(x, params.get("mu", 0.0), params.get("sigma", 1.0))
    if family == "chi2_quantile":
        return chi2_quantile(x, params["df"])
    if family == "beta_quantile":
        return beta_quantile(x, params["a"], params["b"])
    if family == "t_quantile":
        return t_quantile(x, params["df"])
    if family == "f_quantile":
        return f_quantile(x, params["d1"], params["d2"])
    raise KeyError(f"unknown distribution family {family!r}")


def _decode_number(obj: dict, decimal_field: str, hex_field: str) -> float:
    """Pull one double out of a response; hex form wins when present."""
    if hex_field in obj:
        v = float.fromhex(obj[hex_field])
    elif decimal_field in obj:
        raw = obj[decimal_field]
        if not isinstance(raw, (int, float)) or isinstance(raw, bool):
            raise ValueError(f"field {decimal_field!r} is not a number")
        v = float(raw)
    else:
        raise ValueError(f"response lacks field {decimal_field!r}")
    if math.isnan(v) or math.isinf(v):
        raise ValueError(f"non-finite value in field {decimal_field!r}")
    return v


def _decode_array(obj: dict, decimal_field: str, hex_field: str) -> tuple[float, ...]:
    if hex_field in obj:
        raw = [float.fromhex(h) for h in obj[hex_field]]
    elif decimal_field in obj:
        raw = obj[decimal_field]
        if not isinstance(raw, list):
            raise ValueError(f"field {decimal_field!r} is not an array")
        raw = [float(v) for v in raw]
    else:
        raise ValueError(f"response lacks field {decimal_field!r}")
    out = []
    for v in raw:
        if math.isnan(v) or math.isinf(v):
            raise ValueError(f"non-finite value in field {decimal_field!r}")
        out.append(v)
    return tuple(out)


class ExternalBackend(Backend):
    """Adapter process driven over the line-delimited JSON protocol."""

    def __init__(self, command: str, timeout: float = REQUEST_TIMEOUT):
        self.backend_id = f"exec:{command}"
        self._timeout = timeout
        self._lock = threading.Lock()
        self._next_id = 0
        self._dead: str | None = None
        self._proc = subprocess.Popen(
            shlex.split(command),
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            encoding="utf-8",
            bufsize=1,
        )
        self._lines: queue.Queue[str | None] = queue.Queue()
        self._reader = threading.Thread(target=self._read_loop, daemon=True)
        self._reader.start()
        try:
            self._capabilities = self._handshake()
        except ProtocolError:
            self._kill("handshake failed")
            raise

    def _read_loop(self) -> None:
        for line in self._proc.stdout:
            self._lines.put(line)
        self._lines.put(None)  # EOF sentinel

    def _next_line(self) -> str:
        try:
            line = self._lines.get(timeout=self._timeout)
        except queue.Empty:
            self._kill(f"no response within {self._timeout:g}s")
            raise TimeoutError(self._dead)
        if line is None:
            self._kill("backend process closed its output")
            raise EOFError(self._dead)
        return line

    def _handshake(self) -> frozenset[str]:
        try:
            line = self._next_line()
        except (TimeoutError, EOFError) as exc:
            raise ProtocolError(f"handshake failed: {exc}") from exc
        try:
            hello = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"handshake is not valid JSON: {line!r}") from exc
        if not isinstance(hello, dict) or "protocol" not in hello:
            raise ProtocolError(f"handshake lacks a protocol field: {line!r}")
        if hello["protocol"] != PROTOCOL_VERSION:
            raise ProtocolError(
                f"protocol version {hello['protocol']!r} not supported "
                f"(want {PROTOCOL_VERSION})"
            )
        caps = hello.get("capabilities", [])
        if not isinstance(caps, list) or not all(isinstance(c, str) for c in caps):
            raise ProtocolError("handshake capabilities must be a list of strings")
        return frozenset(caps)

    def capabilities(self) -> frozenset[str]:
        return self._capabilities

    def _kill(self, reason: str) -> None:
        self._dead = reason
        try:
            self._proc.kill()
            self._proc.wait()
        except OSError:
            pass

    def close(self) -> None:
        if self._proc.poll() is None:
            try:
                self._proc.stdin.close()
                self._proc.wait(timeout=5)
            except (OSError, subprocess.TimeoutExpired):
                self._kill("closed")
        self._dead = self._dead or "closed"

    def _roundtrip(self, request: dict) -> dict | BackendResult:
        """Send one request and return the parsed response dict, or a failure."""
        with self._lock:
            if self._dead is not None:
                return BackendResult.fail(f"backend unavailable: {self._dead}")
            self._next_id += 1
            request = {"id": self._next_id, **request}
            try:
                self._proc.stdin.write(json.dumps(request, allow_nan=False) + "\n")
                self._proc.stdin.flush()
            except (OSError, BrokenPipeError):
                self._kill("backend process closed its input")
                return BackendResult.fail(f"backend unavailable: {self._dead}")
            try:
                line = self._next_line()
            except (TimeoutError, EOFError) as exc:
                return BackendResult.fail(str(exc))
            try:
                resp = json.loads(line)
            except json.JSONDecodeError:
                return BackendResult.fail(f"malformed response line: {line!r}")
            if not isinstance(resp, dict):
                return BackendResult.fail(f"response is not an object: {line!r}")
            if resp.get("id") != request["id"]:
                # response stream out of step with requests; unrecoverable
                self._kill(f"response id {resp.get('id')!r} does not match request {request['id']}")
                return BackendResult.fail(f"backend unavailable: {self._dead}")
            if "error" in resp:
                return BackendResult.fail(f"backend error: {resp['error']}")
            return resp

    def _guarded(self, tag: str, numbers: int, build_request):
        """Capability and payload-size gates, applied before the request
        body is even built (a rejected payload never gets serialized)."""
        if tag not in self._capabilities:
            return BackendResult.fail(f"capability {tag!r} not declared by backend")
        if numbers > MAX_PAYLOAD_NUMBERS:
            return BackendResult.fail(
                f"payload of {numbers} numbers exceeds cap {MAX_PAYLOAD_NUMBERS}"
            )
        return self._roundtrip(build_request())

    def _scalar_op(self, op: str, data) -> BackendResult:
        v = _as_vector(data)
        resp = self._guarded(_OP_CAPABILITY[op], v.size,
                             lambda: {"op": op, "data": v.tolist()})
        if isinstance(resp, BackendResult):
            return resp
        try:
            return BackendResult.ok_value(_decode_number(resp, "value", "hex"))
        except ValueError as exc:
            return BackendResult.fail(str(exc))

    def mean(self, data) -> BackendResult:
        return self._scalar_op("mean", data)

    def std(self, data) -> BackendResult:
        return self._scalar_op("std", data)

    def autocorr(self, data) -> BackendResult:
        return self._scalar_op("autocorr", data)

    def regress(self, x, y, degree: int, intercept: bool,
                method: str = ORTHOGONAL) -> BackendResult:
        xs = _as_vector(x)
        ys = _as_vector(y)
        resp = self._guarded("regress", xs.size + ys.size, lambda: {
            "op": "regress",
            "x": xs.tolist(),
            "y": ys.tolist(),
            "degree": int(degree),
            "intercept": bool(intercept),
            "method": method,
        })
        if isinstance(resp, BackendResult):
            return resp
        try:
            beta = _decode_array(resp, "beta", "beta_hex")
            rsd = _decode_number(resp, "rsd", "rsd_hex")
        except ValueError as exc:
            return BackendResult.fail(str(exc))
        return BackendResult(beta=beta, rsd=rsd)

    def det(self, matrix) -> BackendResult:
        a = np.asarray(matrix, dtype=float)
        resp = self._guarded("det", a.size,
                             lambda: {"op": "det", "matrix": a.tolist()})
        if isinstance(resp, BackendResult):
            return resp
        try:
            return BackendResult.ok_value(_decode_number(resp, "value", "hex"))
        except ValueError as exc:
            return BackendResult.fail(str(exc))

    def eig_sym(self, matrix) -> BackendResult:
        a = np.asarray(matrix, dtype=float)
        resp = self._guarded("eig_sym", a.size,
                             lambda: {"op": "eig", "matrix": a.tolist()})
        if isinstance(resp, BackendResult):
            return resp
        try:
            return BackendResult.ok_values(_decode_array(resp, "values", "values_hex"))
        except ValueError as exc:
            return BackendResult.fail(str(exc))

    def dist(self, family: str, params: dict, x: float) -> BackendResult:
        resp = self._guarded(
            f"dist:{family}", len(params) + 1,
            lambda: {"op": "dist", "family": family, **params, "x": float(x)})
        if isinstance(resp, BackendResult):
            return resp
        try:
            return BackendResult.ok_value(_decode_number(resp, "value", "hex"))
        except ValueError as exc:
            return BackendResult.fail(str(exc))


def make_backend(spec: str) -> Backend:
    """Build a backend from a CLI spec: "host" or exec:"command"."""
    if spec == "host":
        return HostBackend()
    if spec.startswith("exec:"):
        command = spec[len("exec:"):].strip()
        if command.startswith('"') and command.endswith('"') and len(command) >= 2:
            command = command[1:-1]
        if not command:
            raise ValueError("exec backend needs a command line")
        return ExternalBackend(command)
    raise ValueError(f"unknown backend spec {spec!r} (use host or exec:\"cmd\")")
