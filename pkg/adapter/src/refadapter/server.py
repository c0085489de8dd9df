"""stdin-to-stdout serve loop for the audit wire protocol.

The session opens with one JSON handshake line announcing the protocol
version and the declared capabilities, then handles requests strictly
serially: read a line, write a line, flush. Every number is emitted in
two spellings, shortest round-trip decimal plus C99 hexadecimal, so
transport is bit-exact no matter how carefully the peer parses decimals.

A request that cannot be parsed or computed produces a structured error
response ({"id": ..., "error": "..."}) and the session continues; only
end-of-file on stdin ends the process. Responses never contain NaN or
infinity; a non-finite result is reported as an error instead.
"""

from __future__ import annotations

import json
import math
import sys
import warnings

import numpy as np

from . import kernels

__all__ = ["PROTOCOL_VERSION", "main", "serve"]

PROTOCOL_VERSION = 1


def _finite(v: float) -> float:
    if math.isnan(v) or math.isinf(v):
        raise ValueError("non-finite result")
    return v


def _scalar(v: float) -> dict:
    _finite(v)
    return {"value": v, "hex": v.hex()}


def _handle(req: dict) -> dict:
    """Dispatch one parsed request to a kernel; returns the response body."""
    op = req.get("op")
    if op == "mean":
        return _scalar(kernels.mean(req["data"]))
    if op == "std":
        return _scalar(kernels.std(req["data"]))
    if op == "autocorr":
        return _scalar(kernels.autocorr(req["data"]))
    if op == "regress":
        beta, rsd = kernels.regress(req["x"], req["y"], req["degree"],
                                    req["intercept"],
                                    req.get("method", "orthogonal"))
        for b in beta:
            _finite(b)
        _finite(rsd)
        return {
            "beta": beta,
            "beta_hex": [b.hex() for b in beta],
            "rsd": rsd,
            "rsd_hex": rsd.hex(),
        }
    if op == "det":
        return _scalar(kernels.det(req["matrix"]))
    if op == "eig":
        values = kernels.eig_sym(req["matrix"])
        for v in values:
            _finite(v)
        return {"values": values, "values_hex": [v.hex() for v in values]}
    if op == "dist":
        return _scalar(kernels.dist(req["family"], req))
    raise ValueError(f"unsupported op {op!r}")


def _say(stdout, obj: dict) -> None:
    stdout.write(json.dumps(obj, allow_nan=False) + "\n")
    stdout.flush()


def serve(stdin=None, stdout=None) -> None:
    """Run the session until stdin closes."""
    stdin = sys.stdin if stdin is None else stdin
    stdout = sys.stdout if stdout is None else stdout
    _say(stdout, {"protocol": PROTOCOL_VERSION,
                  "capabilities": list(kernels.CAPABILITIES)})
    for line in stdin:
        if not line.strip():
            continue
        try:
            req = json.loads(line)
        except json.JSONDecodeError:
            _say(stdout, {"id": None, "error": "request is not valid JSON"})
            continue
        if not isinstance(req, dict):
            _say(stdout, {"id": None, "error": "request is not an object"})
            continue
        rid = req.get("id")
        try:
            # stock routines warn rather than raise on degenerate input;
            # the non-finite check below is the real gate
            with np.errstate(all="ignore"), warnings.catch_warnings():
                warnings.simplefilter("ignore")
                body = _handle(req)
            _say(stdout, {"id": rid, **body})
        except KeyError as exc:
            _say(stdout, {"id": rid, "error": f"request lacks field {exc.args[0]!r}"})
        except Exception as exc:  # any single request may fail; the session survives
            _say(stdout, {"id": rid, "error": str(exc) or type(exc).__name__})


def main(argv=None) -> int:
    serve()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
