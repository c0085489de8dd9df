"""Command-line entry point.

Usage shape: ``audit <suite> [flags]`` with suites stats, dist,
regression, det, spectral, bootstrap, and all. Reports go to standard
output in the chosen format; NA-case notes go to standard error and do
not fail the run. Exit codes: 0 full run, 1 suite-level failure (bad
dataset, oracle error, protocol failure), 2 usage error.

``--deterministic`` pins everything volatile: no timestamps in output
file names and no timing chatter, so two runs with the same flags are
byte-identical.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .backend import Backend, ProtocolError, make_backend
from .bootstrap import BootstrapConfig
from .datasets import GraphSpec
from .linalg import EQUALITY_POLICIES, SINGLE
from .regression import LS_METHODS, ORTHOGONAL
from .report import SuiteReport, render, report_filename
from .suites import (
    resolve_datasets,
    run_bootstrap_suite,
    run_det_suite_report,
    run_dist_suite,
    run_regression_suite,
    run_spectral_suite,
    run_stats_suite,
)

SUITES = ("stats", "dist", "regression", "det", "spectral", "bootstrap")


@dataclass
class AuditConfig:
    """Everything one invocation needs, resolved from flags and environment."""

    suites: tuple[str, ...]
    backend_spec: str = "host"
    dataset_specs: tuple[str, ...] = ()
    seed: int = 0
    resamples: int = 100
    jobs: int = 1
    equality_policy: str = SINGLE
    ls_method: str = ORTHOGONAL
    fmt: str = "md"
    deterministic: bool = False
    out_dir: str | None = None
    graphs: tuple[GraphSpec, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if not self.suites:
            raise ValueError("at least one suite must be selected")


def _parse_graph(text: str) -> GraphSpec:
    """Accept K:m,n (also K(m,n) and m,n) as a graph selector."""
    body = text.strip()
    if body.startswith("K:"):
        body = body[2:]
    elif body.startswith("K(") and body.endswith(")"):
        body = body[2:-1]
    try:
        m_str, n_str = body.split(",")
        return GraphSpec(int(m_str), int(n_str))
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(
            f"graph spec {text!r} is not of the form K:m,n") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--backend", default="host",
                        help='audit target: host or exec:"<command>"')
    common.add_argument("--dataset", action="append", default=[],
                        help="dataset path or builtin:<name>; repeatable; "
                             "builtin:all expands to the suite default")
    common.add_argument("--seed", type=int, default=None,
                        help="RNG seed (fallback: AUDIT_SEED, then 0)")
    common.add_argument("--resamples", type=int, default=100,
                        help="bootstrap resample count")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                        help="worker threads; results do not depend on it")
    common.add_argument("--equality", choices=EQUALITY_POLICIES, default=SINGLE,
                        help="integer-eigenvalue equality policy")
    common.add_argument("--ls-method", choices=LS_METHODS, default=ORTHOGONAL,
                        help="least-squares path for the regression suite")
    common.add_argument("--format", dest="fmt", default="md",
                        choices=("md", "markdown", "csv", "jsonl", "json-lines"),
                        help="report format")
    common.add_argument("--graph", action="append", type=_parse_graph, default=[],
                        metavar="K:m,n", help="spectral graph; repeatable")
    common.add_argument("--out", default=None, metavar="DIR",
                        help="also write each report to DIR")
    common.add_argument("--deterministic", action="store_true",
                        help="byte-identical output: no timestamps, no timing")

    parser = argparse.ArgumentParser(
        prog="audit",
        description="Floating-point accuracy audit harness",
    )
    sub = parser.add_subparsers(dest="suite", required=True)
    for name in (*SUITES, "all"):
        sub.add_parser(name, parents=[common],
                       help=f"run the {name} suite{'s' if name == 'all' else ''}")
    return parser


def _config_from_args(args: argparse.Namespace) -> AuditConfig:
    seed = args.seed
    if seed is None:
        env = os.environ.get("AUDIT_SEED")
        try:
            seed = int(env) if env is not None else 0
        except ValueError:
            raise ValueError(f"AUDIT_SEED must be an integer, got {env!r}") from None
    suites = SUITES if args.suite == "all" else (args.suite,)
    return AuditConfig(
        suites=suites,
        backend_spec=args.backend,
        dataset_specs=tuple(args.dataset),
        seed=seed,
        resamples=args.resamples,
        jobs=args.jobs,
        equality_policy=args.equality,
        ls_method=args.ls_method,
        fmt=args.fmt,
        deterministic=args.deterministic,
        out_dir=args.out,
        graphs=tuple(args.graph),
    )


def _run_suite(name: str, backend: Backend, cfg: AuditConfig):
    if name == "stats":
        return run_stats_suite(backend, resolve_datasets(cfg.dataset_specs, "stats"))
    if name == "dist":
        return run_dist_suite(backend)
    if name == "regression":
        return run_regression_suite(
            backend, resolve_datasets(cfg.dataset_specs, "regression"), cfg.ls_method)
    if name == "det":
        return run_det_suite_report(backend)
    if name == "spectral":
        return run_spectral_suite(backend, cfg.graphs or None, cfg.equality_policy)
    if name == "bootstrap":
        return run_bootstrap_suite(
            backend,
            resolve_datasets(cfg.dataset_specs, "bootstrap"),
            BootstrapConfig(resamples=cfg.resamples, seed=cfg.seed),
            jobs=cfg.jobs,
        )
    raise ValueError(f"unknown suite {name!r}")


def _emit(report: SuiteReport, errors, cfg: AuditConfig) -> None:
    text = render(report, cfg.fmt)
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")
    for note in errors:
        print(f"audit: NA: {note}", file=sys.stderr)
    if cfg.out_dir is not None:
        stamp = None
        if not cfg.deterministic:
            stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%SZ")
        path = Path(cfg.out_dir) / report_filename(report, cfg.fmt, stamp)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
    except ValueError as exc:
        print(f"audit: error: {exc}", file=sys.stderr)
        return 2
    try:
        backend = make_backend(cfg.backend_spec)
    except ValueError as exc:
        print(f"audit: error: {exc}", file=sys.stderr)
        return 2
    except (ProtocolError, OSError) as exc:
        print(f"audit: backend failure: {exc}", file=sys.stderr)
        return 1
    try:
        with backend:
            for index, name in enumerate(cfg.suites):
                if index:
                    sys.stdout.write("\n")
                started = time.monotonic()
                report, errors = _run_suite(name, backend, cfg)
                _emit(report, errors, cfg)
                if not cfg.deterministic:
                    elapsed = time.monotonic() - started
                    print(f"audit: {name} finished in {elapsed:.1f}s", file=sys.stderr)
    except (ProtocolError, ValueError, OSError) as exc:
        print(f"audit: suite failure: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
