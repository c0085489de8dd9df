"""Suite runners: datasets in, backend calls out, one report per suite.

Each runner returns ``(SuiteReport, errors)`` where errors is a tuple of
"case: reason" strings for cases that scored NA; the caller decides
where to surface them (the CLI sends them to standard error). NA never
aborts a suite.
"""

from __future__ import annotations

from .bootstrap import STATISTICS, BootstrapConfig, certified_stat, stability
from .datasets import (
    Dataset,
    REGRESSION_DATASETS,
    STATS_DATASETS,
    distribution_cases,
    graph_cases,
    load_builtin,
    resolve_dataset,
)
from .linalg import SINGLE, SpectralScore, run_det_suite, run_spectral_case
from .metric import score
from .regression import ORTHOGONAL, audit_regression
from .report import Cell, SuiteReport, float_cell, lre_cell, stability_cell, text_cell

__all__ = [
    "BOOTSTRAP_DEFAULT_DATASETS",
    "default_dataset_names",
    "resolve_datasets",
    "run_bootstrap_suite",
    "run_det_suite_report",
    "run_dist_suite",
    "run_regression_suite",
    "run_spectral_suite",
    "run_stats_suite",
]

# the resampling study covers the real-world-style sets; the pattern
# recipes are reachable by explicit --dataset selection
BOOTSTRAP_DEFAULT_DATASETS = (
    "pidigits", "lottery-synth", "lew-synth", "mavro-synth", "michelso-synth",
)

_SUITE_DEFAULTS = {
    "stats": STATS_DATASETS,
    "bootstrap": BOOTSTRAP_DEFAULT_DATASETS,
    "regression": REGRESSION_DATASETS,
}


def default_dataset_names(suite: str) -> tuple[str, ...]:
    return _SUITE_DEFAULTS.get(suite, ())


def resolve_datasets(specs, suite: str) -> list[Dataset]:
    """Expand CLI dataset specs; empty or builtin:all means the suite default."""
    names = default_dataset_names(suite)
    if not specs:
        return [load_builtin(n) for n in names]
    out: list[Dataset] = []
    for spec in specs:
        if spec == "builtin:all":
            out.extend(load_builtin(n) for n in names)
        else:
            try:
                out.append(resolve_dataset(spec))
            except KeyError as exc:
                # surface unknown-name lookups as plain usage problems
                raise ValueError(exc.args[0]) from None
    return out


def _na_cell(note: str) -> tuple[Cell, str]:
    return text_cell("NA"), note


def run_stats_suite(backend, datasets) -> tuple[SuiteReport, tuple[str, ...]]:
    """Mean, standard deviation, and lag-1 correlation LREs per dataset."""
    columns = ("mean", "std", "autocorr")
    fns = {"mean": backend.mean, "std": backend.std, "autocorr": backend.autocorr}
    case_ids, rows, errors = [], [], []
    for ds in datasets:
        cells = []
        for stat in STATISTICS:
            try:
                cert = certified_stat(ds, stat)
            except ValueError as exc:
                cell, note = _na_cell(f"{ds.name}: {exc}")
                errors.append(note)
                cells.append(cell)
                continue
            res = fns[stat](ds.data)
            if res.error is not None:
                cell, note = _na_cell(f"{ds.name}: {stat}: {res.error}")
                errors.append(note)
                cells.append(cell)
                continue
            cells.append(lre_cell(score(res.value, cert)))
        case_ids.append(ds.name)
        rows.append(tuple(cells))
    report = SuiteReport(
        suite="stats",
        backend_id=backend.backend_id,
        columns=columns,
        case_ids=tuple(case_ids),
        rows=tuple(rows),
        summary=(("datasets", str(len(case_ids))),),
    )
    return report, tuple(errors)


def run_bootstrap_suite(backend, datasets, cfg: BootstrapConfig,
                        jobs: int = 1) -> tuple[SuiteReport, tuple[str, ...]]:
    """Stability study: base LRE with s_lre in parentheses, per statistic."""
    columns = ("mean", "std", "autocorr")
    case_ids, rows, errors = [], [], []
    for ds in datasets:
        cells = []
        for stat in STATISTICS:
            try:
                st = stability(ds, stat, backend, cfg, jobs=jobs)
            except ValueError as exc:
                cell, note = _na_cell(f"{ds.name}: {stat}: {exc}")
                errors.append(note)
                cells.append(cell)
                continue
            for index, reason in st.skipped:
                errors.append(f"{ds.name}: {stat}: resample {index} skipped: {reason}")
            cells.append(stability_cell(st.base_score, st.s_lre))
        case_ids.append(ds.name)
        rows.append(tuple(cells))
    report = SuiteReport(
        suite="bootstrap",
        backend_id=backend.backend_id,
        columns=columns,
        case_ids=tuple(case_ids),
        rows=tuple(rows),
        summary=(
            ("datasets", str(len(case_ids))),
            ("resamples", str(cfg.resamples)),
            ("seed", str(cfg.seed)),
        ),
    )
    return report, tuple(errors)


def run_dist_suite(backend, cases=None) -> tuple[SuiteReport, tuple[str, ...]]:
    """Distribution and quantile table: certified vs computed, scored."""
    if cases is None:
        cases = distribution_cases()
    columns = ("certified", "computed", "lre")
    case_ids, rows, errors = [], [], []
    for case in cases:
        res = backend.dist(case.family, case.param_dict(), case.input)
        if res.error is not None:
            errors.append(f"{case.case_id}: {res.error}")
            row = (float_cell(case.certified), text_cell("NA"), text_cell("NA"))
        else:
            s = score(res.value, case.certified)
            row = (float_cell(case.certified), float_cell(res.value), lre_cell(s))
        case_ids.append(case.case_id)
        rows.append(row)
    report = SuiteReport(
        suite="dist",
        backend_id=backend.backend_id,
        columns=columns,
        case_ids=tuple(case_ids),
        rows=tuple(rows),
        summary=(("cases", str(len(case_ids))),),
    )
    return report, tuple(errors)


def run_regression_suite(backend, datasets,
                         method: str = ORTHOGONAL) -> tuple[SuiteReport, tuple[str, ...]]:
    """Worst-coefficient and residual-deviation LREs per dataset."""
    columns = ("min_beta_lre", "rsd_lre", "note")
    case_ids, rows, errors = [], [], []
    for ds in datasets:
        result = audit_regression(ds, backend, method)
        note = result.error or ""
        if result.error is not None:
            errors.append(f"{ds.name}: {result.error}")
        case_ids.append(ds.name)
        rows.append((
            lre_cell(result.min_beta_lre),
            lre_cell(result.rsd_lre),
            text_cell(note),
        ))
    report = SuiteReport(
        suite="regression",
        backend_id=backend.backend_id,
        columns=columns,
        case_ids=tuple(case_ids),
        rows=tuple(rows),
        summary=(("method", method), ("datasets", str(len(case_ids)))),
    )
    return report, tuple(errors)


def run_det_suite_report(backend) -> tuple[SuiteReport, tuple[str, ...]]:
    """All 240 singular-determinant decisions plus the correct count."""
    decisions, correct = run_det_suite(backend)
    columns = ("det", "decided_zero")
    case_ids, rows, errors = [], [], []
    evaluated = 0
    for d in decisions:
        case_ids.append(f"det[j={d.case.j},k={d.case.k}]")
        if d.error is not None:
            errors.append(f"{case_ids[-1]}: {d.error}")
            rows.append((text_cell("NA"), text_cell("NA")))
            continue
        evaluated += 1
        rows.append((
            float_cell(d.computed_det),
            Cell("zero" if d.decided_zero else "nonzero", raw=d.decided_zero),
        ))
    report = SuiteReport(
        suite="det",
        backend_id=backend.backend_id,
        columns=columns,
        case_ids=tuple(case_ids),
        rows=tuple(rows),
        summary=(
            ("correct", f"{correct} / {len(decisions)}"),
            ("evaluated", str(evaluated)),
        ),
    )
    return report, tuple(errors)


def _pct_cell(p: float | None) -> Cell:
    if p is None:
        return text_cell("NA")
    return Cell(f"{p:.1f}", raw=p)


def run_spectral_suite(backend, graphs=None,
                       equality_policy: str = SINGLE) -> tuple[SuiteReport, tuple[str, ...]]:
    """Seven spectrum quantities per complete bipartite graph."""
    if graphs is None:
        graphs = graph_cases()
    columns = ("m", "n", "l1", "l_mn", "l_S", "l_n", "l_m", "pct_N", "pct_M")
    case_ids, rows, errors = [], [], []
    for spec in graphs:
        result = run_spectral_case(spec, backend, equality_policy)
        case_ids.append(spec.label)
        if result.error is not None:
            errors.append(f"{spec.label}: {result.error}")
            rows.append((
                Cell(str(spec.m), raw=spec.m), Cell(str(spec.n), raw=spec.n),
                *[text_cell("NA")] * 7,
            ))
            continue
        sc: SpectralScore = result.score
        rows.append((
            Cell(str(spec.m), raw=spec.m),
            Cell(str(spec.n), raw=spec.n),
            lre_cell(sc.l1),
            lre_cell(sc.l_mn),
            lre_cell(sc.l_s),
            lre_cell(sc.l_n),
            lre_cell(sc.l_m),
            _pct_cell(sc.pct_n),
            _pct_cell(sc.pct_m),
        ))
    report = SuiteReport(
        suite="spectral",
        backend_id=backend.backend_id,
        columns=columns,
        case_ids=tuple(case_ids),
        rows=tuple(rows),
        summary=(("equality_policy", equality_policy), ("graphs", str(len(case_ids)))),
    )
    return report, tuple(errors)
