#!/usr/bin/env python3
"""Record the host backend's determinant decisions as the golden file.

Runs the 240-case singular-determinant suite on the host LU backend and
writes src/numaudit/data/det_golden.json: the correct count plus the
case indexes that decided zero. The acceptance suite compares every
fresh run against this file, so regenerate it only after deliberately
changing the elimination kernel, and review the diff.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from numaudit.backend import HostBackend
from numaudit.linalg import run_det_suite

OUT = Path(__file__).resolve().parents[1] / "src" / "numaudit" / "data" / "det_golden.json"


def main() -> int:
    decisions, correct = run_det_suite(HostBackend())
    zero_cases = [d.case.case_index for d in decisions if d.decided_zero]
    payload = {
        "backend": "host",
        "cases": len(decisions),
        "correct": correct,
        "zero_cases": zero_cases,
    }
    OUT.write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {OUT} (correct {correct} / {len(decisions)})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
