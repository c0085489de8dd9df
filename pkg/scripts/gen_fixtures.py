#!/usr/bin/env python3
"""Regenerate the bundled .strd fixtures under src/numaudit/data/.

The output is committed; rerunning this script must be byte-identical.
Requires mpmath (test extra) for the pi digits.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from numaudit.datasets import Dataset, _gen_michelso, _gen_norris, save_strd
from numaudit.oracle import certify_stats

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "numaudit" / "data"


def gen_pidigits() -> Dataset:
    import mpmath as mp

    # 15 guard digits so truncating to 5000 cannot be bitten by rounding
    # of the last printed digit
    mp.mp.dps = 5020
    digits = mp.nstr(mp.pi, 5015).replace(".", "")[:5000]
    assert len(digits) == 5000 and digits[:6] == "314159"
    data = np.array([float(d) for d in digits])
    return Dataset("pidigits", "low", data, certified=certify_stats(data))


def main() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    for ds in (gen_pidigits(), _gen_michelso(), _gen_norris()):
        out = DATA_DIR / f"{ds.name}.strd"
        save_strd(ds, out)
        print(f"wrote {out} ({ds.n} rows)")


if __name__ == "__main__":
    main()
