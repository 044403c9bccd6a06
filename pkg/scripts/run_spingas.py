#!/usr/bin/env python3
"""Spin-gas ensemble sweep over the exchange probability.

The shipped config uses 5000 steps, long enough for environment collisions
to decohere the zero-exchange ensemble, so the curve vanishes at both
endpoints with a positive hump between.  Usage:

    python scripts/run_spingas.py [runs]
"""

import pathlib
import sys

from resetlb.cli import main

HERE = pathlib.Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    runs = sys.argv[1] if len(sys.argv) > 1 else "1000"
    pathlib.Path("data").mkdir(exist_ok=True)
    rc = main(
        [
            "spingas",
            "--config",
            str(HERE / "configs" / "spingas_sweep.json"),
            "--runs",
            runs,
            "--no-timestamp",
        ]
    )
    print(f"spingas sweep: exit {rc}")
    sys.exit(rc)
