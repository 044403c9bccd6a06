#!/usr/bin/env python3
"""Poisson-weighted multipartite measures against the reset rate, for the
gas-type (pairwise Ising + dephasing) and strongly coupled (gradient-field
Ising + thermal bath) models with particle number fluctuating over 2..5.

Usage: python scripts/run_measures.py
"""

import pathlib
import sys

from resetlb.cli import main

HERE = pathlib.Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    pathlib.Path("data").mkdir(exist_ok=True)
    for name in ("measures_gas", "measures_thermal"):
        rc = main(["measures", "--config", str(HERE / "configs" / f"{name}.json"), "--no-timestamp"])
        print(f"{name}: exit {rc}")
        if rc:
            sys.exit(rc)
