#!/usr/bin/env python3
"""Steady-state entanglement regions in the (g, r) plane.

Produces the dephasing toy-model region (with its cut at g = 5 gamma) and
the general-noise gas region.  Usage: python scripts/run_steady_regions.py
"""

import pathlib
import sys

from resetlb.cli import main

HERE = pathlib.Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    pathlib.Path("data").mkdir(exist_ok=True)
    for name in ("toy_model_region", "toy_model_cut", "gas_region"):
        cfg = HERE / "configs" / f"{name}.json"
        rc = main(["steady", "--config", str(cfg), "--no-timestamp"])
        print(f"{name}: exit {rc}")
        if rc:
            sys.exit(rc)
