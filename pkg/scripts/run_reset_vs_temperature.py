#!/usr/bin/env python3
"""Steady-state negativity against reset rate and bath temperature.

Covers the XX model with reset |1> (entanglement at every temperature for
large enough r) and the XYZ model with reset |+> (same behavior with a
generic Hamiltonian).  Usage: python scripts/run_reset_vs_temperature.py
"""

import pathlib
import sys

from resetlb.cli import main

HERE = pathlib.Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    pathlib.Path("data").mkdir(exist_ok=True)
    for name in ("reset_vs_temperature", "xyz_reset_vs_s"):
        rc = main(["steady", "--config", str(HERE / "configs" / f"{name}.json"), "--no-timestamp"])
        print(f"{name}: exit {rc}")
        if rc:
            sys.exit(rc)
