#!/usr/bin/env python3
"""Negativity dynamics for weighted-graph initial states U(phi)|++>.

Sweeps the initial phase phi from 0 (product state, overshoots the steady
value) to pi (Bell-equivalent, driven separable before recovering);
one CSV per phi.  Usage: python scripts/run_time_evolution.py
"""

import json
import pathlib
import tempfile

import numpy as np

from resetlb.cli import main

BASE = {
    "model": "gas",
    "unit": "gamma",
    "n_qubits": 2,
    "hamiltonian": {"kind": "ising", "g": 5.0, "omega": 5.0},
    "noise": {"B": 0.0, "C": 2.0, "s": 0.5},
    "reset": {"r": 10.0, "state": "plus"},
    "seed": 1,
}

if __name__ == "__main__":
    outdir = pathlib.Path("data")
    outdir.mkdir(exist_ok=True)
    for phi in np.linspace(0.0, np.pi, 9):
        cfg = dict(BASE, initial_state={"type": "weighted_graph", "phi": float(phi)})
        with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
            json.dump(cfg, fh)
            path = fh.name
        out = outdir / f"evolution_phi_{phi:.3f}.csv"
        rc = main(
            ["evolve", "--config", path, "--out", str(out), "--t-max", "2.0", "--points", "201", "--no-timestamp"]
        )
        print(f"phi={phi:.3f}: exit {rc} -> {out}")
