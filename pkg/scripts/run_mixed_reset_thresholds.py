#!/usr/bin/env python3
"""Imperfect reset: the entangled window closes at a finite reset rate once
the reset states are mixed.

Sweeps r for reset purities 1.0, 0.98 and 0.97 on the XYZ model and writes
one combined CSV.  Usage: python scripts/run_mixed_reset_thresholds.py
"""

import pathlib

import numpy as np

from resetlb.dynamics import steady_state
from resetlb.entanglement import negativity
from resetlb.liouville import (
    GasNoiseParams,
    HamiltonianSpec,
    ResetSpec,
    assemble,
    build_hamiltonian,
    local_noise_generator,
    reset_generator,
)

if __name__ == "__main__":
    pathlib.Path("data").mkdir(exist_ok=True)
    h = build_hamiltonian(HamiltonianSpec("xyz", g=2.5, omega=4.0), 2)
    noise = local_noise_generator(2, GasNoiseParams(B=1.0, C=0.5, s=0.1))
    purities = (1.0, 0.98, 0.97)
    rows = []
    for r in np.geomspace(0.5, 2000.0, 120):
        row = [r]
        for p in purities:
            spec = ResetSpec.pure(r, 2, "+") if p >= 1 else ResetSpec.mixed(r, 2, p, "+")
            lam = assemble(h, [noise, reset_generator(2, spec)])
            row.append(negativity(steady_state(lam), (0,)))
        rows.append(row)
    with open("data/mixed_reset_thresholds.csv", "w", newline="\n") as fh:
        fh.write("r," + ",".join(f"negativity_p{p}" for p in purities) + "\n")
        for row in rows:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
    print("wrote data/mixed_reset_thresholds.csv")
