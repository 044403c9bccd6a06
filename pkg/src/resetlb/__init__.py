"""Dissipative multi-qubit dynamics with a stochastic reset mechanism.

Subpackages:

* :mod:`resetlb.qop` -- dense operator algebra (Paulis, partial trace,
  partial transpose, trace norm, density-matrix validation).
* :mod:`resetlb.liouville` -- Hamiltonians and Lindblad generators (local
  noise, dephasing, thermal bath, reset) assembled into vectorized
  Liouvillian matrices.
* :mod:`resetlb.dynamics` -- time evolution, steady states, spectra.
* :mod:`resetlb.entanglement` -- negativity and its multipartite averages.
* :mod:`resetlb.analytic` -- closed-form steady states, negativities and
  time-dependent solutions used as oracles for the numerical paths.
* :mod:`resetlb.spingas` -- Monte Carlo lattice spin gas with qubit
  exchange, reduced via weighted-graph-state phase matrices.
* :mod:`resetlb.cli` -- command-line front end emitting CSV datasets.
"""

from resetlb.qop import (
    DensityMatrix,
    DensityMatrixError,
    local_pauli,
    partial_trace,
    partial_transpose,
    trace_norm,
    validate_density,
)
from resetlb.liouville import (
    GasNoiseParams,
    HamiltonianSpec,
    ResetSpec,
    Superoperator,
    ThermalBathParams,
    assemble,
    build_hamiltonian,
    dephasing_generator,
    gibbs_state,
    local_noise_generator,
    reset_generator,
    reset_lindblad_matrix,
    thermal_generator,
)
from resetlb.dynamics import evolve, spectrum, steady_state, entangling_profile
from resetlb.entanglement import average_negativity, negativity

__all__ = [
    "DensityMatrix",
    "DensityMatrixError",
    "GasNoiseParams",
    "HamiltonianSpec",
    "ResetSpec",
    "Superoperator",
    "ThermalBathParams",
    "assemble",
    "average_negativity",
    "build_hamiltonian",
    "dephasing_generator",
    "entangling_profile",
    "evolve",
    "gibbs_state",
    "local_noise_generator",
    "local_pauli",
    "negativity",
    "partial_trace",
    "partial_transpose",
    "reset_generator",
    "reset_lindblad_matrix",
    "spectrum",
    "steady_state",
    "thermal_generator",
    "trace_norm",
    "validate_density",
]
