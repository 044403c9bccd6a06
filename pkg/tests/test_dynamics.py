import numpy as np
import pytest

import resetlb.dynamics as dyn
from resetlb import analytic
from resetlb.dynamics import (
    SteadyStateError,
    entangled_reset_window,
    entangling_profile,
    evolve,
    slowest_decay_rate,
    spectrum,
    steady_state,
)
from resetlb.entanglement import negativity
from resetlb.liouville import (
    GasNoiseParams,
    HamiltonianSpec,
    ResetSpec,
    Superoperator,
    ThermalBathParams,
    assemble,
    build_hamiltonian,
    dephasing_generator,
    local_noise_generator,
    reset_generator,
    thermal_generator,
)
from resetlb.qop import ket, projector, random_density, validate_density


def dephasing_ising_reset(g, gamma, om, r):
    h = build_hamiltonian(HamiltonianSpec("ising", g=g, omega=om), 2)
    gens = [dephasing_generator(2, gamma)]
    if r > 0:
        gens.append(reset_generator(2, ResetSpec.pure(r, 2, "+")))
    return assemble(h, gens)


# --- evolve -------------------------------------------------------------------


def test_evolve_zero_generator_is_constant(rng):
    lam = Superoperator(np.zeros((16, 16), dtype=complex), 2)
    rho0 = validate_density(random_density(2, rng))
    res = evolve(lam, rho0, np.linspace(0, 3, 7))
    for state in res.states:
        assert np.max(np.abs(state.matrix - rho0.matrix)) < 1e-14


def test_evolve_input_validation(rng):
    lam = dephasing_ising_reset(1.0, 1.0, 0.0, 1.0)
    rho0 = validate_density(random_density(2, rng))
    with pytest.raises(ValueError):
        evolve(lam, rho0, [1.0, 0.5])
    with pytest.raises(ValueError):
        evolve(lam, rho0, [-1.0, 0.5])
    with pytest.raises(ValueError):
        evolve(lam, validate_density(random_density(1, rng)), [0.0, 1.0])


def test_evolve_nonuniform_grid_consistent(rng):
    """Stepping through an irregular grid equals direct jumps to each time."""
    lam = dephasing_ising_reset(2.0, 1.0, 1.5, 3.0)
    rho0 = validate_density(random_density(2, rng))
    grid = np.array([0.0, 0.3, 0.3, 1.0, 1.7])
    res = evolve(lam, rho0, grid)
    for t, state in zip(grid, res.states):
        direct = evolve(lam, rho0, [float(t)]).states[-1]
        assert np.max(np.abs(state.matrix - direct.matrix)) < 1e-11


def test_evolve_trace_stays_one(rng):
    lam = dephasing_ising_reset(2.0, 1.0, 1.5, 3.0)
    res = evolve(lam, validate_density(random_density(2, rng)), np.linspace(0, 4, 11))
    for state in res.states:
        assert abs(np.trace(state.matrix) - 1.0) < 1e-10
    assert res.error_estimate < 1e-10


def test_product_start_overshoots_steady_value():
    """An initial product state first overshoots the steady negativity."""
    lam = dephasing_ising_reset(5.0, 1.0, 5.0, 10.0)
    rho0 = validate_density(projector(ket("++")))
    res = evolve(lam, rho0, np.linspace(0, 6.0, 121))
    negs = res.negativities()
    n_steady = negativity(steady_state(lam), (0,))
    assert negs[0] < 1e-12
    assert negs.max() > n_steady + 1e-3
    assert abs(negs[-1] - n_steady) < 1e-6


def test_entangled_start_hits_zero_then_recovers():
    """A maximally entangled start is driven separable before the steady
    value is approached from below."""
    lam = dephasing_ising_reset(5.0, 1.0, 5.0, 10.0)
    u = np.diag([1.0, 1.0, 1.0, np.exp(1j * np.pi)])
    rho0 = validate_density(projector(u @ ket("++")))
    res = evolve(lam, rho0, np.linspace(0, 6.0, 121))
    negs = res.negativities()
    n_steady = negativity(steady_state(lam), (0,))
    assert negs[0] > 0.49
    assert negs.min() < 1e-9
    i_min = int(np.argmin(negs))
    # no appreciable overshoot after the separable dip
    assert np.all(negs[i_min:] <= n_steady + 1e-4)
    assert abs(negs[-1] - n_steady) < 1e-6


# --- steady state ----------------------------------------------------------------


def test_steady_no_reset_is_thermal_product():
    s = 0.3
    h = build_hamiltonian(HamiltonianSpec("ising", g=1.2, omega=0.9), 2)
    lam = assemble(h, [local_noise_generator(2, GasNoiseParams(B=1.0, C=0.5, s=s))])
    ss = steady_state(lam)
    want = np.diag([s**2, s * (1 - s), s * (1 - s), (1 - s) ** 2])
    assert np.max(np.abs(ss.matrix - want)) < 1e-10


def test_steady_dephasing_reset_antidiagonal_value():
    g, gamma, r = 5.0, 1.0, 10.0
    lam = dephasing_ising_reset(g, gamma, 0.0, r)
    ss = steady_state(lam)
    want = r**2 * (r + gamma) / (4 * (r + 2 * gamma) * (2 * g**2 + (r + gamma) * (r + 2 * gamma)))
    assert abs(ss.matrix[0, 3] - want) < 1e-12
    assert abs(ss.matrix[1, 2] - want) < 1e-12
    assert np.max(np.abs(np.diag(ss.matrix) - 0.25)) < 1e-12


def test_steady_xx_reset_one_matches_closed_form(rng):
    for _ in range(5):
        B = rng.uniform(0.2, 2)
        s = rng.uniform(0, 1)
        g = rng.uniform(0.1, 3)
        om = rng.uniform(0, 3)
        r = rng.uniform(0.1, 5)
        h = build_hamiltonian(HamiltonianSpec("sxsx", g=g, omega=om), 2)
        lam = assemble(
            h,
            [
                local_noise_generator(2, GasNoiseParams(B, B / 2, s)),
                reset_generator(2, ResetSpec.pure(r, 2, "1")),
            ],
        )
        want, _ = analytic.xx_steady_with_reset(B, s, g, om, r)
        assert np.max(np.abs(steady_state(lam).matrix - want.matrix)) < 1e-10


def test_steady_degenerate_null_space_raises():
    lam = Superoperator(np.zeros((16, 16), dtype=complex), 2)
    with pytest.raises(SteadyStateError, match="degenerate"):
        steady_state(lam)


def test_steady_missing_null_vector_raises():
    # an impossibly tight tolerance leaves no eigenvalue "at zero"
    lam = dephasing_ising_reset(1.0, 1.0, 0.0, 1.0)
    with pytest.raises(SteadyStateError, match="no eigenvalue"):
        steady_state(lam, null_tol=1e-30)


def test_steady_unitary_only_model_is_degenerate():
    h = build_hamiltonian(HamiltonianSpec("ising", g=1.0, omega=1.0), 2)
    with pytest.raises(SteadyStateError):
        steady_state(assemble(h, []))


def test_inverse_iteration_path_matches_dense(monkeypatch):
    lam = dephasing_ising_reset(3.0, 1.0, 2.0, 4.0)
    dense = steady_state(lam)
    monkeypatch.setattr(dyn, "FULL_EIG_MAX_DIM", 8)
    iterative = steady_state(lam)
    assert np.max(np.abs(dense.matrix - iterative.matrix)) < 1e-10


def test_inverse_iteration_detects_degeneracy(monkeypatch):
    monkeypatch.setattr(dyn, "FULL_EIG_MAX_DIM", 8)
    lam = Superoperator(np.zeros((16, 16), dtype=complex), 2)
    with pytest.raises(SteadyStateError):
        steady_state(lam, null_tol=1e-12)


@pytest.mark.slow
def test_six_qubit_steady_state_product_form():
    """Scope boundary: 4096^2 Liouvillian through the inverse-iteration
    path.  Without couplings the per-site dephasing + reset generators act
    independently, so the steady state is the product of single-qubit
    steady states with coherence r / (2 (r + 2 gamma))."""
    gamma, r, n = 0.5, 2.0, 6
    lam = assemble(
        None,
        [dephasing_generator(n, gamma), reset_generator(n, ResetSpec.pure(r, n, "+"))],
        n=n,
    )
    ss = steady_state(lam)
    c = r / (2 * (r + 2 * gamma))
    single = np.array([[0.5, c], [c, 0.5]], dtype=complex)
    want = single
    for _ in range(n - 1):
        want = np.kron(want, single)
    assert np.max(np.abs(ss.matrix - want)) < 1e-9


def test_evolution_converges_to_steady_state(rng):
    lam = dephasing_ising_reset(2.0, 1.0, 1.0, 3.0)
    report = spectrum(lam)
    t_conv = 40.0 / slowest_decay_rate(report)
    ss = steady_state(lam)
    rho0 = validate_density(random_density(2, rng))
    res = evolve(lam, rho0, [0.0, t_conv])
    assert np.max(np.abs(res.states[-1].matrix - ss.matrix)) < 1e-6


# --- spectrum ---------------------------------------------------------------------


def test_spectrum_zero_generator():
    lam = Superoperator(np.zeros((16, 16), dtype=complex), 2)
    report = spectrum(lam)
    assert report.eigenvalues == (0j,)
    assert report.multiplicities == (16,)


def test_spectrum_stability_and_trace_sum():
    lam = dephasing_ising_reset(1.7, 1.0, 0.8, 2.3)
    report = spectrum(lam)
    assert max(ev.real for ev in report.eigenvalues) <= report.grouping_tol
    assert abs(np.sum(report.raw) - np.trace(lam.matrix)) < 1e-8


def test_spectrum_matches_printed_list():
    g, gamma, om, r = 1.0, 1.0, 1.0, 2.0
    report = spectrum(dephasing_ising_reset(g, gamma, om, r))
    got = sorted(report.raw, key=lambda z: (round(z.real, 8), round(z.imag, 8)))
    pred = []
    for ev, mult in analytic.dephasing_ising_reset_spectrum(g, gamma, om, r):
        pred.extend([ev] * mult)
    pred = sorted(pred, key=lambda z: (round(z.real, 8), round(z.imag, 8)))
    assert np.max(np.abs(np.array(got) - np.array(pred))) < 1e-8
    assert sorted(report.multiplicities) == [1, 1, 1, 1, 2, 2, 2, 2, 2, 2]


# --- entangling-time profile -------------------------------------------------------


def test_entangling_profile_starts_at_zero():
    h = build_hamiltonian(HamiltonianSpec("ising_transverse", g=10.0, b=0.1), 2)
    lam0 = assemble(h, [thermal_generator(h, ThermalBathParams(1.0, 1000.0))])
    reset_state = validate_density(projector(ket("++")))
    profile = entangling_profile(lam0, reset_state, np.linspace(0.0, 1.0, 21))
    assert profile[0][1] < 1e-12
    assert max(nv for _, nv in profile) > 1e-3  # entangling at intermediate times


def test_entangling_window_predicts_entangled_rates():
    h = build_hamiltonian(HamiltonianSpec("ising_transverse", g=10.0, b=0.1), 2)
    thermal = thermal_generator(h, ThermalBathParams(1.0, 1000.0))
    lam0 = assemble(h, [thermal])
    reset_state = validate_density(projector(ket("++")))
    profile = entangling_profile(lam0, reset_state, np.linspace(0.0, 2.0, 81))
    window = entangled_reset_window(profile, c=2.0)
    assert window is not None
    r_lo, r_hi = window
    hits = []
    for r in np.linspace(max(1.0, r_lo), min(r_hi, 60.0), 8):
        lam = assemble(h, [thermal, reset_generator(2, ResetSpec.pure(float(r), 2, "+"))])
        hits.append(negativity(steady_state(lam), (0,)) > 1e-6)
    assert any(hits)
