import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from resetlb import qop
from resetlb.dynamics import evolve, steady_state
from resetlb.liouville import (
    GasNoiseParams,
    HamiltonianSpec,
    ResetSpec,
    Superoperator,
    ThermalBathParams,
    assemble,
    bloch_vector,
    build_hamiltonian,
    dephasing_generator,
    gibbs_state,
    local_noise_generator,
    reset_generator,
    reset_lindblad_matrix,
    state_from_bloch,
    thermal_generator,
)
from resetlb.qop import bell_state, ket, projector, random_density, validate_density
from resetlb.verify import apply_master_equation

seeds = st.integers(min_value=0, max_value=2**32 - 1)


# --- Hamiltonians -------------------------------------------------------------


def test_ising_diagonal():
    h = build_hamiltonian(HamiltonianSpec("ising", g=0.7), 2)
    assert np.allclose(h, 0.7 * np.diag([1, -1, -1, 1]))


def test_transverse_ising_eigenvalues():
    h = build_hamiltonian(HamiltonianSpec("ising_transverse", g=1.0, b=1.0), 2)
    want = np.sort([-np.sqrt(5), -1.0, 1.0, np.sqrt(5)])
    assert np.max(np.abs(np.linalg.eigvalsh(h) - want)) < 1e-12


def test_gradient_field_lifts_degeneracy():
    h = build_hamiltonian(HamiltonianSpec("ising_gradient", g=1.0, b=0.5), 3)
    assert np.max(np.abs(h - h.conj().T)) < 1e-14
    gaps = np.diff(np.sort(np.linalg.eigvalsh(h)))
    assert np.all(gaps > 0)


def test_unknown_kind_and_custom_validation():
    with pytest.raises(ValueError):
        HamiltonianSpec("bogus")
    with pytest.raises(ValueError):
        build_hamiltonian(HamiltonianSpec("custom", matrix=np.array([[0, 1], [0, 0]])), 1)


def test_xyz_hermitian_with_field():
    h = build_hamiltonian(HamiltonianSpec("xyz", g=2.5, omega=4.0), 2)
    assert np.max(np.abs(h - h.conj().T)) < 1e-14


# --- local noise and dephasing -------------------------------------------------


def test_local_noise_invalid_params():
    with pytest.raises(ValueError):
        GasNoiseParams(B=-1.0, C=1.0, s=0.5)
    with pytest.raises(ValueError):
        GasNoiseParams(B=1.0, C=0.2, s=0.5)
    with pytest.raises(ValueError):
        GasNoiseParams(B=1.0, C=1.0, s=1.5)


def test_pure_decay_steady_state():
    gen = local_noise_generator(1, GasNoiseParams(B=1.0, C=0.5, s=0.0))
    ss = steady_state(gen)
    assert np.max(np.abs(ss.matrix - np.diag([0.0, 1.0]))) < 1e-10


def test_local_noise_dephasing_special_case():
    a = local_noise_generator(2, GasNoiseParams(B=0.0, C=2 * 0.7, s=0.9)).matrix
    b = dephasing_generator(2, 0.7).matrix
    assert np.max(np.abs(a - b)) < 1e-14


def test_local_noise_trace_preserving(rng):
    gen = local_noise_generator(2, GasNoiseParams(B=0.9, C=1.2, s=0.4))
    for _ in range(100):
        rho = random_density(2, rng)
        assert abs(np.trace(gen.apply(rho))) < 1e-13


@settings(max_examples=10, deadline=None)
@given(st.floats(0.0, 1.0))
def test_local_noise_fixed_point_inversion(s):
    gen = local_noise_generator(1, GasNoiseParams(B=1.0, C=0.8, s=s))
    ss = steady_state(gen)
    inversion = np.trace(ss.matrix @ (np.eye(2) + qop.PAULI["z"]) / 2).real
    assert abs(inversion - s) < 1e-9


def test_dephasing_fixes_diagonals(rng):
    gen = dephasing_generator(2, 1.3)
    rho = np.diag(rng.random(4))
    rho /= np.trace(rho)
    assert np.max(np.abs(gen.apply(rho))) < 1e-14


def test_dephasing_coherence_decay_rate():
    gamma = 0.8
    gen = dephasing_generator(1, gamma)
    rho0 = validate_density(projector(ket("+")))
    ts = np.linspace(0, 2.0, 9)
    res = evolve(gen, rho0, ts)
    for t, st_ in zip(ts, res.states):
        assert abs(st_.matrix[0, 1] - 0.5 * np.exp(-2 * gamma * t)) < 1e-10


# --- reset ---------------------------------------------------------------------


def test_reset_fixed_point_single_qubit():
    gen = reset_generator(1, ResetSpec.pure(2.0, 1, "+"))
    ss = steady_state(gen)
    assert np.max(np.abs(ss.matrix - projector(ket("+")))) < 1e-10


def test_reset_action_on_bell_state():
    r = 1.7
    gen = reset_generator(2, ResetSpec.pure(r, 2, "+"))
    drho = gen.apply(bell_state())
    assert abs(np.trace(drho)) < 1e-13
    assert abs(drho[0, 3] + 2 * r * bell_state()[0, 3]) < 1e-13


def test_reset_rate_zero_is_zero_superoperator():
    gen = reset_generator(2, ResetSpec.pure(0.0, 2, "+"))
    assert np.max(np.abs(gen.matrix)) == 0.0


def test_reset_invalid_state_rejected():
    bad = np.array([[0.8, 0.0], [0.0, 0.4]], dtype=complex)
    with pytest.raises(qop.DensityMatrixError):
        ResetSpec(1.0, (bad,))
    with pytest.raises(ValueError):
        ResetSpec.pure(-1.0, 1, "+")


def test_reset_purity_recovery():
    spec = ResetSpec.mixed(1.0, 2, 0.93, "+")
    assert abs(spec.purity() - 0.93) < 1e-12
    assert abs(ResetSpec.pure(1.0, 1, "1").purity() - 1.0) < 1e-12


def test_bloch_round_trip():
    st_ = state_from_bloch(0.1, -0.2, 0.3)
    assert np.allclose(bloch_vector(st_), [0.1, -0.2, 0.3])
    with pytest.raises(ValueError):
        state_from_bloch(0.5, 0.5, 0.5)


# --- reset Lindblad-form certificate -------------------------------------------


@pytest.mark.parametrize("r", [0.1, 1.0, 10.0])
def test_reset_lindblad_matrix_pure_eigenvalues(r, rng):
    for _ in range(20):
        v = rng.standard_normal(3)
        v *= 0.5 / np.linalg.norm(v)
        evals = np.sort(np.linalg.eigvalsh(reset_lindblad_matrix(tuple(v), r)))
        assert np.max(np.abs(evals - np.sort([r / 8, 0.0, r / 4]))) < 1e-12


def test_reset_lindblad_matrix_maximally_mixed():
    evals = np.linalg.eigvalsh(reset_lindblad_matrix((0.0, 0.0, 0.0), 2.0))
    assert np.max(np.abs(evals - 0.25)) < 1e-14


@settings(max_examples=50, deadline=None)
@given(seeds, st.one_of(st.floats(0.0, 0.499), st.floats(0.501, 0.8)))
def test_reset_lindblad_matrix_psd_iff_in_ball(seed, norm):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(3)
    v *= norm / max(np.linalg.norm(v), 1e-12)
    evals = np.linalg.eigvalsh(reset_lindblad_matrix(tuple(v), 1.0))
    if norm <= 0.5:  # Bloch vector inside the ball: valid reset channel
        assert evals[0] >= -1e-12
    else:
        assert evals[0] < -1e-12


# --- thermal bath ----------------------------------------------------------------


def test_thermal_params_validation():
    with pytest.raises(ValueError):
        ThermalBathParams(gamma=-0.1, beta=1.0)
    with pytest.raises(ValueError):
        ThermalBathParams(gamma=1.0, beta=0.0)


def test_thermal_steady_state_is_gibbs(rng):
    h = build_hamiltonian(HamiltonianSpec("ising_transverse", g=1.0, b=0.3), 2)
    for beta in rng.uniform(0.1, 10.0, 4):
        gen = thermal_generator(h, ThermalBathParams(gamma=0.7, beta=float(beta)))
        ss = steady_state(assemble(h, [gen]))
        assert np.max(np.abs(ss.matrix - gibbs_state(h, beta))) < 1e-8


def test_thermal_zero_coupling_is_zero():
    h = build_hamiltonian(HamiltonianSpec("ising_transverse", g=1.0, b=0.3), 2)
    gen = thermal_generator(h, ThermalBathParams(gamma=0.0, beta=1.0))
    assert np.max(np.abs(gen.matrix)) == 0.0


def test_thermal_rejects_degenerate_hamiltonian():
    h = build_hamiltonian(HamiltonianSpec("ising", g=1.0), 2)  # b = 0 degenerate
    with pytest.raises(ValueError):
        thermal_generator(h, ThermalBathParams(gamma=1.0, beta=1.0))


def test_thermal_quasi_degenerate_grouping():
    """The multipartite gradient-field Hamiltonian splits some levels only at
    second order; the grouped generator still lands on the Gibbs state."""
    h = build_hamiltonian(HamiltonianSpec("ising_gradient", g=15.0, b=0.1), 3)
    with pytest.raises(ValueError):
        thermal_generator(h, ThermalBathParams(gamma=1.0, beta=0.2))
    gen = thermal_generator(h, ThermalBathParams(gamma=1.0, beta=0.2), merge_degenerate=True)
    ss = steady_state(assemble(h, [gen]))
    assert np.max(np.abs(ss.matrix - gibbs_state(h, 0.2))) < 1e-8


# --- assembly --------------------------------------------------------------------


def test_assemble_zero():
    lam = assemble(np.zeros((4, 4), dtype=complex), [])
    assert np.max(np.abs(lam.matrix)) == 0.0


def test_assemble_dimensions():
    h = build_hamiltonian(HamiltonianSpec("ising", g=1.0, omega=1.0), 2)
    lam = assemble(
        h,
        [dephasing_generator(2, 1.0), reset_generator(2, ResetSpec.pure(1.0, 2, "+"))],
    )
    assert lam.matrix.shape == (16, 16)
    with pytest.raises(ValueError):
        assemble(h, [dephasing_generator(1, 1.0)])


def test_assemble_action_matches_direct_application(rng):
    n = 2
    h = build_hamiltonian(HamiltonianSpec("ising", g=0.9, omega=1.3), n)
    noise = GasNoiseParams(B=0.8, C=0.7, s=0.25)
    spec = ResetSpec.pure(1.1, n, "+")
    lam = assemble(h, [local_noise_generator(n, noise), reset_generator(n, spec)])
    for _ in range(100):
        rho = random_density(n, rng)
        want = apply_master_equation(rho, h, noise, spec, n)
        assert np.max(np.abs(lam.apply(rho) - want)) < 1e-12


def test_trace_row_of_assembled_liouvillian_vanishes():
    h = build_hamiltonian(HamiltonianSpec("sxsx", g=2.0, omega=1.0), 2)
    lam = assemble(
        h,
        [
            local_noise_generator(2, GasNoiseParams(B=1.0, C=0.5, s=0.2)),
            reset_generator(2, ResetSpec.pure(0.7, 2, "1")),
        ],
    )
    row = qop.vec(np.eye(4)) @ lam.matrix
    assert np.max(np.abs(row)) < 1e-12


def test_non_trace_preserving_matrix_rejected():
    with pytest.raises(ValueError):
        Superoperator(np.eye(16, dtype=complex), 2)


def test_evolution_preserves_positivity(rng):
    """Complete-positivity smoke test over t in [0, 10/max-rate]."""
    h = build_hamiltonian(HamiltonianSpec("ising", g=2.0, omega=1.0), 2)
    lam = assemble(
        h,
        [
            local_noise_generator(2, GasNoiseParams(B=1.0, C=0.8, s=0.3)),
            reset_generator(2, ResetSpec.mixed(2.0, 2, 0.95, "+")),
        ],
    )
    t_max = 10.0 / 2.0
    for _ in range(3):
        rho0 = validate_density(random_density(2, rng))
        res = evolve(lam, rho0, np.linspace(0, t_max, 8))
        for state in res.states:
            validate_density(state.matrix, tol=1e-9)
