"""Time evolution, steady states and spectra of Liouvillian matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from resetlb import qop
from resetlb.liouville import Superoperator

FULL_EIG_MAX_DIM = 256  # largest D^2 solved by dense eigendecomposition
STATE_TOL = 1e-8  # validation tolerance for evolved states
PSD_TOL = 1e-9  # tolerance for steady-state positivity
RESIDUAL_TOL = 1e-9


class SteadyStateError(RuntimeError):
    """Null-space solve failed: degenerate or missing steady state."""


@dataclass(frozen=True, eq=False)
class EvolutionResult:
    """States on a time grid plus integrator metadata."""

    times: np.ndarray
    states: tuple[qop.DensityMatrix, ...]
    method: str
    step_count: int
    error_estimate: float

    def negativities(self, part=(0,)) -> np.ndarray:
        from resetlb.entanglement import negativity

        return np.array([negativity(st, part) for st in self.states])


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    """Eigenvalues grouped within ``grouping_tol``, sorted by real part
    descending; multiplicities sum to D^2."""

    eigenvalues: tuple[complex, ...]
    multiplicities: tuple[int, ...]
    grouping_tol: float
    raw: np.ndarray

    def __post_init__(self):
        if sum(self.multiplicities) != self.raw.size:
            raise ValueError("multiplicities do not sum to the matrix dimension")
        max_re = max(ev.real for ev in self.eigenvalues)
        if max_re > self.grouping_tol:
            raise ValueError(f"unstable spectrum: max real part {max_re:.3e}")


def evolve(lam: Superoperator, rho0: qop.DensityMatrix, times) -> EvolutionResult:
    """Propagate rho0 through the grid with cached matrix exponentials.

    Each step applies expm(L dt) exactly (to solver precision), so the
    local error per step is far below the 1e-10 contract; the reported
    error estimate is a Richardson comparison of the largest step.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a non-empty 1-D grid")
    if times[0] < 0 or np.any(np.diff(times) < 0):
        raise ValueError("times must be non-decreasing and non-negative")
    if rho0.dim != lam.dim:
        raise ValueError("dimension mismatch between state and generator")
    if not np.all(np.isfinite(lam.matrix)):
        raise ValueError("generator has non-finite entries")

    propagators: dict[float, np.ndarray] = {}

    def propagator(dt: float) -> np.ndarray:
        # snap ulp-level grid jitter onto a cached step size
        for key in propagators:
            if abs(key - dt) <= 1e-12 * max(key, dt):
                return propagators[key]
        propagators[dt] = scipy.linalg.expm(lam.matrix * dt)
        return propagators[dt]

    states = []
    v = qop.vec(np.asarray(rho0.matrix))
    prev_t = 0.0
    for t in times:
        dt = t - prev_t
        if dt > 0:
            v = propagator(dt) @ v
        prev_t = t
        mat = qop.unvec(v)
        mat = (mat + mat.conj().T) / 2.0
        states.append(qop.validate_density(mat, tol=STATE_TOL))

    err = 0.0
    dts = [dt for dt in propagators if dt > 0]
    if dts:
        dt_max = max(dts)
        half = scipy.linalg.expm(lam.matrix * (dt_max / 2.0))
        err = float(np.max(np.abs(half @ half - propagator(dt_max))))
    return EvolutionResult(
        times=times,
        states=tuple(states),
        method="expm",
        step_count=len(times),
        error_estimate=err,
    )


def _null_tol(lam: Superoperator, spectral_radius: float | None = None) -> float:
    if spectral_radius is None:
        # inf-norm upper bound on the spectral radius
        spectral_radius = float(np.max(np.abs(lam.matrix).sum(axis=1)))
    return 1e-10 * max(spectral_radius, 1e-300)


def steady_state(lam: Superoperator, null_tol: float | None = None) -> qop.DensityMatrix:
    """Unique null vector of the Liouvillian as a density matrix.

    Hermitization and trace normalization are applied after the linear
    solve; a positivity failure beyond 1e-9 is reported as an error rather
    than clipped, since it would mask an assembly bug.
    """
    d2 = lam.matrix.shape[0]
    if d2 <= FULL_EIG_MAX_DIM:
        evals, vecs = scipy.linalg.eig(lam.matrix)
        tol = null_tol if null_tol is not None else _null_tol(lam, float(np.max(np.abs(evals))))
        idx = np.flatnonzero(np.abs(evals) <= tol)
        if idx.size == 0:
            raise SteadyStateError("no eigenvalue within tolerance of zero")
        if idx.size > 1:
            raise SteadyStateError(
                f"degenerate null space: {idx.size} eigenvalues within {tol:.2e} of zero"
            )
        v = vecs[:, idx[0]]
    else:
        tol = null_tol if null_tol is not None else _null_tol(lam)
        v = _inverse_iteration(lam.matrix, tol)
    rho = qop.unvec(v)
    rho = (rho + rho.conj().T) / 2.0
    tr = np.trace(rho).real
    if abs(tr) < 1e-14:
        raise SteadyStateError("null vector is traceless; not a state")
    rho = rho / tr
    residual = float(np.linalg.norm(lam.matrix @ qop.vec(rho)))
    if residual > max(RESIDUAL_TOL, 10 * tol):
        raise SteadyStateError(f"steady-state residual {residual:.3e} too large")
    try:
        return qop.validate_density(rho, tol=PSD_TOL)
    except qop.DensityMatrixError as exc:
        raise SteadyStateError(f"steady state failed validation: {exc}") from exc


def _inverse_iteration(mat: np.ndarray, tol: float, n_vectors: int = 2) -> np.ndarray:
    """Shifted inverse iteration targeting 0, with a second vector used to
    detect a degenerate null space."""
    d2 = mat.shape[0]
    shift = tol
    lu = scipy.linalg.lu_factor(mat - shift * np.eye(d2))
    rng = np.random.default_rng(0)
    block = np.empty((d2, n_vectors), dtype=complex)
    block[:, 0] = qop.vec(np.eye(int(round(np.sqrt(d2))))) / np.sqrt(d2)
    for k in range(1, n_vectors):
        block[:, k] = rng.standard_normal(d2) + 1j * rng.standard_normal(d2)
    for _ in range(3):
        block = scipy.linalg.lu_solve(lu, block)
        block, _ = np.linalg.qr(block)
    # Rayleigh quotients on the iterated subspace
    small = block.conj().T @ (mat @ block)
    theta, y = np.linalg.eig(small)
    order = np.argsort(np.abs(theta))
    if abs(theta[order[0]]) > tol:
        raise SteadyStateError("no eigenvalue within tolerance of zero")
    if n_vectors > 1 and abs(theta[order[1]]) <= tol:
        raise SteadyStateError("degenerate null space detected")
    return block @ y[:, order[0]]


def spectrum(lam: Superoperator, grouping_tol: float = 1e-8) -> SpectrumReport:
    """Full Liouvillian spectrum with eigenvalues grouped within tolerance."""
    evals = scipy.linalg.eigvals(lam.matrix)
    order = np.lexsort((evals.imag, evals.real))
    reps: list[complex] = []
    members: list[list[complex]] = []
    for ev in evals[order]:
        if reps:
            dists = np.abs(np.array(reps) - ev)
            k = int(np.argmin(dists))
            if dists[k] <= grouping_tol:
                members[k].append(ev)
                reps[k] = complex(np.mean(members[k]))
                continue
        reps.append(complex(ev))
        members.append([complex(ev)])
    order2 = np.argsort([-r.real for r in reps], kind="stable")
    return SpectrumReport(
        eigenvalues=tuple(reps[i] for i in order2),
        multiplicities=tuple(len(members[i]) for i in order2),
        grouping_tol=grouping_tol,
        raw=evals,
    )


def slowest_decay_rate(report: SpectrumReport) -> float:
    """Smallest-magnitude nonzero decay rate |Re lambda| in the spectrum."""
    rates = [-ev.real for ev in report.eigenvalues if -ev.real > report.grouping_tol]
    if not rates:
        raise ValueError("spectrum has no decaying eigenvalues")
    return min(rates)


def entangling_profile(
    lam_no_reset: Superoperator,
    rho_reset: qop.DensityMatrix,
    t_grid,
    part=(0,),
) -> list[tuple[float, float]]:
    """Negativity of the reset state evolved WITHOUT reset, per grid time.

    Feeding the result to :func:`entangled_reset_window` predicts the reset
    rates r for which the full master equation has an entangled steady
    state, via the intersection with t = c / r.
    """
    result = evolve(lam_no_reset, rho_reset, t_grid)
    negs = result.negativities(part)
    return [(float(t), float(nv)) for t, nv in zip(result.times, negs)]


def entangled_reset_window(
    profile: list[tuple[float, float]],
    c: float = 2.0,
    threshold: float = 1e-6,
) -> tuple[float, float] | None:
    """Map the entangled t-window of a profile to an r-window via r = c / t."""
    ts = [t for t, nv in profile if nv > threshold and t > 0]
    if not ts:
        return None
    return (c / max(ts), c / min(ts))
