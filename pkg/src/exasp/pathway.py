"""Parametrized adiabatic schedule and the total-time adequacy estimate.

The pathway ramps the photon frequency linearly, ``w(s) = w_max * s``, while
switching the light-matter coupling on and off with a smooth envelope,
``l(s) = l_max * sin^3(pi s)``.  The envelope vanishes with zero slope at
both endpoints, so the register starts and ends in a bare (uncoupled)
product state; choosing ``w_max ~ 2 * dE`` places the ground/excited avoided
crossing near ``s = 1/2`` where the coupling is maximal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coupling import CoupledSystem, d_hamiltonian_d_s
from .models import (
    BRIGHT_THRESHOLD,
    ElectronicSystem,
    exact_diagonalize,
    find_first_bright_state,
    pauli_matrix_in_sector,
    sector_indices,
    spin_sector_constraints,
)
from .pauli import PauliSum

#: Gap/coupling floor below which a crossing counts as symmetry-decoupled.
DEGENERACY_TOL = 1e-10


@dataclass(frozen=True)
class PathwaySchedule:
    """Schedule hyperparameters plus the discrete step grid ``s_k = k/N``."""

    omega_max: float
    lambda_max: float
    total_time: float
    n_steps: int

    def __post_init__(self):
        if self.omega_max < 0:
            raise ValueError("omega_max must be non-negative")
        if self.total_time <= 0:
            raise ValueError("total_time must be positive")
        if self.n_steps < 1:
            raise ValueError("n_steps must be at least 1")

    @property
    def dt(self) -> float:
        return self.total_time / self.n_steps

    @property
    def s_grid(self) -> np.ndarray:
        """Left-endpoint grid ``k/N`` for ``k = 0..N-1`` used by the propagator."""
        return np.arange(self.n_steps) / self.n_steps

    def _check(self, s: float) -> float:
        if not 0.0 <= s <= 1.0:
            raise ValueError(f"path coordinate {s} outside [0, 1]")
        return float(s)

    def omega(self, s: float) -> float:
        """Linear photon-frequency ramp."""
        return self.omega_max * self._check(s)

    def lambda_(self, s: float) -> float:
        """sin^3 coupling envelope, zero at both endpoints."""
        return self.lambda_max * np.sin(np.pi * self._check(s)) ** 3

    def omega_prime(self, s: float) -> float:
        self._check(s)
        return self.omega_max

    def lambda_prime(self, s: float) -> float:
        s = self._check(s)
        return self.lambda_max * 3.0 * np.pi * np.sin(np.pi * s) ** 2 * np.cos(np.pi * s)


def estimate_omega_max(
    sys: ElectronicSystem,
    polarization,
    n_electrons: int | None = None,
    m_s: float = 0.0,
    threshold: float = BRIGHT_THRESHOLD,
) -> float:
    """Heuristic peak frequency: twice the first bright excitation energy.

    An explicitly configured value always takes precedence over this
    estimate; the estimator is the fallback when none is given.
    """
    e = np.asarray(polarization, dtype=float)
    e = e / np.linalg.norm(e)
    dipole = PauliSum.zero(sys.n_qubits)
    for c in range(3):
        if e[c] != 0.0:
            dipole = dipole + e[c] * sys.dipole[c]
    spectrum = exact_diagonalize(sys, n_electrons, m_s)
    _, gap = find_first_bright_state(spectrum, dipole, threshold)
    return 2.0 * gap


def adiabatic_time_bound(
    cs: CoupledSystem,
    sched: PathwaySchedule,
    target_index: int = 1,
    grid_size: int = 201,
    *,
    n_electrons: int | None = None,
    m_s: float = 0.0,
) -> float:
    """Lower-bound scale for the total evolution time.

    Maximizes ``|<K| dH/ds |J>| / |E_K - E_J|^2`` over a uniform interior
    grid in (0, 1] and over all states K, following the adiabatic state that
    starts at energy-ordered ``target_index`` via maximum-overlap tracking.
    Symmetry-decoupled exact crossings (tiny gap, tiny coupling) are skipped;
    a degenerate pair with non-negligible coupling yields ``inf``.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    constraints = ()
    if n_electrons is not None:
        constraints = spin_sector_constraints(cs.electronic.n_qubits, n_electrons, m_s)
    indices = sector_indices(cs.n_qubits, constraints)

    followed = None
    bound = 0.0
    for i in range(1, grid_size + 1):
        s = i / grid_size
        h = cs.hamiltonian_at(sched.omega(s), sched.lambda_(s))
        w, v = np.linalg.eigh(pauli_matrix_in_sector(h, indices))
        if followed is None:
            if not 0 <= target_index < w.size:
                raise ValueError(f"target_index {target_index} outside spectrum")
            j = target_index
        else:
            j = int(np.argmax(np.abs(v.conj().T @ followed)))
        followed = v[:, j]

        dh = pauli_matrix_in_sector(d_hamiltonian_d_s(cs, sched, s), indices)
        couplings = np.abs(v.conj().T @ (dh @ followed))
        gaps = np.abs(w - w[j])
        for k in range(w.size):
            if k == j:
                continue
            if gaps[k] < DEGENERACY_TOL:
                if couplings[k] < DEGENERACY_TOL:
                    continue  # symmetry-decoupled crossing
                return np.inf
            bound = max(bound, couplings[k] / gaps[k] ** 2)
    return bound
