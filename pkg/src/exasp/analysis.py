"""Post-propagation analysis: post-selection, fidelities, eigenvalue scans."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coupling import CoupledSystem
from .models import pauli_matrix_in_sector, sector_indices, spin_sector_constraints
from .pathway import PathwaySchedule
from .statevector import StateVector, init_product, project_qubit


def postselect_vacuum(state: StateVector, photon_qubit: int) -> tuple[StateVector, float]:
    """Project onto the zero-photon sector; returns (state, success probability)."""
    return project_qubit(state, photon_qubit, 0)


@dataclass(frozen=True)
class FidelityReport:
    """Overlap summary of a final state with the electronic target.

    ``fid_raw`` compares against target (x) |0> on the full register;
    ``fid_postselected`` compares the vacuum-projected state against the same
    reference.  ``eps_final``/``eps_final_post`` are the corresponding
    fidelity errors ``1 - fid``.
    """

    fid_raw: float
    fid_postselected: float
    p0: float
    eps_final: float
    eps_final_post: float


def fidelity_report(
    final: StateVector, cs: CoupledSystem, target_electronic: StateVector
) -> FidelityReport:
    """Raw and vacuum-projected fidelities of ``final`` with an electronic target."""
    if target_electronic.n_qubits != cs.electronic.n_qubits:
        raise ValueError("target register does not match the electronic system")
    reference = init_product(target_electronic, 0)
    fid_raw = float(abs(np.vdot(reference.amps, final.amps)) ** 2)
    p0 = float(np.sum(np.abs(final.amps[_vacuum_mask(final, cs.photon_qubit)]) ** 2))
    if p0 > 1e-14:
        projected, _ = project_qubit(final, cs.photon_qubit, 0)
        fid_post = float(abs(np.vdot(reference.amps, projected.amps)) ** 2)
    else:
        fid_post = 0.0
    return FidelityReport(fid_raw=fid_raw, fid_postselected=fid_post, p0=p0,
                          eps_final=1.0 - fid_raw, eps_final_post=1.0 - fid_post)


def _vacuum_mask(state: StateVector, photon_qubit: int) -> np.ndarray:
    return ((np.arange(state.amps.size) >> photon_qubit) & 1) == 0


@dataclass(frozen=True)
class SpectrumPoint:
    """Eigenvalues at one path coordinate plus diabatic labels of the
    maximum-overlap-tracked adiabatic state."""

    s: float
    energies: np.ndarray
    followed_index: int
    followed_energy: float
    overlap_initial: float
    overlap_target: float


def pathway_spectrum(
    cs: CoupledSystem,
    sched: PathwaySchedule,
    n_points: int = 51,
    n_states: int = 8,
    *,
    n_electrons: int | None = None,
    m_s: float = 0.0,
    initial: StateVector | None = None,
    target: StateVector | None = None,
) -> list[SpectrumPoint]:
    """Lowest eigenvalues of H(s) on a uniform s-grid with state tracking.

    The followed adiabatic state starts as the maximum-overlap match of
    ``initial`` (ground (x) |1>, when provided) and is carried across the grid
    by maximum-overlap assignment with the previous point, so it passes
    symmetry-decoupled crossings without switching branches.
    """
    if n_points < 2:
        raise ValueError("n_points must be at least 2")
    constraints = ()
    if n_electrons is not None:
        constraints = spin_sector_constraints(cs.electronic.n_qubits, n_electrons, m_s)
    indices = sector_indices(cs.n_qubits, constraints)

    init_vec = None
    if initial is not None:
        init_vec = initial.amps[indices]
    target_vec = None
    if target is not None:
        target_vec = target.amps[indices]

    followed = None
    points = []
    for s in np.linspace(0.0, 1.0, n_points):
        h = cs.hamiltonian_at(sched.omega(s), sched.lambda_(s))
        w, v = np.linalg.eigh(pauli_matrix_in_sector(h, indices))
        if followed is None:
            j = (int(np.argmax(np.abs(v.conj().T @ init_vec)))
                 if init_vec is not None else 0)
        else:
            j = int(np.argmax(np.abs(v.conj().T @ followed)))
        followed = v[:, j]
        ov_init = (float(abs(np.vdot(init_vec, followed)) ** 2)
                   if init_vec is not None else np.nan)
        ov_target = (float(abs(np.vdot(target_vec, followed)) ** 2)
                     if target_vec is not None else np.nan)
        points.append(SpectrumPoint(
            s=float(s), energies=w[:n_states].copy(), followed_index=j,
            followed_energy=float(w[j]), overlap_initial=ov_init,
            overlap_target=ov_target))
    return points
