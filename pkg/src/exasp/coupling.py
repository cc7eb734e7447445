"""Coupled electron-photon Hamiltonian on the extended register.

The light-matter Hamiltonian in the dipole/length gauge (Pauli-Fierz form,
truncated to a two-level photon mode encoded on one extra qubit) is

    H(w, l) = H_e (x) I  +  (w/2) (I - Z_ph)  -  l sqrt(w/2) (e.mu) (x) X_ph
              +  (l^2/2) (e.mu)^2 (x) I,

with photon-number and displacement operators mapped as b+b -> (I - Z)/2 and
b+ + b -> X on the photon qubit.  The dipole self-energy term (the square) is
always included; it keeps the operator bounded from below and is a harmless
identity shift for single-qubit models.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .models import ElectronicSystem
from .pauli import PauliString, PauliSum

#: Relative photon-frequency floor below which the analytic d/ds derivative
#: (which carries a 1/sqrt(w) factor) falls back to a finite difference.
OMEGA_GUARD = 1e-8


class CoupledSystem:
    """Electronic system plus polarization-projected dipole and photon qubit."""

    def __init__(self, electronic: ElectronicSystem, polarization: np.ndarray):
        e = np.asarray(polarization, dtype=float)
        if e.shape != (3,):
            raise ValueError("polarization must be a 3-vector")
        norm = float(np.linalg.norm(e))
        if norm <= 0.0:
            raise ValueError("polarization vector must be non-zero")
        self.electronic = electronic
        self.polarization = e / norm
        self.photon_qubit = electronic.n_qubits
        self.n_qubits = electronic.n_qubits + 1

        acc = PauliSum.zero(electronic.n_qubits)
        for c in range(3):
            if self.polarization[c] != 0.0:
                acc = acc + self.polarization[c] * electronic.dipole[c]
        self.projected_dipole = acc
        self.dse = acc * acc

    # Register-extended building blocks; coefficients of omega and lambda are
    # applied in hamiltonian_at, so these are all schedule-independent.

    @cached_property
    def h_e_ext(self) -> PauliSum:
        return self.electronic.h_e.extended(self.n_qubits)

    @cached_property
    def photon_number(self) -> PauliSum:
        n = self.n_qubits
        return PauliSum([PauliString("I" * n, 0.5),
                         PauliString("I" * (n - 1) + "Z", -0.5)])

    @cached_property
    def coupling_base(self) -> PauliSum:
        x_ph = PauliSum([PauliString("I" * (self.n_qubits - 1) + "X")])
        return self.projected_dipole.extended(self.n_qubits) * x_ph

    @cached_property
    def dse_ext(self) -> PauliSum:
        return self.dse.extended(self.n_qubits)

    def hamiltonian_at(self, omega: float, lam: float) -> PauliSum:
        """Coupled Hamiltonian at photon frequency ``omega`` and coupling ``lam``."""
        if omega < 0:
            raise ValueError("photon frequency must be non-negative")
        return (self.h_e_ext
                + omega * self.photon_number
                - lam * np.sqrt(omega / 2.0) * self.coupling_base
                + 0.5 * lam * lam * self.dse_ext)

    def block_scales(self, omega: float, lam: float) -> dict[str, float]:
        """Scalar prefactor of each schedule-independent term block."""
        return {
            "electronic": 1.0,
            "photon": omega,
            "coupling": -lam * np.sqrt(omega / 2.0),
            "dse": 0.5 * lam * lam,
        }

    def blocks(self) -> dict[str, PauliSum]:
        return {
            "electronic": self.h_e_ext,
            "photon": self.photon_number,
            "coupling": self.coupling_base,
            "dse": self.dse_ext,
        }


def couple(sys: ElectronicSystem, polarization) -> CoupledSystem:
    """Extend the register by one photon qubit and cache the projected dipole."""
    return CoupledSystem(sys, polarization)


def d_hamiltonian_d_s(cs: CoupledSystem, sched, s: float) -> PauliSum:
    """Path derivative ``dH/ds`` along the schedule at interior coordinate ``s``.

    Analytic form ``w'(s) dH/dw + l'(s) dH/dl``; the ``1/sqrt(w)`` factor in
    ``dH/dw`` is guarded by a frequency floor, below which a central finite
    difference (step 1e-6, clamped to the domain) is used instead.
    """
    if not 0.0 < s <= 1.0:
        raise ValueError("s must lie in (0, 1]")
    omega, lam = sched.omega(s), sched.lambda_(s)
    omega_min = OMEGA_GUARD * sched.omega_max
    if omega < omega_min:
        h = 1e-6
        lo, hi = max(s - h, 0.0), min(s + h, 1.0)
        h_lo = cs.hamiltonian_at(sched.omega(lo), sched.lambda_(lo))
        h_hi = cs.hamiltonian_at(sched.omega(hi), sched.lambda_(hi))
        return (1.0 / (hi - lo)) * (h_hi - h_lo)

    dh_domega = cs.photon_number - (lam / (2.0 * np.sqrt(2.0 * omega))) * cs.coupling_base
    dh_dlam = -np.sqrt(omega / 2.0) * cs.coupling_base + lam * cs.dse_ext
    return sched.omega_prime(s) * dh_domega + sched.lambda_prime(s) * dh_dlam
