"""Electronic model builders and the exact-diagonalization oracle.

Three model families produce an :class:`ElectronicSystem` (qubit Hamiltonian
plus Cartesian dipole operators): a two-level system, an open-boundary
one-dimensional Hubbard chain, and a general molecular Hamiltonian assembled
from one-/two-electron integrals read from file.

Spin-orbital convention for the fermionic models: interleaved, i.e. spatial
orbital ``p`` maps spin-up to qubit ``2p`` and spin-down to qubit ``2p+1``.
This keeps Hubbard on-site terms local; integrals stored in (all-alpha,
all-beta) blocked order are remapped on construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from .pauli import FermionOp, PauliString, PauliSum, jordan_wigner
from .statevector import StateVector

#: Transition dipole moments above this are treated as optically bright.
BRIGHT_THRESHOLD = 1e-6


@dataclass(frozen=True)
class TwoLevelParams:
    """Two-level electronic system with off-diagonal coupling ``g``."""

    epsilon: float
    g: float = 0.0
    mu: float = 1.0

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")


@dataclass(frozen=True)
class HubbardParams:
    """Open-boundary 1D Hubbard chain with nearest-neighbour hopping."""

    n_sites: int
    t: float = 1.0
    u: float = 0.0
    n_electrons: int | None = None
    site_positions: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("n_sites must be >= 1")
        n_el = self.n_electrons if self.n_electrons is not None else self.n_sites
        if not 0 < n_el <= 2 * self.n_sites:
            raise ValueError("n_electrons must lie in (0, 2 * n_sites]")

    @property
    def electrons(self) -> int:
        return self.n_electrons if self.n_electrons is not None else self.n_sites

    @property
    def positions(self) -> np.ndarray:
        if self.site_positions is not None:
            if len(self.site_positions) != self.n_sites:
                raise ValueError("site_positions length must equal n_sites")
            return np.asarray(self.site_positions, dtype=float)
        # lattice constant 1, centered on the chain midpoint
        return np.arange(self.n_sites, dtype=float) - (self.n_sites - 1) / 2.0


@dataclass
class MolecularIntegrals:
    """One- and two-electron integrals in a spatial-orbital basis.

    ``eri`` holds chemist-notation integrals ``(pq|rs)`` with the full 8-fold
    permutational symmetry expanded; ``dipole[c]`` is the one-body integral
    matrix of Cartesian component ``c``.
    """

    n_orbitals: int
    n_electrons: int
    core_energy: float
    h: np.ndarray
    eri: np.ndarray
    dipole: np.ndarray = field(default=None)  # shape (3, n, n)
    ms2: int = 0
    orbsym: tuple[int, ...] | None = None

    def __post_init__(self):
        n = self.n_orbitals
        self.h = np.asarray(self.h, dtype=float)
        self.eri = np.asarray(self.eri, dtype=float)
        if self.dipole is None:
            self.dipole = np.zeros((3, n, n))
        self.dipole = np.asarray(self.dipole, dtype=float)
        if self.h.shape != (n, n) or self.eri.shape != (n, n, n, n):
            raise ValueError("integral array shapes do not match n_orbitals")
        if self.dipole.shape != (3, n, n):
            raise ValueError("dipole array must have shape (3, n, n)")
        if not np.allclose(self.h, self.h.T, atol=1e-10):
            raise ValueError("one-body integrals must be symmetric")
        for c in range(3):
            if not np.allclose(self.dipole[c], self.dipole[c].T, atol=1e-10):
                raise ValueError("dipole integrals must be symmetric")


@dataclass(frozen=True)
class ElectronicSystem:
    """Qubit-encoded electronic Hamiltonian with Cartesian dipole operators.

    ``fermionic`` marks systems whose qubits are interleaved spin-orbitals,
    enabling particle-number/spin sector restriction in the diagonalizer.
    """

    h_e: PauliSum
    dipole: tuple[PauliSum, PauliSum, PauliSum]
    n_qubits: int
    fermionic: bool = False

    def __post_init__(self):
        if not self.h_e.is_hermitian():
            raise ValueError("electronic Hamiltonian must be hermitian")
        for d in self.dipole:
            if not d.is_hermitian():
                raise ValueError("dipole components must be hermitian")
            if d.n_qubits != self.n_qubits:
                raise ValueError("dipole register size mismatch")
        if self.h_e.n_qubits != self.n_qubits:
            raise ValueError("Hamiltonian register size mismatch")


def build_two_level(p: TwoLevelParams) -> ElectronicSystem:
    """One-qubit system ``H = -eps Z + g X`` with dipole ``mu X`` (z-component)."""
    h = PauliSum([PauliString("Z", -p.epsilon), PauliString("X", p.g)])
    zero = PauliSum.zero(1)
    mu_z = PauliSum([PauliString("X", p.mu)])
    return ElectronicSystem(h_e=h, dipole=(zero, zero, mu_z), n_qubits=1)


def _spin_orbital(orbital: int, spin: int) -> int:
    """Interleaved map: (orbital, spin) -> qubit, spin 0 = up, 1 = down."""
    return 2 * orbital + spin


def build_hubbard(p: HubbardParams) -> ElectronicSystem:
    """Jordan-Wigner image of the Hubbard chain on ``2 * n_sites`` qubits.

    The dipole (z-component, stored in the site basis) is
    ``sum_p x_p (n_up(p) + n_dn(p))`` with positions centered on the chain
    midpoint so that the operator is traceless at half filling.
    """
    n_modes = 2 * p.n_sites
    terms: list[FermionOp] = []
    for site in range(p.n_sites - 1):
        for spin in (0, 1):
            a, b = _spin_orbital(site, spin), _spin_orbital(site + 1, spin)
            terms.append(FermionOp([(a, True), (b, False)], -p.t))
            terms.append(FermionOp([(b, True), (a, False)], -p.t))
    for site in range(p.n_sites):
        up, dn = _spin_orbital(site, 0), _spin_orbital(site, 1)
        terms.append(FermionOp([(up, True), (up, False), (dn, True), (dn, False)], p.u))
    h = jordan_wigner(terms, n_modes)

    x = p.positions
    dip_terms = [
        FermionOp([(_spin_orbital(site, spin), True), (_spin_orbital(site, spin), False)],
                  x[site])
        for site in range(p.n_sites) for spin in (0, 1)
    ]
    mu_z = jordan_wigner(dip_terms, n_modes)
    zero = PauliSum.zero(n_modes)
    return ElectronicSystem(h_e=h, dipole=(zero, zero, mu_z),
                            n_qubits=n_modes, fermionic=True)


def build_molecular(m: MolecularIntegrals) -> ElectronicSystem:
    """Qubit Hamiltonian and dipoles from spatial-orbital integrals.

    Uses the standard second-quantized form with chemist-notation two-body
    integrals; the scalar core/nuclear term enters as an identity component.
    """
    n = m.n_orbitals
    n_modes = 2 * n
    terms: list[FermionOp] = []
    for p in range(n):
        for q in range(n):
            if m.h[p, q] == 0.0:
                continue
            for s in (0, 1):
                terms.append(FermionOp(
                    [(_spin_orbital(p, s), True), (_spin_orbital(q, s), False)], m.h[p, q]))
    for p in range(n):
        for q in range(n):
            for r in range(n):
                for s in range(n):
                    v = m.eri[p, q, r, s]
                    if v == 0.0:
                        continue
                    for s1 in (0, 1):
                        for s2 in (0, 1):
                            # 0.5 * (pq|rs) a+_p,s1 a+_r,s2 a_s,s2 a_q,s1
                            terms.append(FermionOp(
                                [(_spin_orbital(p, s1), True), (_spin_orbital(r, s2), True),
                                 (_spin_orbital(s, s2), False), (_spin_orbital(q, s1), False)],
                                0.5 * v))
    h = jordan_wigner(terms, n_modes) + PauliSum.identity(n_modes, m.core_energy)

    dipoles = []
    for c in range(3):
        d_terms = [
            FermionOp([(_spin_orbital(p, s), True), (_spin_orbital(q, s), False)],
                      m.dipole[c, p, q])
            for p in range(n) for q in range(n) for s in (0, 1)
            if m.dipole[c, p, q] != 0.0
        ]
        dipoles.append(jordan_wigner(d_terms, n_modes))
    return ElectronicSystem(h_e=h, dipole=tuple(dipoles),
                            n_qubits=n_modes, fermionic=True)


def number_operator(n_qubits: int) -> PauliSum:
    """Total particle number on an interleaved spin-orbital register."""
    return jordan_wigner([FermionOp([(q, True), (q, False)]) for q in range(n_qubits)],
                         n_qubits)


def sz_operator(n_qubits: int) -> PauliSum:
    """Total S_z (in units of hbar) on an interleaved spin-orbital register."""
    ops = [FermionOp([(q, True), (q, False)], 0.5 if q % 2 == 0 else -0.5)
           for q in range(n_qubits)]
    return jordan_wigner(ops, n_qubits)


# ---------------------------------------------------------------------------
# sector-restricted dense diagonalization
# ---------------------------------------------------------------------------

def sector_indices(n_qubits: int, constraints: Sequence[tuple[int, int]]) -> np.ndarray:
    """Basis indices whose bit count under each mask equals the given value.

    Bits outside all masks are unconstrained, so e.g. a photon qubit stays
    free while electronic occupations are fixed.
    """
    idx = np.arange(2 ** n_qubits, dtype=np.int64)
    keep = np.ones(idx.size, dtype=bool)
    for mask, count in constraints:
        keep &= np.bitwise_count(idx & mask) == count
    return idx[keep]


def spin_sector_constraints(
    n_electronic_qubits: int, n_electrons: int, m_s: float
) -> list[tuple[int, int]]:
    """Constraints fixing ``(N, S_z)`` on an interleaved spin-orbital register."""
    n_up = n_electrons / 2.0 + m_s
    n_dn = n_electrons / 2.0 - m_s
    if n_up != int(n_up) or n_dn != int(n_dn) or n_up < 0 or n_dn < 0:
        raise ValueError(f"no ({n_electrons}, m_s={m_s}) sector on this register")
    up_mask = sum(1 << q for q in range(0, n_electronic_qubits, 2))
    dn_mask = sum(1 << q for q in range(1, n_electronic_qubits, 2))
    return [(up_mask, int(n_up)), (dn_mask, int(n_dn))]


def pauli_matrix_in_sector(op: PauliSum, indices: np.ndarray) -> np.ndarray:
    """Dense matrix of ``op`` projected onto the span of the given basis states.

    Individual Pauli terms may scatter out of the sector (e.g. the XZ..ZX half
    of a hopping term); those contributions cancel in any sector-preserving
    sum and are dropped here, leaving exactly the block of ``op`` on the
    sector when ``op`` commutes with the sector labels.
    """
    dim_full = 2 ** op.n_qubits
    pos = np.full(dim_full, -1, dtype=np.int64)
    pos[indices] = np.arange(indices.size)
    cols = np.arange(indices.size)
    m = np.zeros((indices.size, indices.size), dtype=complex)
    for t in op:
        x_mask, z_mask, n_y = t.masks()
        parity = np.bitwise_count(indices & z_mask) & 1
        phase = t.coeff * (1j) ** n_y * (1.0 - 2.0 * parity)
        rows = pos[indices ^ x_mask]
        inside = rows >= 0
        m[rows[inside], cols[inside]] += phase[inside]
    return m


def exact_diagonalize(
    sys: ElectronicSystem,
    n_electrons: int | None = None,
    m_s: float = 0.0,
    *,
    k: int | None = None,
) -> list[tuple[float, StateVector]]:
    """Eigenpairs of the electronic Hamiltonian, ascending in energy.

    With ``n_electrons`` given (fermionic systems), the diagonalization is
    restricted to the ``(N, S_z = m_s)`` occupation sector; eigenvectors are
    returned embedded in the full register.  ``k`` truncates the list.
    """
    if 2 ** sys.n_qubits > 2 ** 14:
        raise ValueError("register too large for dense diagonalization")
    return diagonalize_operator(sys.h_e, _sector_for(sys, n_electrons, m_s), k=k)


def _sector_for(
    sys: ElectronicSystem, n_electrons: int | None, m_s: float
) -> list[tuple[int, int]]:
    if n_electrons is None:
        return []
    if not sys.fermionic:
        raise ValueError("sector restriction requires a fermionic system")
    return spin_sector_constraints(sys.n_qubits, n_electrons, m_s)


def diagonalize_operator(
    op: PauliSum,
    constraints: Sequence[tuple[int, int]] = (),
    *,
    k: int | None = None,
) -> list[tuple[float, StateVector]]:
    """Dense eigensolve of a hermitian Pauli sum, optionally sector restricted."""
    if not op.is_hermitian():
        raise ValueError("operator must be hermitian")
    indices = sector_indices(op.n_qubits, constraints)
    if indices.size == 0:
        raise ValueError("requested sector is empty")
    m = pauli_matrix_in_sector(op, indices)
    w, v = scipy.linalg.eigh(m)
    if k is not None:
        w, v = w[:k], v[:, :k]
    out = []
    dim_full = 2 ** op.n_qubits
    for i in range(w.size):
        amps = np.zeros(dim_full, dtype=complex)
        amps[indices] = v[:, i]
        out.append((float(w[i]), StateVector(amps, check_norm=False)))
    return out


def transition_dipoles(
    spectrum: Sequence[tuple[float, StateVector]], dipole: PauliSum
) -> np.ndarray:
    """``|<psi_0|mu|psi_k>|`` for every state in the spectrum."""
    from .statevector import apply_pauli

    ground = spectrum[0][1]
    image = np.zeros_like(ground.amps)
    for t in dipole:
        image += apply_pauli(ground, t).amps
    return np.array([abs(np.vdot(sv.amps, image)) for _, sv in spectrum])


def find_first_bright_state(
    spectrum: Sequence[tuple[float, StateVector]],
    dipole: PauliSum,
    threshold: float = BRIGHT_THRESHOLD,
) -> tuple[int, float]:
    """Lowest excited state with ground-state dipole coupling above threshold.

    Returns its index in the spectrum and the excitation energy; dark states
    (including exact degeneracies with negligible coupling) are skipped.
    """
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    moments = transition_dipoles(spectrum, dipole)
    for idx in range(1, len(spectrum)):
        if moments[idx] > threshold:
            return idx, spectrum[idx][0] - spectrum[0][0]
    raise ValueError("no bright state found below the spectrum cutoff")
