"""Adiabatic preparation of optically accessible excited states.

A statevector simulator that couples an electronic Hamiltonian to a
fictitious two-level photon mode, ramps the photon frequency and the
light-matter coupling along a parametrized pathway, and thereby carries the
electronic ground state into the lowest bright excited state.  Includes
Jordan-Wigner model builders (two-level, Hubbard chain, molecular integrals
from file), exact and Trotterized propagation, photon-vacuum post-selection,
a tiled unitary-product-state ground-state optimizer, and a quantum-assembly
circuit emitter.
"""

from .pauli import FermionOp, PauliString, PauliSum, commutator, jordan_wigner
from .statevector import (
    StateVector,
    apply_pauli_rotation,
    evolve_exact_step,
    expectation,
    fidelity,
    init_product,
    project_qubit,
)

__all__ = [
    "FermionOp",
    "PauliString",
    "PauliSum",
    "StateVector",
    "apply_pauli_rotation",
    "commutator",
    "evolve_exact_step",
    "expectation",
    "fidelity",
    "init_product",
    "jordan_wigner",
    "project_qubit",
]

__version__ = "0.1.0"
