"""Statevector engine tests.

The exact-step oracle is a dense eigendecomposition of the Hamiltonian
matrix, kept well below the matrix-free code path it certifies.
"""

import numpy as np
import pytest
import scipy.linalg

from exasp.pauli import PauliString, PauliSum
from exasp.statevector import (
    CompiledPauliSum,
    KrylovConvergenceError,
    ProjectionImpossibleError,
    StateVector,
    apply_pauli,
    apply_pauli_rotation,
    evolve_exact_step,
    expectation,
    fidelity,
    init_product,
    load_amplitudes,
    outcome_probability,
    project_qubit,
    save_amplitudes,
)


def dense_evolve(state: StateVector, h: PauliSum, dt: float) -> np.ndarray:
    w, v = np.linalg.eigh(h.to_matrix())
    return v @ (np.exp(-1j * dt * w) * (v.conj().T @ state.amps))


def random_state(rng, n) -> StateVector:
    amps = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    return StateVector(amps / np.linalg.norm(amps), check_norm=False)


def random_hermitian_sum(rng, n, n_terms=8) -> PauliSum:
    terms = []
    for _ in range(n_terms):
        ops = "".join(rng.choice(list("IXYZ"), size=n))
        terms.append(PauliString(ops, rng.normal()))
    return PauliSum(terms, n_qubits=n)


# ---------------------------------------------------------------------------
# construction and products
# ---------------------------------------------------------------------------

def test_basis_state_and_norm_check():
    s = StateVector.basis_state(2, 3)
    assert s.amps[3] == 1.0
    with pytest.raises(ValueError):
        StateVector(np.array([1.0, 1.0], dtype=complex))
    with pytest.raises(ValueError):
        StateVector(np.ones(3, dtype=complex))


def test_init_product_photon_is_most_significant():
    zero = StateVector.basis_state(1, 0)
    s = init_product(zero, 1)
    np.testing.assert_allclose(s.amps, [0, 0, 1, 0])

    plus = StateVector(np.array([1, 1]) / np.sqrt(2))
    s = init_product(plus, 0)
    np.testing.assert_allclose(s.amps, [1 / np.sqrt(2), 1 / np.sqrt(2), 0, 0])


def test_init_product_rejects_unnormalized():
    bad = StateVector.basis_state(1, 0)
    bad.amps = bad.amps * 2.0
    with pytest.raises(ValueError):
        init_product(bad, 1)


def test_apply_pauli_matches_dense():
    rng = np.random.default_rng(23)
    for _ in range(20):
        n = int(rng.integers(1, 4))
        ops = "".join(rng.choice(list("IXYZ"), size=n))
        p = PauliString(ops, complex(rng.normal(), rng.normal()))
        s = random_state(rng, n)
        np.testing.assert_allclose(apply_pauli(s, p).amps, p.to_matrix() @ s.amps, atol=1e-12)


# ---------------------------------------------------------------------------
# rotations
# ---------------------------------------------------------------------------

def test_rotation_trivial_cases():
    zero = StateVector.basis_state(1, 0)
    out = apply_pauli_rotation(zero, PauliString("X"), np.pi / 2)
    np.testing.assert_allclose(out.amps, [0, -1j], atol=1e-12)
    out = apply_pauli_rotation(zero, PauliString("X"), 0.0)
    np.testing.assert_allclose(out.amps, zero.amps)


def test_rotation_xx_closed_form():
    theta = 0.3
    s = StateVector.basis_state(2, 0)
    out = apply_pauli_rotation(s, PauliString("XX"), theta)
    expected = np.array([np.cos(theta), 0, 0, -1j * np.sin(theta)])
    np.testing.assert_allclose(out.amps, expected, atol=1e-12)
    # dense matrix-exponential oracle
    dense = scipy.linalg.expm(-1j * theta * PauliString("XX").to_matrix()) @ s.amps
    np.testing.assert_allclose(out.amps, dense, atol=1e-12)


def test_rotation_norm_preservation():
    rng = np.random.default_rng(29)
    s = random_state(rng, 4)
    for _ in range(1000):
        ops = "".join(rng.choice(list("IXYZ"), size=4))
        s = apply_pauli_rotation(s, PauliString(ops), rng.normal())
    assert abs(s.norm() - 1.0) < 1e-12


def test_rotation_folds_real_coefficient():
    s = StateVector.basis_state(1, 0)
    a = apply_pauli_rotation(s, PauliString("X", -2.0), 0.2)
    b = apply_pauli_rotation(s, PauliString("X"), -0.4)
    np.testing.assert_allclose(a.amps, b.amps, atol=1e-14)
    with pytest.raises(ValueError):
        apply_pauli_rotation(s, PauliString("X", 1j), 0.1)


# ---------------------------------------------------------------------------
# expectation values
# ---------------------------------------------------------------------------

def test_expectation_trivial():
    zero = StateVector.basis_state(1, 0)
    assert expectation(zero, PauliSum([PauliString("Z")])) == pytest.approx(1.0)
    plus = StateVector(np.array([1, 1]) / np.sqrt(2))
    assert expectation(plus, PauliSum([PauliString("X")])) == pytest.approx(1.0)


def test_expectation_two_level_ground():
    # ground state of -Z + X has energy -sqrt(2)
    h = PauliSum([PauliString("Z", -1.0), PauliString("X", 1.0)])
    w, v = np.linalg.eigh(h.to_matrix())
    ground = StateVector(v[:, 0], check_norm=False)
    e = expectation(ground, h)
    assert e.real == pytest.approx(-np.sqrt(2.0), abs=1e-12)
    assert abs(e.imag) < 1e-10


def test_expectation_matches_dense_and_is_real_for_hermitian():
    rng = np.random.default_rng(31)
    h = random_hermitian_sum(rng, 3)
    s = random_state(rng, 3)
    dense = np.vdot(s.amps, h.to_matrix() @ s.amps)
    assert expectation(s, h) == pytest.approx(dense, abs=1e-12)
    assert abs(expectation(s, h).imag) < 1e-10


def test_compiled_sum_matches_dense():
    rng = np.random.default_rng(37)
    for _ in range(5):
        op = random_hermitian_sum(rng, 3, n_terms=12)
        s = random_state(rng, 3)
        np.testing.assert_allclose(
            CompiledPauliSum(op).dot(s.amps), op.to_matrix() @ s.amps, atol=1e-12)


# ---------------------------------------------------------------------------
# exact exponential step
# ---------------------------------------------------------------------------

def test_exact_step_global_phase():
    zero = StateVector.basis_state(1, 0)
    out = evolve_exact_step(zero, PauliSum([PauliString("Z")]), np.pi)
    assert fidelity(out, zero) == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(out.amps, [np.exp(-1j * np.pi), 0], atol=1e-12)


def test_exact_step_diagonal_hamiltonian_stationary():
    # diagonal Hamiltonian: basis states only pick up phases
    h = PauliSum([PauliString("ZI", -1.0), PauliString("IZ", 0.7), PauliString("ZZ", 0.3)])
    for idx in range(4):
        s = StateVector.basis_state(2, idx)
        out = evolve_exact_step(s, h, 3.7)
        assert fidelity(out, s) == pytest.approx(1.0, abs=1e-12)


def test_exact_step_matches_dense_oracle():
    rng = np.random.default_rng(41)
    for _ in range(5):
        h = random_hermitian_sum(rng, 3)
        s = random_state(rng, 3)
        out = evolve_exact_step(s, h, 0.7)
        ref = dense_evolve(s, h, 0.7)
        assert abs(np.vdot(out.amps, ref)) ** 2 == pytest.approx(1.0, abs=1e-10)
        np.testing.assert_allclose(out.amps, ref, atol=1e-9)


def test_exact_step_time_additivity():
    rng = np.random.default_rng(43)
    h = random_hermitian_sum(rng, 3)
    s = random_state(rng, 3)
    a = evolve_exact_step(evolve_exact_step(s, h, 0.31), h, 0.52)
    b = evolve_exact_step(s, h, 0.83)
    assert fidelity(a, b) == pytest.approx(1.0, abs=1e-10)


def test_exact_step_energy_conservation():
    rng = np.random.default_rng(47)
    h = random_hermitian_sum(rng, 3)
    s = random_state(rng, 3)
    e0 = expectation(s, h).real
    for _ in range(100):
        s = evolve_exact_step(s, h, 0.2)
    assert abs(expectation(s, h).real - e0) < 1e-8


def test_exact_step_rejects_non_hermitian():
    with pytest.raises(ValueError):
        evolve_exact_step(StateVector.basis_state(1, 0), PauliSum([PauliString("X", 1j)]), 0.1)


def test_krylov_reports_residual_when_capped():
    rng = np.random.default_rng(53)
    h = random_hermitian_sum(rng, 4, n_terms=20)
    s = random_state(rng, 4)
    with pytest.raises(KrylovConvergenceError) as err:
        evolve_exact_step(s, h, 5.0, max_dim=3)
    assert err.value.residual > 0


# ---------------------------------------------------------------------------
# projection and fidelity
# ---------------------------------------------------------------------------

def test_project_plus_state():
    plus = StateVector(np.array([1, 1]) / np.sqrt(2))
    out, p = project_qubit(plus, 0, 0)
    assert p == pytest.approx(0.5)
    np.testing.assert_allclose(out.amps, [1, 0], atol=1e-12)


def test_project_product_state_certain():
    rng = np.random.default_rng(59)
    el = random_state(rng, 2)
    s = init_product(el, 1)
    out, p = project_qubit(s, 2, 1)
    assert p == pytest.approx(1.0)
    np.testing.assert_allclose(out.amps, s.amps, atol=1e-12)


def test_project_orthogonal_branches():
    # a|psi0;1> + b|psi1;0> on a 2-qubit register (electronic + photon)
    a, b = 0.6, 0.8
    amps = np.zeros(4, dtype=complex)
    amps[0b10] = a   # electronic 0, photon 1
    amps[0b01] = b   # electronic 1, photon 0
    s = StateVector(amps)
    out, p = project_qubit(s, 1, 0)
    assert p == pytest.approx(b * b)
    np.testing.assert_allclose(out.amps, [0, 1, 0, 0], atol=1e-12)


def test_project_impossible_raises():
    s = StateVector.basis_state(2, 0)
    with pytest.raises(ProjectionImpossibleError):
        project_qubit(s, 0, 1)


def test_outcome_probabilities_sum_to_one():
    rng = np.random.default_rng(61)
    s = random_state(rng, 4)
    for q in range(4):
        p0 = outcome_probability(s, q, 0)
        p1 = outcome_probability(s, q, 1)
        assert p0 + p1 == pytest.approx(1.0, abs=1e-12)


def test_fidelity_cases():
    rng = np.random.default_rng(67)
    s = random_state(rng, 3)
    assert fidelity(s, s) == pytest.approx(1.0)
    assert fidelity(StateVector.basis_state(1, 0), StateVector.basis_state(1, 1)) == 0.0
    plus = StateVector(np.array([1, 1]) / np.sqrt(2))
    assert fidelity(plus, StateVector.basis_state(1, 0)) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        fidelity(s, StateVector.basis_state(1, 0))


def test_amplitude_dump_round_trip(tmp_path):
    rng = np.random.default_rng(71)
    s = random_state(rng, 3)
    path = tmp_path / "state.bin"
    save_amplitudes(s, str(path))
    loaded = load_amplitudes(str(path))
    assert loaded.n_qubits == 3
    np.testing.assert_allclose(loaded.amps, s.amps)
