"""Coupled electron-photon Hamiltonian tests.

Oracle: the explicit 4x4 diabatic-basis matrix of the two-level model
(analytic eigenvalues and avoided-crossing gap) and finite differences for
the path derivative.
"""

import numpy as np
import pytest

from exasp.coupling import CoupledSystem, couple, d_hamiltonian_d_s
from exasp.models import (
    ElectronicSystem,
    HubbardParams,
    TwoLevelParams,
    build_hubbard,
    build_two_level,
    exact_diagonalize,
)
from exasp.pathway import PathwaySchedule
from exasp.pauli import PauliString, PauliSum


def two_level_dense_oracle(eps, mu, omega, lam, include_dse=True):
    """Eq-style 4x4 matrix in the diabatic basis {|0;0>, |0;1>, |1;0>, |1;1>}."""
    c = lam * mu * np.sqrt(omega / 2.0)
    m = np.array([
        [-eps, 0, 0, c],
        [0, -eps + omega, c, 0],
        [0, c, eps, 0],
        [c, 0, 0, eps + omega],
    ])
    if include_dse:
        m = m + 0.5 * lam * lam * mu * mu * np.eye(4)
    return m


def test_couple_two_level_z_polarization():
    sys = build_two_level(TwoLevelParams(epsilon=1.0, mu=0.7))
    cs = couple(sys, (0, 0, 1))
    assert cs.photon_qubit == 1
    assert [t.ops for t in cs.projected_dipole] == ["X"]
    assert cs.projected_dipole.coefficient("X") == pytest.approx(0.7)
    # X^2 = I, so the dipole self-energy is a uniform shift
    assert [t.ops for t in cs.dse] == ["I"]
    assert cs.dse.coefficient("I") == pytest.approx(0.49)


def test_couple_normalizes_and_selects_component():
    zero = PauliSum.zero(1)
    mu_x = PauliSum([PauliString("X", 2.0)])
    mu_y = PauliSum([PauliString("Z", 3.0)])
    sys = ElectronicSystem(h_e=PauliSum([PauliString("Z", -1.0)]),
                           dipole=(mu_x, mu_y, zero), n_qubits=1)
    cs = couple(sys, (0, 2, 0))  # non-unit vector, y direction
    np.testing.assert_allclose(cs.polarization, [0, 1, 0])
    assert cs.projected_dipole.terms() == [PauliString("Z", 3.0)]
    with pytest.raises(ValueError):
        couple(sys, (0, 0, 0))


def test_polarization_linearity():
    zero = PauliSum.zero(1)
    mu_x = PauliSum([PauliString("X", 1.0)])
    mu_y = PauliSum([PauliString("Y", 1.0)])
    sys = ElectronicSystem(h_e=PauliSum([PauliString("Z", -1.0)]),
                           dipole=(mu_x, mu_y, zero), n_qubits=1)
    cs = couple(sys, (3.0, 4.0, 0.0))
    assert cs.projected_dipole.coefficient("X") == pytest.approx(0.6)
    assert cs.projected_dipole.coefficient("Y") == pytest.approx(0.8)


def test_hamiltonian_decoupled_limit():
    sys = build_two_level(TwoLevelParams(epsilon=1.0))
    cs = couple(sys, (0, 0, 1))
    h = cs.hamiltonian_at(0.0, 0.0)
    w = np.linalg.eigvalsh(h.to_matrix())
    np.testing.assert_allclose(w, [-1, -1, 1, 1], atol=1e-12)


def test_hamiltonian_matches_diabatic_matrix():
    eps, mu = 1.0, 1.0
    sys = build_two_level(TwoLevelParams(epsilon=eps, mu=mu))
    cs = couple(sys, (0, 0, 1))
    # our register order |el;ph> has index ph*2 + el; the oracle basis is
    # {|0;0>, |0;1>, |1;0>, |1;1>} = indices (0, 2, 1, 3)
    perm = [0, 2, 1, 3]
    for omega, lam in ((0.8, 0.0), (2.0, 0.5), (3.1, 1.0)):
        dense = cs.hamiltonian_at(omega, lam).to_matrix()[np.ix_(perm, perm)]
        sign = np.diag([1.0, 1.0, -1.0, -1.0])
        # the dipole coupling enters with an overall minus sign relative to
        # the textbook matrix; flip the excited-state phase to compare
        np.testing.assert_allclose(sign @ dense @ sign,
                                   two_level_dense_oracle(eps, mu, omega, lam), atol=1e-12)
        w = np.linalg.eigvalsh(dense)
        np.testing.assert_allclose(
            w, np.linalg.eigvalsh(two_level_dense_oracle(eps, mu, omega, lam)), atol=1e-12)
    # lam = 0: diagonal {-eps, -eps+omega, eps, eps+omega}
    w0 = np.sort(np.diag(cs.hamiltonian_at(0.8, 0.0).to_matrix()).real)
    np.testing.assert_allclose(w0, np.sort([-eps, -eps + 0.8, eps, eps + 0.8]), atol=1e-12)


def test_resonant_middle_doublet_gap():
    eps, mu, lam = 1.0, 1.0, 0.5
    sys = build_two_level(TwoLevelParams(epsilon=eps, mu=mu))
    cs = couple(sys, (0, 0, 1))
    w = np.linalg.eigvalsh(cs.hamiltonian_at(2.0 * eps, lam).to_matrix())
    assert w[2] - w[1] == pytest.approx(2.0 * lam * mu * np.sqrt(eps), abs=1e-12)


def test_hamiltonian_hermitian_and_negative_omega_rejected():
    sys = build_hubbard(HubbardParams(n_sites=2, t=1.0, u=4.0))
    cs = couple(sys, (0, 0, 1))
    rng = np.random.default_rng(5)
    for _ in range(5):
        assert cs.hamiltonian_at(rng.uniform(0, 5), rng.uniform(-1, 1)).is_hermitian()
    with pytest.raises(ValueError):
        cs.hamiltonian_at(-0.1, 0.0)


def test_decoupled_spectrum_is_shifted_union():
    for sys, sector in (
        (build_two_level(TwoLevelParams(epsilon=1.0, g=0.4)), {}),
        (build_hubbard(HubbardParams(n_sites=2, t=1.0, u=4.0)),
         dict(n_electrons=2, m_s=0.0)),
    ):
        omega = 1.37
        cs = couple(sys, (0, 0, 1))
        electronic = np.array([e for e, _ in exact_diagonalize(sys, **sector)])
        h = cs.hamiltonian_at(omega, 0.0)
        if sector:
            from exasp.models import diagonalize_operator, spin_sector_constraints
            cons = spin_sector_constraints(sys.n_qubits, sector["n_electrons"],
                                           sector["m_s"])
            coupled = np.array([e for e, _ in diagonalize_operator(h, cons)])
        else:
            coupled = np.linalg.eigvalsh(h.to_matrix())
        expected = np.sort(np.concatenate([electronic, electronic + omega]))
        np.testing.assert_allclose(coupled, expected, atol=1e-10)


def test_dse_positive_semidefinite():
    for sys in (build_two_level(TwoLevelParams(epsilon=1.0)),
                build_hubbard(HubbardParams(n_sites=3, t=1.0, u=2.0)),
                build_hubbard(HubbardParams(n_sites=4, t=1.0, u=4.0))):
        cs = couple(sys, (0, 0, 1))
        w = np.linalg.eigvalsh(cs.dse.to_matrix())
        assert w.min() > -1e-12


def test_bounded_below_continuous_in_lambda():
    sys = build_hubbard(HubbardParams(n_sites=2, t=1.0, u=4.0))
    cs = couple(sys, (0, 0, 1))
    lams = np.linspace(0.0, 2.0, 21)
    mins = np.array([np.linalg.eigvalsh(cs.hamiltonian_at(1.0, l).to_matrix()).min()
                     for l in lams])
    assert np.all(np.isfinite(mins))
    assert np.max(np.abs(np.diff(mins))) < 0.5


# ---------------------------------------------------------------------------
# path derivative
# ---------------------------------------------------------------------------

def fd_path_derivative(cs, sched, s, h=1e-6):
    lo = cs.hamiltonian_at(sched.omega(s - h), sched.lambda_(s - h))
    hi = cs.hamiltonian_at(sched.omega(s + h), sched.lambda_(s + h))
    return (1.0 / (2 * h)) * (hi - lo)


def test_path_derivative_zero_coupling_path():
    sys = build_two_level(TwoLevelParams(epsilon=1.0))
    cs = couple(sys, (0, 0, 1))
    sched = PathwaySchedule(omega_max=4.0, lambda_max=0.0, total_time=10.0, n_steps=10)
    dh = d_hamiltonian_d_s(cs, sched, 0.4)
    assert dh.coefficient("II") == pytest.approx(2.0)   # omega_max / 2
    assert dh.coefficient("IZ") == pytest.approx(-2.0)
    assert len(dh) == 2


def test_path_derivative_endpoint():
    sys = build_two_level(TwoLevelParams(epsilon=1.0))
    cs = couple(sys, (0, 0, 1))
    sched = PathwaySchedule(omega_max=4.0, lambda_max=0.5, total_time=10.0, n_steps=10)
    dh = d_hamiltonian_d_s(cs, sched, 1.0)
    # lambda(1) = lambda'(1) = 0: only the photon-frequency ramp survives
    assert dh.coefficient("XX") == pytest.approx(0.0, abs=1e-12)
    assert dh.coefficient("IZ") == pytest.approx(-2.0)


def test_path_derivative_matches_finite_difference():
    sys = build_two_level(TwoLevelParams(epsilon=1.0, g=0.3))
    cs = couple(sys, (0, 0, 1))
    sched = PathwaySchedule(omega_max=4.0, lambda_max=0.5, total_time=10.0, n_steps=10)
    for s in (0.37, 0.5, 0.9):
        analytic = d_hamiltonian_d_s(cs, sched, s).to_matrix()
        numeric = fd_path_derivative(cs, sched, s).to_matrix()
        np.testing.assert_allclose(analytic, numeric, atol=1e-6)
    with pytest.raises(ValueError):
        d_hamiltonian_d_s(cs, sched, 0.0)


def test_path_derivative_guard_region():
    sys = build_two_level(TwoLevelParams(epsilon=1.0))
    cs = couple(sys, (0, 0, 1))
    sched = PathwaySchedule(omega_max=4.0, lambda_max=0.5, total_time=10.0, n_steps=10)
    dh = d_hamiltonian_d_s(cs, sched, 5e-9)  # below the frequency floor
    assert dh.is_hermitian()
    assert dh.coefficient("IZ") == pytest.approx(-2.0, rel=1e-3)
