"""Tiled unitary product-state ansatz and optimizer tests."""

import numpy as np
import pytest
import scipy.linalg

from exasp.ansatz import (
    BHPTConfig,
    TupsAnsatz,
    apply_ansatz,
    energy,
    energy_and_gradient,
    load_checkpoint,
    optimize,
    save_checkpoint,
)
from exasp.models import (
    HubbardParams,
    build_hubbard,
    exact_diagonalize,
    number_operator,
    sz_operator,
)
from exasp.statevector import expectation, fidelity


def test_parameter_count():
    # 3 * L * (N-1) block angles plus ceil(N/2) * (N-1) orbital-rotation angles
    for n, layers in ((2, 1), (4, 2), (6, 3), (5, 1)):
        a = TupsAnsatz(n_orbitals=n, n_layers=layers,
                       n_electrons=n if n % 2 == 0 else n - 1)
        assert a.n_params == 3 * layers * (n - 1) + ((n + 1) // 2) * (n - 1)


def test_tile_pattern():
    a = TupsAnsatz(n_orbitals=6, n_layers=1)
    assert a.tiles == [(0, 1), (2, 3), (4, 5), (1, 2), (3, 4)]


def test_reference_alternates_occupation():
    a = TupsAnsatz(n_orbitals=4, n_layers=1)
    ref = a.reference_state()
    # orbitals 0 and 2 doubly occupied: qubits 0,1 and 4,5 set
    assert ref.amps[0b110011] == 1.0
    n_op = number_operator(a.n_qubits)
    assert expectation(ref, n_op).real == pytest.approx(4.0)


def test_zero_parameters_is_identity():
    a = TupsAnsatz(n_orbitals=4, n_layers=2)
    out = apply_ansatz(a, np.zeros(a.n_params))
    assert fidelity(out, a.reference_state()) == pytest.approx(1.0)


def test_norm_and_symmetries_preserved():
    rng = np.random.default_rng(3)
    a = TupsAnsatz(n_orbitals=4, n_layers=1)
    n_op, sz = number_operator(a.n_qubits), sz_operator(a.n_qubits)
    for _ in range(5):
        out = apply_ansatz(a, rng.uniform(-1, 1, a.n_params))
        assert abs(out.norm() - 1.0) < 1e-10
        assert expectation(out, n_op).real == pytest.approx(4.0, abs=1e-10)
        assert expectation(out, sz).real == pytest.approx(0.0, abs=1e-10)


def test_single_block_rotation_matches_dense_exponential():
    """One k1 rotation on two orbitals against the 16x16 matrix exponential."""
    a = TupsAnsatz(n_orbitals=2, n_layers=0, n_electrons=2)
    theta = np.pi / 4
    params = np.array([theta])  # single orbital-optimization angle
    out = apply_ansatz(a, params)
    k1 = a.generator("k1", (0, 1)).to_matrix()
    expected = scipy.linalg.expm(theta * k1) @ a.reference_state().amps
    np.testing.assert_allclose(out.amps, expected, atol=1e-12)


def test_window_and_krylov_paths_agree():
    rng = np.random.default_rng(5)
    a = TupsAnsatz(n_orbitals=4, n_layers=1)
    params = rng.uniform(-0.5, 0.5, a.n_params)
    fast = apply_ansatz(a, params, window=True)
    slow = apply_ansatz(a, params, window=False)
    assert fidelity(fast, slow) == pytest.approx(1.0, abs=1e-10)
    np.testing.assert_allclose(fast.amps, slow.amps, atol=1e-8)


def test_parameter_length_validated():
    a = TupsAnsatz(n_orbitals=4, n_layers=1)
    with pytest.raises(ValueError):
        apply_ansatz(a, np.zeros(a.n_params + 1))


def test_gradient_finite_difference_consistency():
    """Richardson-extrapolated gradient agrees with the coarse-step one."""
    rng = np.random.default_rng(7)
    sys = build_hubbard(HubbardParams(n_sites=2, t=1.0, u=4.0))
    a = TupsAnsatz(n_orbitals=2, n_layers=1)
    params = rng.uniform(-0.3, 0.3, a.n_params)
    _, g_coarse = energy_and_gradient(a, params, sys.h_e, fd_step=1e-5)
    _, g_h = energy_and_gradient(a, params, sys.h_e, fd_step=1e-4)
    _, g_h2 = energy_and_gradient(a, params, sys.h_e, fd_step=5e-5)
    richardson = (4.0 * g_h2 - g_h) / 3.0
    np.testing.assert_allclose(richardson, g_coarse, atol=1e-7)


def test_gradient_matches_directional_secant():
    rng = np.random.default_rng(9)
    sys = build_hubbard(HubbardParams(n_sites=2, t=1.0, u=2.0))
    a = TupsAnsatz(n_orbitals=2, n_layers=1)
    params = rng.uniform(-0.3, 0.3, a.n_params)
    _, grad = energy_and_gradient(a, params, sys.h_e)
    h = 1e-6
    for _ in range(20):
        d = rng.normal(size=a.n_params)
        d /= np.linalg.norm(d)
        secant = (energy(a, params + h * d, sys.h_e)
                  - energy(a, params - h * d, sys.h_e)) / (2 * h)
        assert secant == pytest.approx(float(grad @ d), abs=2e-5 * max(1, abs(secant)))


def test_two_site_single_layer_is_exact():
    sys = build_hubbard(HubbardParams(n_sites=2, t=1.0, u=4.0))
    a = TupsAnsatz(n_orbitals=2, n_layers=1)
    cfg = BHPTConfig(n_replicas=2, n_steps=3, seed=11)
    exact = exact_diagonalize(sys, n_electrons=2, m_s=0.0)[0]
    res = optimize(a, sys.h_e, cfg, exact_ground=exact[1])
    assert res.energy == pytest.approx(2 - 2 * np.sqrt(2.0), abs=1e-7)
    assert res.energy >= exact[0] - 1e-9  # variational
    assert res.fidelity == pytest.approx(1.0, abs=1e-6)
    assert res.rms_gradient < 1e-5


def test_noninteracting_chain_exact_with_one_layer():
    sys = build_hubbard(HubbardParams(n_sites=4, t=1.0, u=0.0))
    a = TupsAnsatz(n_orbitals=4, n_layers=1)
    cfg = BHPTConfig(n_replicas=2, n_steps=2, seed=13)
    exact = exact_diagonalize(sys, n_electrons=4, m_s=0.0)[0]
    res = optimize(a, sys.h_e, cfg, exact_ground=exact[1])
    eps_initial = 1.0 - res.fidelity
    assert eps_initial < 1e-8
    assert res.energy == pytest.approx(exact[0], abs=1e-8)


@pytest.mark.slow
def test_layers_increase_accuracy():
    sys = build_hubbard(HubbardParams(n_sites=4, t=1.0, u=4.0))
    exact = exact_diagonalize(sys, n_electrons=4, m_s=0.0)[0]
    errors = []
    for layers in (1, 2):
        a = TupsAnsatz(n_orbitals=4, n_layers=layers)
        res = optimize(a, sys.h_e, BHPTConfig(n_replicas=2, n_steps=3, seed=17),
                       exact_ground=exact[1])
        assert res.energy >= exact[0] - 1e-9
        errors.append(res.energy - exact[0])
    assert errors[1] <= errors[0] + 1e-10


def test_bhpt_defaults_match_convention():
    cfg = BHPTConfig()
    assert cfg.n_replicas == 8
    assert cfg.n_steps == 250
    assert cfg.lbfgs_max_iter == 2000
    temps = cfg.temperatures()
    assert temps[0] == pytest.approx(1e-4)
    assert temps[-1] == pytest.approx(1e-2)
    ratios = temps[1:] / temps[:-1]
    np.testing.assert_allclose(ratios, ratios[0])  # exponential spacing


def test_checkpoint_round_trip(tmp_path):
    a = TupsAnsatz(n_orbitals=4, n_layers=2)
    rng = np.random.default_rng(19)
    params = rng.normal(size=a.n_params)
    path = tmp_path / "ansatz.ckpt"
    save_checkpoint(str(path), a, params, energy_value=-1.234)
    loaded, back = load_checkpoint(str(path))
    assert (loaded.n_orbitals, loaded.n_layers, loaded.electrons) == (4, 2, 4)
    np.testing.assert_allclose(back, params)
    with pytest.raises(ValueError):
        load_checkpoint(__file__)
