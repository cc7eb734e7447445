"""Schedule and adiabatic-time-bound tests."""

import numpy as np
import pytest

from exasp.coupling import couple
from exasp.models import (
    HubbardParams,
    TwoLevelParams,
    build_hubbard,
    build_two_level,
    exact_diagonalize,
    find_first_bright_state,
)
from exasp.pathway import PathwaySchedule, adiabatic_time_bound, estimate_omega_max


def test_schedule_boundary_conditions():
    sched = PathwaySchedule(omega_max=4.0, lambda_max=0.5, total_time=10.0, n_steps=100)
    assert sched.omega(0.0) == 0.0
    assert sched.omega(1.0) == 4.0
    assert sched.omega(0.5) == 2.0
    assert sched.lambda_(0.0) == pytest.approx(0.0, abs=1e-15)
    assert sched.lambda_(1.0) == pytest.approx(0.0, abs=1e-15)
    assert sched.lambda_(0.5) == pytest.approx(0.5)


def test_lambda_closed_form_and_symmetry():
    sched = PathwaySchedule(omega_max=1.0, lambda_max=0.5, total_time=1.0, n_steps=1)
    assert sched.lambda_(1.0 / 6.0) == pytest.approx(0.0625, abs=1e-12)
    for s in np.linspace(0.0, 0.5, 20):
        assert sched.lambda_(s) == pytest.approx(sched.lambda_(1.0 - s), abs=1e-12)
        assert sched.lambda_(s) <= sched.lambda_(0.5) + 1e-15


def test_schedule_grid_and_dt():
    sched = PathwaySchedule(omega_max=4.0, lambda_max=0.5, total_time=50.0, n_steps=100)
    assert sched.dt == pytest.approx(0.5)
    np.testing.assert_allclose(sched.s_grid, np.arange(100) / 100)


def test_schedule_domain_and_validation():
    sched = PathwaySchedule(omega_max=4.0, lambda_max=0.5, total_time=10.0, n_steps=10)
    with pytest.raises(ValueError):
        sched.omega(1.2)
    with pytest.raises(ValueError):
        sched.lambda_(-0.1)
    with pytest.raises(ValueError):
        PathwaySchedule(omega_max=-1.0, lambda_max=0.5, total_time=1.0, n_steps=1)
    with pytest.raises(ValueError):
        PathwaySchedule(omega_max=1.0, lambda_max=0.5, total_time=1.0, n_steps=0)


def test_estimate_omega_max_two_level():
    sys = build_two_level(TwoLevelParams(epsilon=1.0, g=0.0))
    assert estimate_omega_max(sys, (0, 0, 1)) == pytest.approx(4.0, abs=1e-10)


def test_estimate_omega_max_hubbard_is_twice_bright_gap():
    sys = build_hubbard(HubbardParams(n_sites=4, t=1.0, u=4.0))
    spectrum = exact_diagonalize(sys, n_electrons=4, m_s=0.0)
    _, gap = find_first_bright_state(spectrum, sys.dipole[2])
    est = estimate_omega_max(sys, (0, 0, 1), n_electrons=4, m_s=0.0)
    assert est == pytest.approx(2.0 * gap, abs=1e-10)


def two_level_bound(lambda_max, grid_size=50):
    sys = build_two_level(TwoLevelParams(epsilon=1.0, mu=1.0))
    cs = couple(sys, (0, 0, 1))
    sched = PathwaySchedule(omega_max=4.0, lambda_max=lambda_max,
                            total_time=1.0, n_steps=1)
    return adiabatic_time_bound(cs, sched, target_index=1, grid_size=grid_size)


def test_bound_monotone_in_lambda_max():
    values = [two_level_bound(l) for l in (0.1, 0.25, 0.5, 0.75, 1.0)]
    assert all(a >= b - 1e-9 for a, b in zip(values, values[1:]))
    assert values[2] > values[-1]  # lambda_max = 0.5 exceeds lambda_max = 1.0


def test_bound_diverges_near_conical_intersection():
    # avoided-crossing gap shrinks linearly with lambda_max, so the bound
    # grows as 1/lambda_max^2
    b_small, b_tiny = two_level_bound(1e-2), two_level_bound(1e-3)
    assert b_tiny > 50 * b_small
    assert b_tiny > 1e5


def test_bound_analytic_value_at_crossing():
    # at resonance the followed/partner pair gives
    # |<K| w_max n_ph |J>| / gap^2 = (w_max/2) / (2 lam mu sqrt(eps))^2
    lam = 1e-3
    expected = (4.0 / 2.0) / (2.0 * lam) ** 2
    assert two_level_bound(lam) == pytest.approx(expected, rel=1e-3)
