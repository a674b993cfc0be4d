import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from rmwave.errors import NonFiniteState, StepBudgetExhausted, StepUnderflow
from rmwave.integrator import (
    CrossesValue,
    ExceedsTime,
    IntegratorConfig,
    Termination,
    integrate,
)


def rotation(_t, y):
    return (y[1], -y[0])


def decay(_t, y):
    return (-y[0], -2.0 * y[1])


def test_exponential_decay():
    traj = integrate(decay, (1.0, 1.0), events=[ExceedsTime(3.0)])
    assert traj.terminal.kind is Termination.HORIZON
    assert traj.final_time == 3.0
    x, y = traj.final_state
    assert x == pytest.approx(math.exp(-3.0), rel=1e-10)
    assert y == pytest.approx(math.exp(-6.0), rel=1e-10)


def test_event_location():
    # cos t first drops through zero at pi/2
    traj = integrate(rotation, (1.0, 0.0), events=[CrossesValue(0, 0.0, -1, 1e-13), ExceedsTime(10.0)])
    assert traj.event_fired and traj.terminal.event_index == 0
    assert traj.terminal.time == pytest.approx(math.pi / 2, abs=1e-11)
    assert abs(traj.terminal.state[0]) <= 1e-13


def test_event_direction_respected():
    # sin t rises through 0.5 at pi/6, falls through it at 5 pi/6
    traj = integrate(rotation, (0.0, 1.0), events=[CrossesValue(0, 0.5, -1), ExceedsTime(10.0)])
    assert traj.terminal.time == pytest.approx(5 * math.pi / 6, abs=1e-10)


def test_dense_output_matches_solution():
    traj = integrate(rotation, (0.0, 1.0), events=[ExceedsTime(2 * math.pi)])
    ts = np.linspace(0.0, 2 * math.pi, 97)
    got = traj.sample(ts)
    assert np.max(np.abs(got[:, 0] - np.sin(ts))) < 1e-9
    with pytest.raises(ValueError):
        traj.at(7.0)


def test_fifth_order_convergence():
    """Fixed steps (loose tolerances, h_max pinned) show global error ~ h^5."""
    errs = []
    hs = [0.2, 0.1, 0.05]
    for h in hs:
        cfg = IntegratorConfig(rtol=1.0, atol=1.0, h_init=h, h_max=h)
        traj = integrate(rotation, (0.0, 1.0), events=[ExceedsTime(2.0)], cfg=cfg)
        assert traj.n_rejected == 0
        errs.append(abs(traj.final_state[0] - math.sin(2.0)))
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    assert 4.6 < slope < 5.6


def test_energy_conserved_over_many_periods():
    traj = integrate(rotation, (1.0, 0.0), events=[ExceedsTime(20 * 2 * math.pi)])
    energy = np.sum(traj.states**2, axis=1)
    assert np.max(np.abs(energy - 1.0)) < 1e-9


def test_time_reversal_returns_to_start():
    def fwd(_t, y):
        return (-y[0] + 0.5 * y[0] * y[0], 0.3 * y[0] - y[1])

    def bwd(t, y):
        a, b = fwd(t, y)
        return (-a, -b)

    start = (1.2, 0.4)
    there = integrate(fwd, start, events=[ExceedsTime(1.5)]).final_state
    back = integrate(bwd, there, events=[ExceedsTime(1.5)]).final_state
    assert back == pytest.approx(start, abs=1e-10)


def test_matches_scipy_on_nonlinear_field():
    def f(_t, y):
        return (-2.5 * y[0] + 0.5 * y[0] ** 2 + 2.0 * (1 - y[1]), 0.7 * math.sqrt(max(y[1], 0.0)))

    ours = integrate(f, (3.0, 0.1), events=[ExceedsTime(1.0)]).final_state
    ref = solve_ivp(f, (0, 1), [3.0, 0.1], method="DOP853", rtol=1e-13, atol=1e-14).y[:, -1]
    assert ours == pytest.approx(tuple(ref), abs=1e-10)


@given(st.floats(-3.0, 3.0), st.floats(-3.0, 3.0), st.floats(0.1, 4.0))
def test_linear_systems(a, b, t_end):
    def f(_t, y):
        return (a * y[0], b * y[1])

    x, y = integrate(f, (1.0, -2.0), events=[ExceedsTime(t_end)]).final_state
    assert x == pytest.approx(math.exp(a * t_end), rel=1e-9)
    assert y == pytest.approx(-2.0 * math.exp(b * t_end), rel=1e-9)


@given(st.floats(0.05, 0.95))
def test_event_lands_on_target(level):
    traj = integrate(decay, (1.0, 1.0), events=[CrossesValue(0, level, -1, 1e-12)])
    assert traj.terminal.state[0] == pytest.approx(level, abs=1e-12)
    assert traj.terminal.time == pytest.approx(-math.log(level), abs=1e-10)


def test_step_budget():
    with pytest.raises(StepBudgetExhausted) as info:
        integrate(rotation, (1.0, 0.0), events=[ExceedsTime(100.0)], cfg=IntegratorConfig(max_steps=5))
    assert info.value.trajectory is not None


def test_blow_up_underflows():
    with pytest.raises((StepUnderflow, NonFiniteState)):
        integrate(lambda _t, y: (y[0] * y[0], 0.0), (1.0, 0.0), events=[ExceedsTime(2.0)])


def test_nonfinite_start():
    with pytest.raises(NonFiniteState):
        integrate(lambda _t, y: (math.inf, 0.0), (1.0, 0.0), events=[ExceedsTime(1.0)])


def test_needs_a_stop():
    with pytest.raises(ValueError):
        integrate(rotation, (1.0, 0.0))
    with pytest.raises(ValueError):
        IntegratorConfig(rtol=0.0)


def test_linear_decay_within_ten_rtol():
    cfg = IntegratorConfig()
    traj = integrate(lambda _t, y: (-y[0], 0.0), (1.0, 0.0), events=[ExceedsTime(1.0)], cfg=cfg)
    assert abs(traj.final_state[0] - math.exp(-1.0)) <= 10 * cfg.rtol
    assert traj.final_state[1] == 0.0


def test_one_period_at_1e10():
    cfg = IntegratorConfig(rtol=1e-10, atol=1e-10)
    traj = integrate(rotation, (1.0, 0.0), events=[ExceedsTime(2 * math.pi)], cfg=cfg)
    x, y = traj.final_state
    assert math.hypot(x - 1.0, y) < 1e-8
    assert np.max(np.abs(np.sum(traj.states**2, axis=1) - 1.0)) < 1e-8


def test_tighter_tolerance_reduces_error():
    errs = []
    for tol in (1e-5, 1e-7, 1e-9, 1e-11):
        cfg = IntegratorConfig(rtol=tol, atol=tol)
        x, y = integrate(rotation, (1.0, 0.0), events=[ExceedsTime(2 * math.pi)], cfg=cfg).final_state
        errs.append(math.hypot(x - 1.0, y))
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_reversal_within_hundred_rtol():
    cfg = IntegratorConfig(rtol=1e-10, atol=1e-12)
    there = integrate(rotation, (0.3, -0.8), events=[ExceedsTime(3.0)], cfg=cfg).final_state
    back = integrate(lambda t, y: tuple(-v for v in rotation(t, y)), there, events=[ExceedsTime(3.0)], cfg=cfg)
    assert back.final_state == pytest.approx((0.3, -0.8), abs=100 * cfg.rtol)


def test_deterministic():
    a = integrate(rotation, (1.0, 0.0), events=[ExceedsTime(5.0)])
    b = integrate(rotation, (1.0, 0.0), events=[ExceedsTime(5.0)])
    assert np.array_equal(a.states, b.states) and np.array_equal(a.times, b.times)
