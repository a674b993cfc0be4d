"""Adaptive Dormand-Prince 5(4) integration of planar fields with event location.

States are 2-tuples of floats; the stepper is written out component-wise
because every system integrated here is planar and the per-step overhead of
small numpy arrays would dominate the cost of a bifurcation sweep.
"""
from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from .errors import NonFiniteState, StepBudgetExhausted, StepUnderflow

# Dormand-Prince tableau
C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# difference between the 5th and embedded 4th order weights
E1, E3, E4, E5, E6, E7 = (
    71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40,
)

# quartic dense output, y(t + th*h) = y + h * sum_i K_i * sum_j P[i][j] th**(j+1)
_P = (
    (1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432),
    (0.0, 0.0, 0.0, 0.0),
    (0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799),
    (0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072),
    (0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632),
    (0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844),
    (0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423),
)

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0
# PI controller exponents (Hairer & Wanner's dopri5 choice)
_EXP_ERR = 0.2 - 0.04 * 0.75
_EXP_PREV = 0.04


@dataclass(frozen=True)
class IntegratorConfig:
    rtol: float = 1e-12
    atol: float = 1e-14
    h_init: float = 0.0  # 0 selects the starting step automatically
    h_max: float = math.inf
    max_steps: int = 1_000_000

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0):
            raise ValueError("rtol and atol must be positive")
        if not self.h_max > 0:
            raise ValueError("h_max must be positive")
        if self.h_init < 0:
            raise ValueError("h_init must be >= 0")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")


DEFAULT_CONFIG = IntegratorConfig()


@dataclass(frozen=True)
class CrossesValue:
    """Terminal event: ``y[component]`` crosses ``target``.

    ``direction`` is -1 for downward crossings, +1 for upward, 0 for either.
    """

    component: int
    target: float
    direction: int = 0
    tol: float = 1e-12

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("localization tolerance must be positive")
        if self.component not in (0, 1):
            raise ValueError("component must be 0 or 1")

    def triggered(self, g_old: float, g_new: float) -> bool:
        if self.direction <= 0 and g_old > 0.0 and g_new <= 0.0:
            return True
        if self.direction >= 0 and g_old < 0.0 and g_new >= 0.0:
            return True
        return False


@dataclass(frozen=True)
class ExceedsTime:
    horizon: float


Event = Union[CrossesValue, ExceedsTime]


class Termination(enum.Enum):
    EVENT = "event"
    HORIZON = "horizon"


@dataclass(frozen=True)
class TerminationRecord:
    kind: Termination
    time: float
    state: tuple
    event_index: int | None = None


@dataclass
class _Step:
    t: float
    h: float
    y: tuple
    ks: tuple


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    terminal: TerminationRecord
    n_steps: int
    n_rejected: int
    n_evals: int
    _steps: list = field(default_factory=list, repr=False)

    @property
    def final_time(self) -> float:
        return float(self.times[-1])

    @property
    def final_state(self) -> tuple:
        return tuple(float(v) for v in self.states[-1])

    @property
    def event_fired(self) -> bool:
        return self.terminal.kind is Termination.EVENT

    def at(self, t: float) -> tuple:
        """Dense-output state at time ``t`` inside the integrated interval."""
        if t < self.times[0] or t > self.times[-1]:
            raise ValueError(f"t = {t} outside [{self.times[0]}, {self.times[-1]}]")
        if t == self.times[-1]:
            return self.final_state
        starts = self._starts
        i = max(bisect.bisect_right(starts, t) - 1, 0)
        step = self._steps[i]
        return _interpolate(step, (t - step.t) / step.h)

    def sample(self, ts: Sequence[float]) -> np.ndarray:
        return np.array([self.at(float(t)) for t in ts])

    def __post_init__(self):
        self._starts = [s.t for s in self._steps]


def _interpolate(step: _Step, theta: float) -> tuple:
    th2 = theta * theta
    th3 = th2 * theta
    th4 = th3 * theta
    a = b = 0.0
    for (k0, k1), (p1, p2, p3, p4) in zip(step.ks, _P):
        w = p1 * theta + p2 * th2 + p3 * th3 + p4 * th4
        a += k0 * w
        b += k1 * w
    return (step.y[0] + step.h * a, step.y[1] + step.h * b)


def _initial_step(f, t0, y0, f0, rtol, atol):
    # Hairer, Norsett & Wanner, "Solving ODEs I", II.4
    sc0 = atol + abs(y0[0]) * rtol
    sc1 = atol + abs(y0[1]) * rtol
    d0 = math.sqrt(((y0[0] / sc0) ** 2 + (y0[1] / sc1) ** 2) / 2)
    d1 = math.sqrt(((f0[0] / sc0) ** 2 + (f0[1] / sc1) ** 2) / 2)
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    y1 = (y0[0] + h0 * f0[0], y0[1] + h0 * f0[1])
    f1 = f(t0 + h0, y1)
    d2 = math.sqrt((((f1[0] - f0[0]) / sc0) ** 2 + ((f1[1] - f0[1]) / sc1) ** 2) / 2) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1)


def integrate(
    rhs: Callable[[float, tuple], tuple],
    initial: Sequence[float],
    t0: float = 0.0,
    events: Sequence[Event] = (),
    cfg: IntegratorConfig = DEFAULT_CONFIG,
) -> Trajectory:
    """Integrate ``y' = rhs(t, y)`` forward from ``(t0, initial)``.

    Integration stops at the first terminal event or at the horizon of an
    :class:`ExceedsTime` event.  At least one of the two must be supplied.
    Crossing events are localized by bisection on the dense output until the
    event component is within the event's tolerance of its target.
    """
    crossings = [(i, e) for i, e in enumerate(events) if isinstance(e, CrossesValue)]
    horizons = [e.horizon for e in events if isinstance(e, ExceedsTime)]
    if len(horizons) > 1:
        raise ValueError("at most one ExceedsTime event may be given")
    t_end = horizons[0] if horizons else math.inf
    if not crossings and not math.isfinite(t_end):
        raise ValueError("need a crossing event or a finite horizon")
    if t_end <= t0:
        raise ValueError("horizon must lie after t0")

    rtol, atol, h_max = cfg.rtol, cfg.atol, cfg.h_max
    t = float(t0)
    y = (float(initial[0]), float(initial[1]))
    k1 = rhs(t, y)
    n_evals = 1
    if not (math.isfinite(k1[0]) and math.isfinite(k1[1])):
        raise NonFiniteState(f"field is not finite at the initial state {y}")
    h = cfg.h_init or _initial_step(rhs, t, y, k1, rtol, atol)
    n_evals += 0 if cfg.h_init else 1
    h = min(h, h_max)

    times = [t]
    states = [y]
    steps: list[_Step] = []
    g_old = [y[e.component] - e.target for _, e in crossings]
    err_prev = 1e-4
    n_steps = n_rejected = 0
    terminal = None

    def finish(record):
        return Trajectory(
            np.array(times), np.array(states), record, n_steps, n_rejected, n_evals, steps
        )

    while True:
        if n_steps >= cfg.max_steps:
            raise StepBudgetExhausted(
                f"step budget of {cfg.max_steps} exhausted at t = {t}",
                trajectory=finish(TerminationRecord(Termination.HORIZON, t, y)),
            )
        last = False
        # stretch onto the horizon rather than leave a rounding-sized sliver
        if t + h * (1.0 + 1e-9) >= t_end:
            h = t_end - t
            last = True
        if h <= 1e-14 * max(abs(t), 1.0):
            raise StepUnderflow(f"step size {h:.3e} underflows at t = {t}")

        y0, y1 = y
        a0, a1 = k1
        k2 = rhs(t + C2 * h, (y0 + h * A21 * a0, y1 + h * A21 * a1))
        b0, b1 = k2
        k3 = rhs(t + C3 * h, (y0 + h * (A31 * a0 + A32 * b0), y1 + h * (A31 * a1 + A32 * b1)))
        c0, c1 = k3
        k4 = rhs(t + C4 * h, (y0 + h * (A41 * a0 + A42 * b0 + A43 * c0),
                              y1 + h * (A41 * a1 + A42 * b1 + A43 * c1)))
        d0, d1 = k4
        k5 = rhs(t + C5 * h, (y0 + h * (A51 * a0 + A52 * b0 + A53 * c0 + A54 * d0),
                              y1 + h * (A51 * a1 + A52 * b1 + A53 * c1 + A54 * d1)))
        e0, e1 = k5
        k6 = rhs(t + h, (y0 + h * (A61 * a0 + A62 * b0 + A63 * c0 + A64 * d0 + A65 * e0),
                         y1 + h * (A61 * a1 + A62 * b1 + A63 * c1 + A64 * d1 + A65 * e1)))
        f0_, f1_ = k6
        n0 = y0 + h * (B1 * a0 + B3 * c0 + B4 * d0 + B5 * e0 + B6 * f0_)
        n1 = y1 + h * (B1 * a1 + B3 * c1 + B4 * d1 + B5 * e1 + B6 * f1_)
        k7 = rhs(t + h, (n0, n1))
        n_evals += 6
        g0_, g1_ = k7
        if not (math.isfinite(n0) and math.isfinite(n1) and math.isfinite(g0_) and math.isfinite(g1_)):
            if h > 1e-8 * max(abs(t), 1.0):
                h *= MIN_FACTOR
                n_rejected += 1
                continue
            raise NonFiniteState(
                f"non-finite state near t = {t}",
                trajectory=finish(TerminationRecord(Termination.HORIZON, t, y)),
            )

        err0 = h * (E1 * a0 + E3 * c0 + E4 * d0 + E5 * e0 + E6 * f0_ + E7 * g0_)
        err1 = h * (E1 * a1 + E3 * c1 + E4 * d1 + E5 * e1 + E6 * f1_ + E7 * g1_)
        sc0 = atol + rtol * max(abs(y0), abs(n0))
        sc1 = atol + rtol * max(abs(y1), abs(n1))
        err = math.sqrt(((err0 / sc0) ** 2 + (err1 / sc1) ** 2) / 2)

        if err > 1.0:
            factor = max(MIN_FACTOR, SAFETY * err**-_EXP_ERR)
            h *= factor
            n_rejected += 1
            continue

        step = _Step(t, h, y, (k1, k2, k3, k4, k5, k6, k7))
        t_new = t_end if last else t + h
        y_new = (n0, n1)
        n_steps += 1

        hit = None
        for j, (idx, ev) in enumerate(crossings):
            g_new = y_new[ev.component] - ev.target
            if ev.triggered(g_old[j], g_new):
                theta = _locate(step, ev, g_old[j])
                if hit is None or theta < hit[0]:
                    hit = (theta, idx, ev)
            g_old[j] = g_new

        steps.append(step)
        if hit is not None:
            theta, idx, ev = hit
            t_ev = t + theta * h
            y_ev = _interpolate(step, theta) if theta < 1.0 else y_new
            if t_ev > t:
                times.append(t_ev)
                states.append(y_ev)
            else:
                states[-1] = y_ev
            return finish(TerminationRecord(Termination.EVENT, t_ev, y_ev, idx))

        times.append(t_new)
        states.append(y_new)
        t, y, k1 = t_new, y_new, k7
        if last:
            return finish(TerminationRecord(Termination.HORIZON, t, y))

        if err == 0.0:
            factor = MAX_FACTOR
        else:
            factor = SAFETY * err**-_EXP_ERR * err_prev**_EXP_PREV
            factor = min(MAX_FACTOR, max(MIN_FACTOR, factor))
        err_prev = max(err, 1e-4)
        h = min(h * factor, h_max)


def _locate(step: _Step, ev: CrossesValue, g_start: float) -> float:
    """Bisection on the dense output for the crossing inside ``step``.

    Returns the fraction of the step at which the event component first lies
    within ``ev.tol`` of its target on the far side of the crossing.
    """
    comp, target = ev.component, ev.target
    lo, hi = 0.0, 1.0
    positive = g_start > 0.0
    g_hi = _interpolate(step, hi)[comp] - target
    while abs(g_hi) > ev.tol:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        g_mid = _interpolate(step, mid)[comp] - target
        if g_mid != 0.0 and (g_mid > 0.0) == positive:
            lo = mid
        else:
            hi, g_hi = mid, g_mid
    return hi
