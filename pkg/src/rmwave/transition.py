"""Transition map, wave classification, profiles and asymptotic checks.

The transition map sends a start temperature ``T`` on the axis ``{Z = 0}``
to the mass fraction at which the forward orbit of the regularised field
crosses the ignition line ``{T = ti}``.  Its values at the two equilibria,
``z0`` (strong) and ``z1`` (weak), decide existence and type of the
traveling wave through ``(ti, 1)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import model
from .errors import DomainError, InsufficientRange, NoCrossing, ProfileUndefined
from .integrator import (
    DEFAULT_CONFIG,
    CrossesValue,
    ExceedsTime,
    IntegratorConfig,
    Trajectory,
    integrate,
)
from .model import FlowParams, ModelParams

TOL_CLASS = 1e-6
EVENT_TOL = 1e-12


@dataclass(frozen=True)
class TransitionResult:
    z_exit: float
    u_exit: float
    tau_exit: float
    trajectory: Trajectory | None


class Variant(enum.Enum):
    STRONG_BUMP = "StrongBump"
    STRONG_MONOTONIC = "StrongMonotonic"
    STRONG_SPECIAL = "StrongSpecial"
    WEAK_SPECIAL = "WeakSpecial"
    CJ_BUMP = "CJBump"
    CJ_SPECIAL = "CJSpecial"
    NO_SOLUTION = "NoSolution"

    def __str__(self):
        return self.value

    @property
    def is_solution(self) -> bool:
        return self is not Variant.NO_SOLUTION

    @property
    def is_special(self) -> bool:
        return self in (Variant.STRONG_SPECIAL, Variant.WEAK_SPECIAL, Variant.CJ_SPECIAL)


@dataclass(frozen=True)
class SolutionClass:
    variant: Variant
    z0: float
    z1: float | None
    tol_class: float

    @property
    def is_solution(self) -> bool:
        return self.variant.is_solution


def _horizon(params: ModelParams, beta: float, u_span: float) -> float:
    # time for U to grow by u_span at the slowest reaction rate, with slack
    return 100.0 + 100.0 * u_span / (beta * params.phi_min)


def transition_z(
    params: ModelParams,
    flow: FlowParams,
    t_start: float,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
    keep_trajectory: bool = True,
) -> TransitionResult:
    """Follow the orbit from ``(t_start, 0)`` until it crosses ``T = ti``."""
    flow.check(params)
    ti = params.ti
    if t_start < ti:
        raise DomainError(f"t_start = {t_start} lies below the ignition temperature {ti}")
    if t_start == ti:
        return TransitionResult(0.0, 0.0, 0.0, None)
    rhs = model.make_field_u(params, flow)
    # generous horizon: the exit U grows with beta, and the map is only
    # finite on [ti, T(beta, c)) with T(beta, c) > T0(c)
    horizon = _horizon(params, flow.beta, 1.0 + flow.beta)
    traj = integrate(
        rhs,
        (t_start, 0.0),
        events=[
            CrossesValue(0, ti, -1, EVENT_TOL),
            # above ~2c the temperature blows up in finite time
            CrossesValue(0, 10.0 * (flow.c + t_start), +1, 1e-6),
            ExceedsTime(horizon),
        ],
        cfg=cfg,
    )
    if not (traj.event_fired and traj.terminal.event_index == 0):
        raise NoCrossing(
            f"orbit from T = {t_start} did not reach T = {ti} within tau = {horizon:.4g}"
        )
    u_exit = max(traj.terminal.state[1], 0.0)
    return TransitionResult(
        model.u_to_z(params.alpha, u_exit),
        u_exit,
        traj.terminal.time,
        traj if keep_trajectory else None,
    )


def z0(params: ModelParams, flow: FlowParams, cfg: IntegratorConfig = DEFAULT_CONFIG) -> float:
    t0, _ = model.equilibria(params, flow.c)
    return transition_z(params, flow, t0, cfg, keep_trajectory=False).z_exit


def z1(params: ModelParams, flow: FlowParams, cfg: IntegratorConfig = DEFAULT_CONFIG) -> float:
    cs = model.c_star(params)
    if flow.c >= cs:
        raise DomainError(
            f"z1 needs c < c_star = {cs:.12g}; T1(c) no longer exceeds ti at c = {flow.c}"
        )
    _, t1 = model.equilibria(params, flow.c)
    return transition_z(params, flow, t1, cfg, keep_trajectory=False).z_exit


def classify(
    params: ModelParams,
    flow: FlowParams,
    tol_class: float = TOL_CLASS,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
) -> SolutionClass:
    """Type of the wave through ``(ti, 1)`` from the position of 1 against z0, z1."""
    flow.check(params)
    cj = model.is_cj(params, flow.c)
    zs = z0(params, flow, cfg)
    if abs(zs - 1.0) <= tol_class:
        v = Variant.CJ_SPECIAL if cj else Variant.STRONG_SPECIAL
        return SolutionClass(v, zs, None, tol_class)
    if zs < 1.0:
        v = Variant.CJ_BUMP if cj else Variant.STRONG_BUMP
        return SolutionClass(v, zs, None, tol_class)
    if flow.c >= model.c_star(params):
        return SolutionClass(Variant.STRONG_MONOTONIC, zs, None, tol_class)
    zw = z1(params, flow, cfg)
    if abs(zw - 1.0) <= tol_class:
        v = Variant.WEAK_SPECIAL
    elif zw < 1.0:
        v = Variant.STRONG_MONOTONIC
    else:
        v = Variant.NO_SOLUTION
    return SolutionClass(v, zs, zw, tol_class)


# -- the orbit through (ti, 1) --------------------------------------------------

@dataclass(frozen=True)
class GammaOrbit:
    """Orbit of the time-reversed field from ``(ti, U(1))`` down to ``U = 0``.

    ``trajectory`` is parametrised by reversed fast time ``s = -tau``.
    """

    trajectory: Trajectory
    reached_axis: bool
    t_landing: float
    tau_landing: float
    bump: bool


def _reaction_horizon(params: ModelParams, beta: float) -> float:
    # four times the longest possible reaction-zone duration in fast time
    return 4.0 * (1.0 / (1.0 - params.alpha)) / (beta * params.phi_min)


def backward_orbit_gamma(
    params: ModelParams, flow: FlowParams, cfg: IntegratorConfig = DEFAULT_CONFIG
) -> GammaOrbit:
    flow.check(params)
    rhs = model.make_field_u(params, flow, sign=-1.0)
    u1 = model.z_to_u(params.alpha, 1.0)
    traj = integrate(
        rhs,
        (params.ti, u1),
        events=[
            CrossesValue(1, 0.0, -1, EVENT_TOL),
            CrossesValue(0, params.ti, -1, EVENT_TOL),
            ExceedsTime(_reaction_horizon(params, flow.beta)),
        ],
        cfg=cfg,
    )
    reached = traj.event_fired and traj.terminal.event_index == 0
    t_land, _ = traj.terminal.state
    slope = np.array([rhs(0.0, tuple(s))[0] for s in traj.states[1:]])
    signs = np.sign(slope[np.abs(slope) > 1e-13])
    bump = bool(np.any(signs[1:] != signs[:-1])) if signs.size > 1 else False
    return GammaOrbit(traj, reached, t_land, traj.terminal.time, bump)


# -- profiles -------------------------------------------------------------------

SHOCK, REACTION, BURNT = "shock", "reaction", "burnt"


@dataclass
class WaveProfile:
    xi: np.ndarray
    t_val: np.ndarray
    z: np.ndarray
    region: list
    ell: float
    t_minus: float
    variant: Variant
    jumps: dict = field(default_factory=dict)

    def rows(self):
        return zip(self.xi, self.t_val, self.z, self.region)


def shock_temperature(params: ModelParams, flow: FlowParams, xi) -> np.ndarray:
    """Viscous shock tail ahead of the ignition point, ``xi >= 0``."""
    c, beta, ti = flow.c, flow.beta, params.ti
    xi = np.asarray(xi, dtype=float)
    return 2.0 * c / (1.0 + ((2.0 * c - ti) / ti) * np.exp(c * xi / beta))


def profile(
    params: ModelParams,
    flow: FlowParams,
    xi_min: float,
    xi_max: float,
    n_samples: int,
    tol_class: float = TOL_CLASS,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
) -> WaveProfile:
    """Sample the three-region wave on ``[xi_min, xi_max]`` in slow coordinate ``xi``.

    The ignition point ``xi = 0`` and the trailing interface ``xi = -ell`` are
    added to the sample set when they fall inside the range.
    """
    if not xi_min < xi_max or n_samples < 2:
        raise ValueError("need xi_min < xi_max and n_samples >= 2")
    kind = classify(params, flow, tol_class, cfg)
    if not kind.is_solution:
        raise ProfileUndefined(f"no traveling wave at beta = {flow.beta}, c = {flow.c}")
    beta = flow.beta
    t0, t1 = model.equilibria(params, flow.c)

    # reaction zone, integrated in s = -xi
    rhs = model.make_field_u(params, flow, sign=-1.0)

    def slow_rhs(s, y):
        a, b = rhs(s, y)
        return (a / beta, b / beta)

    react = integrate(
        slow_rhs,
        (params.ti, model.z_to_u(params.alpha, 1.0)),
        events=[
            CrossesValue(1, 0.0, -1, EVENT_TOL),
            CrossesValue(0, params.ti, -1, EVENT_TOL),
            ExceedsTime(beta * _reaction_horizon(params, beta)),
        ],
        cfg=cfg,
    )
    if not (react.event_fired and react.terminal.event_index == 0):
        raise ProfileUndefined("reaction-zone orbit left the domain before Z vanished")
    ell = react.terminal.time
    t_bar = react.terminal.state[0]

    # burnt region: beta T_xi = P_c(T); in s = -xi - ell this relaxes toward T_minus
    if kind.variant.is_special:
        t_minus = t_bar
    elif kind.variant is Variant.CJ_BUMP:
        t_minus = model.cj_velocity(params)
    else:
        t_minus = t0
    s_max = -xi_min - ell
    burnt = None
    if not kind.variant.is_special and s_max > 0.0:
        q0, c = params.q0, flow.c

        def burnt_rhs(_s, y):
            t_val = y[0]
            return (-(-c * t_val + 0.5 * t_val * t_val + q0) / beta, 0.0)

        burnt = integrate(burnt_rhs, (t_bar, 0.0), events=[ExceedsTime(s_max)], cfg=cfg)

    xs = set(np.linspace(xi_min, xi_max, n_samples).tolist())
    for marker in (0.0, -ell):
        if xi_min <= marker <= xi_max:
            xs.add(marker)
    xs = np.array(sorted(xs))

    t_out = np.empty_like(xs)
    z_out = np.empty_like(xs)
    regions = []
    for k, x in enumerate(xs):
        if x > 0.0:
            t_out[k] = shock_temperature(params, flow, x)
            z_out[k] = 1.0
            regions.append(SHOCK)
        elif x >= -ell:
            tv, u = react.at(-x)
            t_out[k] = tv
            z_out[k] = model.u_to_z(params.alpha, max(u, 0.0))
            regions.append(REACTION)
        else:
            t_out[k] = t_bar if burnt is None else burnt.at(min(-x - ell, burnt.final_time))[0]
            z_out[k] = 0.0
            regions.append(BURNT)

    # temperature is continuous across both interfaces by construction
    jumps = {
        "ignition": abs(float(shock_temperature(params, flow, 0.0)) - react.at(0.0)[0]),
        "interface": abs(t_bar - react.final_state[0]),
    }
    return WaveProfile(xs, t_out, z_out, regions, ell, t_minus, kind.variant, jumps)


# -- asymptotic checks --------------------------------------------------------------

def contact_order_estimate(
    params: ModelParams,
    flow: FlowParams,
    which: str = "strong",
    cfg: IntegratorConfig = IntegratorConfig(rtol=1e-12, atol=1e-24),
    window_scale: float = 0.01,
) -> float:
    """Fitted exponent ``k`` in ``T - T_eq ~ -const * U**k`` along the orbit leaving an equilibrium.

    The orbit is integrated in the shifted coordinate ``x = T - T_eq`` so the
    tiny departures near the axis are resolved to relative precision.  The fit
    uses one decade ``U in [u_hi/10, u_hi]`` with ``u_hi`` a small multiple of
    the linear time scale ``beta / |T_eq - c|``.
    """
    flow.check(params)
    if model.is_cj(params, flow.c):
        raise DomainError("contact order needs c above the CJ velocity")
    t0, t1 = model.equilibria(params, flow.c)
    if which == "strong":
        t_eq = t0
    elif which == "weak":
        t_eq = t1
        if t1 <= params.ti:
            raise DomainError("weak equilibrium lies outside the domain for this speed")
    else:
        raise ValueError(f"which must be 'strong' or 'weak', got {which!r}")
    lam = t_eq - flow.c
    q0, beta, alpha, ti = params.q0, flow.beta, params.alpha, params.ti
    spec = params.kinetics

    def rhs(_tau, y):
        x, u = y
        return (
            lam * x + 0.5 * x * x - q0 * model.u_to_z(alpha, max(u, 0.0)),
            beta * model.kinetics_eval(spec, ti, t_eq + x),
        )

    u_hi = window_scale * beta / max(abs(lam), beta)
    traj = integrate(
        rhs,
        (0.0, 0.0),
        events=[CrossesValue(1, u_hi, +1, 1e-15), CrossesValue(0, ti - t_eq, -1, 1e-12)],
        cfg=cfg,
    )
    if traj.terminal.event_index != 0:
        raise InsufficientRange("orbit reached the ignition line before one decade of U")
    us = np.geomspace(u_hi / 10.0, u_hi, 40)
    tau_grid = traj.times
    u_path = traj.states[:, 1]
    taus = np.interp(us, u_path, tau_grid)
    xs = np.array([traj.at(float(t))[0] for t in taus])
    if np.any(xs >= 0.0):
        raise InsufficientRange("orbit does not leave the equilibrium on the expected side")
    slope, _ = np.polyfit(np.log(us), np.log(-xs), 1)
    return float(slope)


def center_manifold_residual(
    params: ModelParams,
    beta: float,
    c: float,
    z_probe: float,
    cfg: IntegratorConfig = IntegratorConfig(rtol=1e-13, atol=1e-16),
) -> float:
    """Distance at ``Z = z_probe`` between the compactified orbit and the
    two-term center-manifold expansion ``eps/2 + q0 (1 - Z) eps**3 / 4``."""
    if not 0.0 < z_probe < 1.0:
        raise DomainError("z_probe must lie in (0, 1)")
    eps = 1.0 / c
    rhs = model.make_field_compactified(params, beta, eps)
    v_start = eps / 2.0
    traj = integrate(rhs, (v_start, 1.0), events=[CrossesValue(1, z_probe, -1, 1e-14)], cfg=cfg)
    v_obs = traj.terminal.state[0]
    return abs(v_obs - (eps / 2.0 + params.q0 * (1.0 - z_probe) * eps**3 / 4.0))
