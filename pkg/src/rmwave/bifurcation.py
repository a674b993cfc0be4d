"""Special-type curves ``beta0(c)``, ``beta1(c)`` and their critical points.

Both curves are level sets ``z(beta, c) = 1`` of a transition map that is
strictly increasing in ``beta``, so each root is bracketed by geometric
expansion and then bisected.  Bisection is deliberate: the map is only
Hoelder in ``beta`` near the root and every evaluation is an ODE solve.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import model, transition
from .errors import (
    BracketFailure,
    Diverged,
    DomainError,
    NoInteriorMinimum,
    RMWaveError,
)
from .integrator import DEFAULT_CONFIG, IntegratorConfig
from .model import FlowParams, ModelParams

BETA_TOL = 1e-8
BETA_CAP = 50.0
MAX_EXPANSIONS = 60
WARM_WIDTH = 0.05


class Branch(enum.Enum):
    BETA0 = "Beta0"
    BETA1 = "Beta1"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CurvePoint:
    c: float
    beta: float
    residual: float
    bracket: float
    n_evals: int


@dataclass
class BifurcationCurve:
    branch: Branch
    points: list
    metadata: dict = field(default_factory=dict)

    @property
    def c(self) -> np.ndarray:
        return np.array([p.c for p in self.points])

    @property
    def beta(self) -> np.ndarray:
        return np.array([p.beta for p in self.points])

    def point_at(self, c: float, atol: float = 1e-12):
        for p in self.points:
            if abs(p.c - c) <= atol:
                return p
        return None


@dataclass(frozen=True)
class TurningPoint:
    beta_bar: float
    c_bar: float
    fit_residual: float
    local_minima: tuple


@dataclass(frozen=True)
class CriticalPoints:
    cj_point: tuple
    turning_point: TurningPoint


def c_grid(c_min: float, c_max: float, step: float) -> list:
    """Uniform grid ``c_min + k*step`` up to ``c_max`` inclusive, free of drift."""
    if not step > 0:
        raise DomainError(f"grid step must be > 0, got {step}")
    if c_max < c_min:
        raise DomainError(f"c_max = {c_max} is below c_min = {c_min}")
    n = int(math.floor((c_max - c_min) / step + 1e-9))
    return [round(c_min + k * step, 12) for k in range(n + 1)]


def _bisect_root(
    g: Callable[[float], float],
    beta_tol: float,
    hint: float | None = None,
    beta_cap: float = math.inf,
) -> tuple:
    """Root of the increasing function ``g``; returns ``(beta, residual, bracket, n_evals)``."""
    n = 0

    def ev(b):
        nonlocal n
        n += 1
        return g(b)

    if hint is None:
        lo, hi = 0.01, 1.0
    else:
        lo, hi = hint * (1.0 - WARM_WIDTH), hint * (1.0 + WARM_WIDTH)

    expansions = 0
    upper = None
    g_lo = ev(lo)
    while g_lo >= 0.0:
        if g_lo == 0.0:
            return lo, 0.0, 0.0, n
        upper = lo
        lo *= 0.5
        expansions += 1
        if expansions > MAX_EXPANSIONS:
            raise BracketFailure("g stays >= 0 while shrinking beta toward 0")
        g_lo = ev(lo)
    if upper is not None:
        hi = upper
    else:
        g_hi = ev(hi)
        while g_hi <= 0.0:
            if g_hi == 0.0:
                return hi, 0.0, 0.0, n
            lo = hi
            if lo > beta_cap:
                raise Diverged(f"root exceeds beta_cap = {beta_cap}")
            hi *= 2.0
            expansions += 1
            if expansions > MAX_EXPANSIONS:
                raise BracketFailure("g stays <= 0 while growing beta")
            g_hi = ev(hi)

    while hi - lo > beta_tol:
        mid = 0.5 * (lo + hi)
        g_mid = ev(mid)
        if g_mid == 0.0:
            return mid, 0.0, 0.0, n
        if g_mid < 0.0:
            lo = mid
        else:
            hi = mid
    beta = 0.5 * (lo + hi)
    if beta > beta_cap:
        raise Diverged(f"root {beta:.6g} exceeds beta_cap = {beta_cap}")
    return beta, abs(ev(beta)), hi - lo, n


def solve_beta0(
    params: ModelParams,
    c: float,
    beta_tol: float = BETA_TOL,
    hint: float | None = None,
    beta_cap: float = math.inf,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
) -> CurvePoint:
    """``beta0(c)``: the strong special-type wave, ``z0(beta, c) = 1``."""
    if c < model.cj_velocity(params) and not model.is_cj(params, c):
        raise DomainError(f"c = {c} is below the CJ velocity {model.cj_velocity(params):.12g}")

    def g(b):
        return transition.z0(params, FlowParams(b, c), cfg) - 1.0

    beta, res, br, n = _bisect_root(g, beta_tol, hint, beta_cap)
    return CurvePoint(c, beta, res, br, n)


def solve_beta1(
    params: ModelParams,
    c: float,
    beta_tol: float = BETA_TOL,
    hint: float | None = None,
    beta_cap: float = math.inf,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
) -> CurvePoint:
    """``beta1(c)``: the weak special-type wave, ``z1(beta, c) = 1``; needs ``c < c_star``."""
    if c < model.cj_velocity(params) and not model.is_cj(params, c):
        raise DomainError(f"c = {c} is below the CJ velocity {model.cj_velocity(params):.12g}")
    cs = model.c_star(params)
    if c >= cs:
        raise DomainError(f"beta1 is defined only for c < c_star = {cs:.12g}, got c = {c}")

    def g(b):
        return transition.z1(params, FlowParams(b, c), cfg) - 1.0

    beta, res, br, n = _bisect_root(g, beta_tol, hint, beta_cap)
    return CurvePoint(c, beta, res, br, n)


# -- tracing ------------------------------------------------------------------

def _solve_cold(args):
    """Worker for the parallel tracer: both branches at one speed, no warm start."""
    params, c, beta_tol, beta_cap, cfg = args
    return _solve_both(params, c, beta_tol, beta_cap, cfg, None, None, True)


def _solve_both(params, c, beta_tol, beta_cap, cfg, hint0, hint1, want1):
    try:
        r0 = solve_beta0(params, c, beta_tol, hint0, math.inf, cfg)
    except (RMWaveError, ArithmeticError) as exc:
        r0 = f"{type(exc).__name__}: {exc}"
    r1 = None
    if want1 and c < model.c_star(params):
        try:
            r1 = solve_beta1(params, c, beta_tol, hint1, beta_cap, cfg)
        except Diverged:
            r1 = "Diverged"
        except (RMWaveError, ArithmeticError) as exc:
            r1 = f"{type(exc).__name__}: {exc}"
    return r0, r1


def trace_curves(
    params: ModelParams,
    cs: Sequence[float],
    beta_tol: float = BETA_TOL,
    warm_start: bool = True,
    jobs: int = 1,
    beta_cap: float = BETA_CAP,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
) -> tuple:
    """Trace ``beta0`` and ``beta1`` over the speeds ``cs`` (strictly increasing).

    ``jobs > 1`` fans grid points out to worker processes and always starts
    cold; the serial path warm-starts from the previous root unless told not
    to.  ``beta1`` stops at ``c_star`` or at the first root above ``beta_cap``.
    Per-point failures are recorded in the metadata and the trace continues.
    """
    cs = [float(c) for c in cs]
    if any(b <= a for a, b in zip(cs, cs[1:])):
        raise DomainError("speed grid must be strictly increasing")
    if cs and cs[0] < model.cj_velocity(params) and not model.is_cj(params, cs[0]):
        raise DomainError("speed grid starts below the CJ velocity")

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_solve_cold, [(params, c, beta_tol, beta_cap, cfg) for c in cs]))
    else:
        results = []
        hint0 = hint1 = None
        alive1 = True
        for c in cs:
            r0, r1 = _solve_both(params, c, beta_tol, beta_cap, cfg, hint0, hint1, alive1)
            if r1 == "Diverged":
                alive1 = False
            if warm_start:
                hint0 = r0.beta if isinstance(r0, CurvePoint) else None
                hint1 = r1.beta if isinstance(r1, CurvePoint) else None
            results.append((r0, r1))

    meta = {
        "params": params,
        "beta_tol": beta_tol,
        "beta_cap": beta_cap,
        "grid": tuple(cs),
        "warm_start": warm_start and jobs <= 1,
        "c_star": model.c_star(params),
    }
    pts0, pts1, fail0, fail1 = [], [], [], []
    diverged_at = None
    for c, (r0, r1) in zip(cs, results):
        if isinstance(r0, CurvePoint):
            pts0.append(r0)
        else:
            fail0.append((c, r0))
        if diverged_at is not None:
            continue
        if isinstance(r1, CurvePoint):
            pts1.append(r1)
        elif r1 == "Diverged":
            diverged_at = c
        elif r1 is not None:
            fail1.append((c, r1))
    curve0 = BifurcationCurve(Branch.BETA0, pts0, {**meta, "failed": fail0})
    curve1 = BifurcationCurve(
        Branch.BETA1, pts1, {**meta, "failed": fail1, "diverged_at": diverged_at}
    )
    return curve0, curve1


# -- critical points ----------------------------------------------------------------

def find_cj_point(
    params: ModelParams, beta_tol: float = BETA_TOL, cfg: IntegratorConfig = DEFAULT_CONFIG
) -> tuple:
    """``(beta_cj, c_cj)`` where the two special-type curves meet."""
    c_cj = model.cj_velocity(params)
    p0 = solve_beta0(params, c_cj, beta_tol, cfg=cfg)
    p1 = solve_beta1(params, c_cj, beta_tol, cfg=cfg)
    if abs(p0.beta - p1.beta) > 10.0 * beta_tol:
        raise RMWaveError(
            f"beta0 and beta1 disagree at the CJ speed: {p0.beta!r} vs {p1.beta!r}"
        )
    return p0.beta, c_cj


def _local_minima(cs, bs):
    return tuple(
        (float(cs[i]), float(bs[i]))
        for i in range(1, len(bs) - 1)
        if bs[i] < bs[i - 1] and bs[i] <= bs[i + 1]
    )


def find_turning_point(curve: BifurcationCurve, beta_tol: float | None = None) -> TurningPoint:
    """Vertex of the parabola through the grid minimum of ``beta0`` and its neighbours.

    All interior local minima of the grid data are reported; uniqueness of
    the turning point is not assumed.
    """
    if curve.branch is not Branch.BETA0:
        raise ValueError("turning point is defined on the Beta0 branch")
    if len(curve.points) < 3:
        raise NoInteriorMinimum("need at least three curve points")
    tol = curve.metadata.get("beta_tol", BETA_TOL) if beta_tol is None else beta_tol
    cs, bs = curve.c, curve.beta
    i = int(np.argmin(bs))
    if i == 0 or i == len(bs) - 1:
        raise NoInteriorMinimum(
            f"grid minimum sits on the boundary at c = {cs[i]}; extend the grid"
        )
    x, y = cs[i - 1 : i + 2], bs[i - 1 : i + 2]
    a2, a1, a0 = np.polyfit(x - x[1], y, 2)
    c_off = -a1 / (2.0 * a2)
    beta_bar = float(a0 + a1 * c_off + a2 * c_off * c_off)
    fit = float(np.max(np.abs(np.polyval([a2, a1, a0], x - x[1]) - y)))
    if beta_bar > float(bs.min()) + tol:
        raise RMWaveError("refined turning point lies above the grid minimum")
    return TurningPoint(beta_bar, float(x[1] + c_off), fit, _local_minima(cs, bs))


def find_critical_points(
    params: ModelParams,
    cs: Sequence[float],
    beta_tol: float = BETA_TOL,
    cfg: IntegratorConfig = DEFAULT_CONFIG,
) -> CriticalPoints:
    cj = find_cj_point(params, beta_tol, cfg)
    pts = []
    hint = None
    for c in cs:
        p = solve_beta0(params, c, beta_tol, hint, cfg=cfg)
        hint = p.beta
        pts.append(p)
    curve = BifurcationCurve(Branch.BETA0, pts, {"beta_tol": beta_tol})
    return CriticalPoints(cj, find_turning_point(curve, beta_tol))
