"""Closed-form route for Heaviside kinetics with reaction order 1/2.

With ``alpha = 1/2`` and Heaviside kinetics, ``U`` is linear in fast time and
the temperature obeys a Riccati equation solvable with Kummer functions.
Evaluating that solution at the trailing interface gives implicit equations
for the two special-type curves; at the CJ speed it reduces to Bessel
functions.  Everything here is independent of the ODE integrator and serves
as its cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import EnvelopeError, NoConvergence, NoRootInEnvelope, PoleError

# below 0.1 the series argument sqrt(2 q0)/beta exceeds ~30 and the ratio
# risks overflow; large beta only shrinks the argument, so the upper end
# follows the divergence cap of the tracer
BETA_ENVELOPE = (0.1, 50.0)
TERM_BUDGET = 100_000


@dataclass(frozen=True)
class SeriesResult:
    value: float
    terms_used: int
    truncation_estimate: float


def kummer_m(a: float, b: float, z: float, rel_tol: float = 1e-16) -> SeriesResult:
    """Confluent hypergeometric ``M(a; b; z)`` by direct power series.

    Accurate when the terms do not cancel (``a, b, z >= 0``); for modest
    negative ``z`` the alternating sum is still usable.
    """
    if b <= 0 and b == int(b):
        raise PoleError(f"M(a; b; z) has a pole at b = {b}")
    term = 1.0
    total = 1.0
    small = 0
    for n in range(TERM_BUDGET):
        term *= (a + n) * z / ((b + n) * (n + 1))
        total += term
        if abs(term) < rel_tol * abs(total):
            small += 1
            if small == 2:
                return SeriesResult(total, n + 2, abs(term))
        else:
            small = 0
        if term == 0.0:
            return SeriesResult(total, n + 2, 0.0)
    raise NoConvergence(f"M({a}; {b}; {z}) did not converge in {TERM_BUDGET} terms")


def bessel_i(v: float, z: float, rel_tol: float = 1e-16) -> SeriesResult:
    """Modified Bessel function of the first kind ``I_v(z)`` for ``z >= 0``, ``v > -1``."""
    if z < 0:
        raise ValueError("bessel_i needs z >= 0")
    if v <= -1:
        raise ValueError("bessel_i needs v > -1")
    if z == 0.0:
        # leading behaviour (z/2)**v: singular for negative order
        return SeriesResult(1.0 if v == 0 else 0.0 if v > 0 else math.inf, 1, 0.0)
    q = 0.25 * z * z
    term = 1.0 / math.gamma(v + 1.0)
    total = term
    small = 0
    for k in range(TERM_BUDGET):
        term *= q / ((k + 1) * (v + k + 1))
        total += term
        if abs(term) < rel_tol * abs(total):
            small += 1
            if small == 2:
                scale = z**v * 2.0 ** (-v)
                return SeriesResult(total * scale, k + 2, abs(term) * scale)
        else:
            small = 0
    raise NoConvergence(f"I_{v}({z}) did not converge in {TERM_BUDGET} terms")


def _m(a, b, z):
    return kummer_m(a, b, z).value


def _check_envelope(beta):
    lo, hi = BETA_ENVELOPE
    if not lo <= beta <= hi:
        raise EnvelopeError(f"beta = {beta} outside the validated range [{lo}, {hi}]")


def interface_temperature(beta: float, c: float, q0: float = 2.0, ti: float = 0.5) -> float:
    """Temperature where ``Z`` vanishes, for the orbit through ``(ti, 1)``.

    Closed form of the Riccati solution evaluated at fast time ``-2/beta``;
    only valid while that orbit stays in ``{T >= ti}``.
    """
    _check_envelope(beta)
    s2 = c * c - 2.0 * q0
    r = math.sqrt(2.0) * math.sqrt(q0)
    sq = math.sqrt(q0)
    z = r / beta

    def a(k):
        return (k * beta * sq + math.sqrt(2.0) * s2) / (8.0 * beta * sq)

    m1 = _m(a(2), 0.5, z)
    m3a = _m(a(6), 1.5, z)
    m3b = _m(a(10), 1.5, z)
    m5 = _m(a(14), 2.5, z)
    den = 3.0 * beta * (-r + beta - c + ti) * m3a + 3.0 * m5 * (beta * r + s2 / 3.0)
    num = 3.0 * beta * (-beta * (r + c - ti) * m1 + m3b * (beta * r + s2))
    return c + num / den


def heaviside_implicit_f0(beta: float, c: float, q0: float = 2.0, ti: float = 0.5) -> float:
    """Interface temperature minus the strong equilibrium; zero on the strong special curve."""
    s = math.sqrt(max(c * c - 2.0 * q0, 0.0))
    return interface_temperature(beta, c, q0, ti) - (c + s)


def heaviside_implicit_f1(beta: float, c: float, q0: float = 2.0, ti: float = 0.5) -> float:
    """Interface temperature minus the weak equilibrium; zero on the weak special curve."""
    s = math.sqrt(max(c * c - 2.0 * q0, 0.0))
    return interface_temperature(beta, c, q0, ti) - (c - s)


def beta_cj_equation(beta: float) -> float:
    """Bessel form of ``f0`` at the CJ speed for ``q0 = 2``, ``ti = 1/2``."""
    _check_envelope(beta)
    x = 1.0 / beta
    g34 = math.gamma(0.75)
    num = 3.0 * beta * g34**2 * math.sqrt(x) * (
        0.75 * bessel_i(-0.25, x).value - bessel_i(0.75, x).value
    )
    den = math.pi * (1.125 * bessel_i(0.25, x).value - 1.5 * bessel_i(-0.75, x).value)
    return num / den


def _bisect(f, lo, hi, tol):
    f_lo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = f(mid)
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _first_root(f, tol, n_scan=400):
    """First genuine downward zero of ``f`` scanning the beta envelope upward.

    Sign changes at poles of the closed form are rejected by checking that
    ``|f|`` shrinks under bisection.
    """
    lo, hi = BETA_ENVELOPE
    grid = [lo * (hi / lo) ** (k / n_scan) for k in range(n_scan + 1)]
    prev_b, prev_f = grid[0], f(grid[0])
    for b in grid[1:]:
        fb = f(b)
        if math.isfinite(prev_f) and math.isfinite(fb) and (prev_f > 0) != (fb > 0):
            root = _bisect(f, prev_b, b, tol)
            if abs(f(root)) <= 1e-6 * max(1.0, abs(prev_f), abs(fb)):
                return root
        prev_b, prev_f = b, fb
    raise NoRootInEnvelope("no root of the closed-form equation inside the beta envelope")


def solve_beta_cj(tol: float = 1e-13) -> float:
    return _first_root(beta_cj_equation, tol)


def analytic_beta0(c: float, q0: float = 2.0, ti: float = 0.5, tol: float = 1e-13) -> float:
    return _first_root(lambda b: heaviside_implicit_f0(b, c, q0, ti), tol)


def analytic_beta1(c: float, q0: float = 2.0, ti: float = 0.5, tol: float = 1e-13) -> float:
    return _first_root(lambda b: heaviside_implicit_f1(b, c, q0, ti), tol)
