"""Problem constants, kinetics and the planar vector fields of the reaction zone.

Three charts are used throughout:

* ``(T, Z)`` temperature / mass fraction, the fast-time field ``field_fast``;
* ``(T, U)`` with ``U = Z**(1-alpha) / (1-alpha)``, the regularised field
  ``field_u`` which has no zero on the domain ``{T >= ti, U >= 0}``;
* ``(V, Z)`` with ``V = 1/T`` and ``eps = 1/c``, the compactified field used
  for the large-speed analysis.

The rate constant of the kinetics is absorbed into ``beta`` (K = 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

from .errors import DomainError

HEAVISIDE = "heaviside"
ARRHENIUS = "arrhenius"

Field = Callable[[float, tuple], tuple]


@dataclass(frozen=True)
class KineticsSpec:
    """Ignition-temperature kinetics ``phi(T) = H(T - ti) exp(-ta / T)``.

    Heaviside is the ``ta = 0`` member of the family.
    """

    variant: str = HEAVISIDE
    ta: float = 0.0

    def __post_init__(self):
        if self.variant not in (HEAVISIDE, ARRHENIUS):
            raise DomainError(f"unknown kinetics variant {self.variant!r}")
        if not (math.isfinite(self.ta) and self.ta >= 0.0):
            raise DomainError(f"ta must be finite and >= 0, got {self.ta}")
        if self.variant == HEAVISIDE and self.ta != 0.0:
            raise DomainError("Heaviside kinetics takes no activation temperature")

    @classmethod
    def heaviside(cls) -> KineticsSpec:
        return cls(HEAVISIDE, 0.0)

    @classmethod
    def arrhenius(cls, ta: float) -> KineticsSpec:
        return cls(ARRHENIUS, float(ta))

    @property
    def psi0(self) -> float:
        """Value at infinite temperature, ``lim phi(T)`` as ``T -> inf``."""
        return 1.0


@dataclass(frozen=True)
class ModelParams:
    alpha: float = 0.5
    q0: float = 2.0
    ti: float = 0.5
    kinetics: KineticsSpec = field(default_factory=KineticsSpec)

    def __post_init__(self):
        problems = []
        if not 0.0 <= self.alpha < 1.0:
            problems.append(f"alpha must lie in [0, 1), got {self.alpha}")
        if not self.q0 > 0.0:
            problems.append(f"q0 must be > 0, got {self.q0}")
        elif not 0.0 < self.ti < math.sqrt(2.0 * self.q0):
            problems.append(
                f"ti must lie in (0, sqrt(2*q0)) = (0, {math.sqrt(2 * self.q0):.6g}), got {self.ti}"
            )
        if problems:
            raise DomainError("; ".join(problems))

    @property
    def phi_min(self) -> float:
        """Smallest reaction rate on ``T >= ti``."""
        return kinetics_eval(self.kinetics, self.ti, self.ti)


@dataclass(frozen=True)
class FlowParams:
    beta: float
    c: float

    def __post_init__(self):
        if not (self.beta > 0.0 and math.isfinite(self.beta)):
            raise DomainError(f"beta must be finite and > 0, got {self.beta}")
        if not math.isfinite(self.c):
            raise DomainError(f"c must be finite, got {self.c}")

    def check(self, params: ModelParams) -> FlowParams:
        if self.c < cj_velocity(params):
            raise DomainError(
                f"c = {self.c} is below the CJ velocity {cj_velocity(params):.12g}"
            )
        return self


class PhaseState(NamedTuple):
    t_val: float
    z: float


class UState(NamedTuple):
    t_val: float
    u: float


class VState(NamedTuple):
    v: float
    z: float


# -- constants ----------------------------------------------------------------

def cj_velocity(params: ModelParams) -> float:
    return math.sqrt(2.0 * params.q0)


def c_star(params: ModelParams) -> float:
    """Speed above which the weak equilibrium ``T1(c)`` sits at or below ``ti``."""
    return (params.ti**2 + 2.0 * params.q0) / (2.0 * params.ti)


def is_cj(params: ModelParams, c: float, rel_tol: float = 1e-9) -> bool:
    cj = cj_velocity(params)
    return abs(c - cj) <= rel_tol * cj


def equilibria(params: ModelParams, c: float) -> tuple[float, float]:
    """Roots ``(T0, T1)`` of ``P_c(T) = T**2/2 - c*T + q0``."""
    disc = c * c - 2.0 * params.q0
    if disc < 0.0:
        if is_cj(params, c):
            disc = 0.0
        else:
            raise DomainError(
                f"c = {c} is below the CJ velocity {cj_velocity(params):.12g}"
            )
    root = math.sqrt(disc)
    t0 = c + root
    # product of roots is 2*q0; avoids cancellation in c - root for large c
    t1 = 2.0 * params.q0 / t0
    return t0, t1


def pc(params: ModelParams, c: float, t_val: float) -> float:
    return -c * t_val + 0.5 * t_val * t_val + params.q0


def kinetics_eval(spec: KineticsSpec, ti: float, t_val: float) -> float:
    if t_val < ti:
        return 0.0
    if spec.ta == 0.0:
        return 1.0
    return math.exp(-spec.ta / t_val)


# -- coordinate changes -------------------------------------------------------

def z_to_u(alpha: float, z: float) -> float:
    return z ** (1.0 - alpha) / (1.0 - alpha)


def u_to_z(alpha: float, u: float) -> float:
    return ((1.0 - alpha) * u) ** (1.0 / (1.0 - alpha))


def homocline_z(params: ModelParams, c: float, t_val: float) -> float:
    """Mass fraction on the curve where the temperature component of the field vanishes."""
    return pc(params, c, t_val) / params.q0


def ignition_contact(params: ModelParams, c: float) -> tuple[float, float]:
    """``(Z_i, U_i)``: the quadratic contact of the field with ``{T = ti}``."""
    zi = homocline_z(params, c, params.ti)
    if zi < 0.0:
        raise DomainError(
            f"c = {c} exceeds c_star = {c_star(params):.12g}; the contact point leaves the domain"
        )
    return zi, z_to_u(params.alpha, zi)


# -- vector fields ------------------------------------------------------------
# Powers use an odd extension below the axis so that Runge-Kutta stages that
# overshoot Z = 0 (or U = 0) near a terminal event stay real-valued.

def _signed_pow(x: float, p: float) -> float:
    if x >= 0.0:
        return x**p
    return -((-x) ** p)


def make_field_fast(params: ModelParams, flow: FlowParams) -> Field:
    c, beta, q0, alpha, ti = flow.c, flow.beta, params.q0, params.alpha, params.ti
    spec = params.kinetics

    def rhs(_tau, y):
        t_val, z = y
        return (
            -c * t_val + 0.5 * t_val * t_val + q0 * (1.0 - z),
            beta * kinetics_eval(spec, ti, t_val) * _signed_pow(z, alpha),
        )

    return rhs


def make_field_u(params: ModelParams, flow: FlowParams, sign: float = 1.0) -> Field:
    """Field in ``(T, U)``; ``sign=-1`` gives the time-reversed field."""
    c, beta, q0, ti = flow.c, flow.beta, params.q0, params.ti
    one_m = 1.0 - params.alpha
    p = 1.0 / one_m
    spec = params.kinetics
    heaviside = spec.ta == 0.0
    ta = spec.ta

    def rhs(_tau, y):
        t_val, u = y
        w = one_m * u
        z = w**p if w >= 0.0 else -((-w) ** p)
        if t_val < ti:
            rate = 0.0
        elif heaviside:
            rate = beta
        else:
            rate = beta * math.exp(-ta / t_val)
        return (
            sign * (-c * t_val + 0.5 * t_val * t_val + q0 * (1.0 - z)),
            sign * rate,
        )

    return rhs


def make_field_compactified(params: ModelParams, beta: float, eps: float) -> Field:
    """Compactified field in ``(V, Z)``, ``V = 1/T``, ``eps = 1/c``.

    This is ``-field_fast / c`` written in ``V``; it extends smoothly to
    ``V = 0`` where the kinetics takes its limiting value ``psi0``.
    """
    if not eps > 0.0:
        raise DomainError(f"eps must be > 0, got {eps}")
    spec = params.kinetics
    psi0 = spec.psi0
    if not (math.isfinite(psi0) and psi0 > 0.0):
        raise DomainError("kinetics has no positive finite limit at infinite temperature")
    q0, alpha, ti = params.q0, params.alpha, params.ti

    def psi(v):
        if v == 0.0:
            return psi0
        return kinetics_eval(spec, ti, 1.0 / v)

    def rhs(_s, y):
        v, z = y
        return (
            -v + eps * (0.5 + q0 * (1.0 - z) * v * v),
            -eps * beta * psi(v) * _signed_pow(z, alpha),
        )

    return rhs


def field_fast(params: ModelParams, flow: FlowParams, s: PhaseState) -> tuple[float, float]:
    return make_field_fast(params, flow)(0.0, tuple(s))


def field_u(params: ModelParams, flow: FlowParams, s: UState) -> tuple[float, float]:
    return make_field_u(params, flow)(0.0, tuple(s))


def field_compactified(params: ModelParams, beta: float, eps: float, s: VState) -> tuple[float, float]:
    return make_field_compactified(params, beta, eps)(0.0, tuple(s))
