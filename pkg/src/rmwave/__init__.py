"""Traveling reactive shock waves with fractional reaction order."""
from .analytic import analytic_beta0, analytic_beta1, solve_beta_cj
from .bifurcation import (
    BifurcationCurve,
    CurvePoint,
    find_cj_point,
    find_turning_point,
    solve_beta0,
    solve_beta1,
    trace_curves,
)
from .integrator import IntegratorConfig, integrate
from .model import FlowParams, KineticsSpec, ModelParams, c_star, cj_velocity, equilibria
from .transition import SolutionClass, Variant, classify, profile, z0, z1

__all__ = [
    "BifurcationCurve",
    "CurvePoint",
    "FlowParams",
    "IntegratorConfig",
    "KineticsSpec",
    "ModelParams",
    "SolutionClass",
    "Variant",
    "analytic_beta0",
    "analytic_beta1",
    "c_star",
    "cj_velocity",
    "classify",
    "equilibria",
    "find_cj_point",
    "find_turning_point",
    "integrate",
    "profile",
    "solve_beta0",
    "solve_beta1",
    "solve_beta_cj",
    "trace_curves",
    "z0",
    "z1",
]
