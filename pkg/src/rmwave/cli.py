"""Command-line front end.

Subcommands ``classify``, ``profile``, ``trace``, ``critical`` and
``validate``.  Settings come from built-in defaults, then an optional flat
``key=value`` config file, then command-line flags, each overriding the last.
Numeric output is CSV with 15 significant digits and LF line endings.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass, fields, replace

from . import analytic, bifurcation, model, transition
from .errors import (
    DomainError,
    NoInteriorMinimum,
    ProfileUndefined,
    RMWaveError,
)
from .integrator import IntegratorConfig
from .model import FlowParams, KineticsSpec, ModelParams

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_ERROR = 2
EXIT_NO_SOLUTION = 3

PRECISION = 15
VALIDATE_SPEEDS = (2.0, 2.2, 2.5, 3.0, 3.5)


@dataclass(frozen=True)
class RunConfig:
    alpha: float = 0.5
    q0: float = 2.0
    ti: float = 0.5
    kinetics: str = model.HEAVISIDE
    ta: float | None = None
    beta: float | None = None
    c: float | None = None
    c_min: float = 2.0
    c_max: float = 5.0
    c_step: float = 0.02
    rtol: float = 1e-12
    atol: float = 1e-14
    beta_tol: float = bifurcation.BETA_TOL
    tol_class: float = transition.TOL_CLASS
    xi_min: float = -6.0
    xi_max: float = 2.0
    n: int = 401
    jobs: int = 1
    out: str | None = None

    def model_params(self) -> ModelParams:
        if self.kinetics == model.ARRHENIUS:
            spec = KineticsSpec.arrhenius(1.0 if self.ta is None else self.ta)
        else:
            spec = KineticsSpec(self.kinetics, 0.0 if self.ta is None else self.ta)
        return ModelParams(self.alpha, self.q0, self.ti, spec)

    def solver(self) -> IntegratorConfig:
        return IntegratorConfig(rtol=self.rtol, atol=self.atol)

    def validate(self) -> list:
        """Problems with field names; empty when the config is usable."""
        problems = []
        try:
            self.model_params()
        except DomainError as exc:
            problems.append(f"model: {exc}")
        try:
            self.solver()
        except ValueError as exc:
            problems.append(f"rtol/atol: {exc}")
        for name in ("c_step", "beta_tol", "tol_class"):
            if not getattr(self, name) > 0:
                problems.append(f"{name} must be > 0")
        if self.c_max < self.c_min:
            problems.append("c_max must be >= c_min")
        if self.jobs < 1:
            problems.append("jobs must be >= 1")
        if self.n < 2:
            problems.append("n must be >= 2")
        if not self.xi_min < self.xi_max:
            problems.append("xi_min must be < xi_max")
        if self.beta is not None and not self.beta > 0:
            problems.append("beta must be > 0")
        return problems


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    if "int" in kind:
        return int(raw)
    if "float" in kind:
        return float(raw)
    return raw


def read_config_file(path: str) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected key=value")
            key, raw = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _FIELD_TYPES:
                raise DomainError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                values[key] = _coerce(key, raw)
            except ValueError:
                raise DomainError(f"{path}:{lineno}: bad value for {key}: {raw!r}") from None
    return values


# -- CSV ---------------------------------------------------------------------------

def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    text = f"{x:.{PRECISION}g}"
    if math.isfinite(x) and not math.isfinite(float(text)):
        # rounding up near the largest double would read back as inf
        return f"{x:.17g}"
    return text


def write_csv(stream, header, rows, comments=()) -> None:
    for key, value in comments:
        stream.write(f"# {key}={fmt(value)}\n")
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])


def read_csv(stream) -> tuple:
    """Inverse of ``write_csv``: ``(comments, header, rows)`` with numeric cells as floats."""
    comments, body = [], []
    for line in stream.read().split("\n"):
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            comments.append((key, _number_or_text(value)))
        elif line:
            body.append(line)
    parsed = list(csv.reader(body))
    header, rows = parsed[0], [[_number_or_text(v) for v in r] for r in parsed[1:]]
    return comments, header, rows


def _number_or_text(cell: str):
    if cell == "":
        return None
    try:
        return float(cell)
    except ValueError:
        return cell


def _emit(cfg: RunConfig, header, rows, comments) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            write_csv(fh, header, rows, comments)
    else:
        buf = io.StringIO()
        write_csv(buf, header, rows, comments)
        sys.stdout.write(buf.getvalue())


# -- commands ---------------------------------------------------------------------

def _need_flow(cfg: RunConfig, params: ModelParams) -> FlowParams:
    if cfg.beta is None or cfg.c is None:
        raise DomainError("--beta and --c are required")
    return FlowParams(cfg.beta, cfg.c).check(params)


def _reaction_length(params, flow, solver):
    orbit = transition.backward_orbit_gamma(params, flow, solver)
    return flow.beta * orbit.tau_landing if orbit.reached_axis else None


def cmd_classify(cfg: RunConfig) -> int:
    params = cfg.model_params()
    flow = _need_flow(cfg, params)
    solver = cfg.solver()
    kind = transition.classify(params, flow, cfg.tol_class, solver)
    print(kind.variant)
    print(f"z0={fmt(kind.z0)}")
    print(f"z1={fmt(kind.z1) if kind.z1 is not None else 'n/a'}")
    if kind.is_solution:
        print(f"ell={fmt(_reaction_length(params, flow, solver))}")
        return EXIT_OK
    return EXIT_NO_SOLUTION


def cmd_profile(cfg: RunConfig) -> int:
    params = cfg.model_params()
    flow = _need_flow(cfg, params)
    try:
        wave = transition.profile(
            params, flow, cfg.xi_min, cfg.xi_max, cfg.n, cfg.tol_class, cfg.solver()
        )
    except ProfileUndefined as exc:
        print(f"no solution: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    comments = [
        ("variant", str(wave.variant)),
        ("beta", flow.beta),
        ("c", flow.c),
        ("ell", wave.ell),
        ("t_minus", wave.t_minus),
    ]
    rows = [(x, t, z, r) for x, t, z, r in wave.rows()]
    _emit(cfg, ["xi", "T", "Z", "region"], rows, comments)
    return EXIT_OK


def trace_rows(cfg: RunConfig) -> list:
    params = cfg.model_params()
    cs = bifurcation.c_grid(cfg.c_min, cfg.c_max, cfg.c_step)
    # cold start keeps the bytes independent of the worker count
    curve0, curve1 = bifurcation.trace_curves(
        params, cs, cfg.beta_tol, warm_start=False, jobs=cfg.jobs, cfg=cfg.solver()
    )
    c_star = model.c_star(params)
    diverged_at = curve1.metadata["diverged_at"]
    failed1 = {c for c, _ in curve1.metadata["failed"]}
    rows = []
    for c in cs:
        p0, p1 = curve0.point_at(c), curve1.point_at(c)
        if p0 is None or c in failed1:
            status = "failed"
        elif c >= c_star:
            status = "beyond_c_star"
        elif diverged_at is not None and c >= diverged_at:
            status = "diverged"
        else:
            status = "ok"
        rows.append((
            c,
            p0.beta if p0 else None,
            p1.beta if p1 else None,
            p0.residual if p0 else None,
            p1.residual if p1 else None,
            status,
        ))
    return rows


def cmd_trace(cfg: RunConfig) -> int:
    rows = trace_rows(cfg)
    header = ["c", "beta0", "beta1", "beta0_residual", "beta1_residual", "status"]
    comments = [("beta_tol", cfg.beta_tol), ("c_star", model.c_star(cfg.model_params()))]
    _emit(cfg, header, rows, comments)
    ok = sum(1 for r in rows if r[-1] != "failed")
    return EXIT_OK if ok >= 0.9 * len(rows) else EXIT_ERROR


def cmd_critical(cfg: RunConfig) -> int:
    params = cfg.model_params()
    solver = cfg.solver()
    beta_cj, c_cj = bifurcation.find_cj_point(params, cfg.beta_tol, solver)
    print(f"cj_point beta={fmt(beta_cj)} c={fmt(c_cj)}")
    cs = bifurcation.c_grid(cfg.c_min, cfg.c_max, cfg.c_step)
    try:
        crit = bifurcation.find_critical_points(params, cs, cfg.beta_tol, solver)
    except NoInteriorMinimum as exc:
        print(f"no interior minimum: {exc}", file=sys.stderr)
        return EXIT_ERROR
    tp = crit.turning_point
    print(f"turning_point beta={fmt(tp.beta_bar)} c={fmt(tp.c_bar)} fit_residual={fmt(tp.fit_residual)}")
    print(f"local_minima={len(tp.local_minima)}")
    for c, b in tp.local_minima:
        print(f"  c={fmt(c)} beta0={fmt(b)}")
    return EXIT_OK


def validation_checks(cfg: RunConfig) -> list:
    """Rows ``(name, value, target, passed)`` of the mutual-oracle suite."""
    params = cfg.model_params()
    if params.kinetics.variant != model.HEAVISIDE or params.alpha != 0.5:
        raise DomainError("validate needs Heaviside kinetics with alpha = 0.5")
    solver = cfg.solver()
    rows = []
    for c in VALIDATE_SPEEDS:
        if c < model.cj_velocity(params):
            continue
        shoot = bifurcation.solve_beta0(params, c, cfg.beta_tol, cfg=solver).beta
        gap = abs(analytic.analytic_beta0(c, params.q0, params.ti) - shoot)
        rows.append((f"beta0 c={c}", gap, "< 1e-6", gap < 1e-6))
        if c < model.c_star(params):
            shoot = bifurcation.solve_beta1(params, c, cfg.beta_tol, cfg=solver).beta
            gap = abs(analytic.analytic_beta1(c, params.q0, params.ti) - shoot)
            rows.append((f"beta1 c={c}", gap, "< 1e-6", gap < 1e-6))
    c_test = 0.5 * (model.cj_velocity(params) + model.c_star(params))
    for a in (0.0, 0.5):
        p = replace(params, alpha=a)
        k = transition.contact_order_estimate(p, FlowParams(1.0, c_test))
        expect = (2.0 - a) / (1.0 - a)
        rows.append((f"contact order alpha={a}", k, f"{expect:g} +- 5%", abs(k / expect - 1) <= 0.05))
    r25 = transition.center_manifold_residual(params, 1.0, 25.0, 0.5)
    r50 = transition.center_manifold_residual(params, 1.0, 50.0, 0.5)
    ratio = r25 / r50
    rows.append(("center manifold ratio", ratio, "16 within x2", 8.0 <= ratio <= 32.0))
    return rows


def cmd_validate(cfg: RunConfig) -> int:
    rows = validation_checks(cfg)
    width = max(len(r[0]) for r in rows)
    for name, value, target, ok in rows:
        print(f"{name:<{width}}  {fmt(value):>22}  {target:<14}  {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if all(r[3] for r in rows) else EXIT_VALIDATION


COMMANDS = {
    "classify": cmd_classify,
    "profile": cmd_profile,
    "trace": cmd_trace,
    "critical": cmd_critical,
    "validate": cmd_validate,
}


# -- argument parsing ---------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    sd = argparse.SUPPRESS
    for flag in ("alpha", "q0", "ti", "ta", "beta", "c", "c-min", "c-max", "c-step",
                 "rtol", "atol", "beta-tol", "tol-class", "xi-min", "xi-max"):
        common.add_argument(f"--{flag}", type=float, default=sd)
    common.add_argument("--kinetics", choices=[model.HEAVISIDE, model.ARRHENIUS], default=sd)
    common.add_argument("--n", type=int, default=sd, help="profile sample count")
    common.add_argument("--jobs", type=int, default=sd)
    common.add_argument("--out", default=sd, help="CSV path (stdout when omitted)")
    common.add_argument("--config", default=sd, help="flat key=value file")

    parser = _Parser(prog="rmwave", description="Traveling reactive shock waves.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "classify": "type of the wave at (beta, c)",
        "profile": "sampled wave profile as CSV",
        "trace": "beta0/beta1 curves over a speed grid as CSV",
        "critical": "CJ point and turning point",
        "validate": "shooting vs closed form and asymptotic checks",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


def resolve_config(ns: argparse.Namespace) -> RunConfig:
    given = {k: v for k, v in vars(ns).items() if k != "command"}
    merged = {}
    path = given.pop("config", None)
    if path:
        merged.update(read_config_file(path))
    merged.update(given)
    return RunConfig(**merged)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(ns)
    except (OSError, RMWaveError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    problems = cfg.validate()
    if problems:
        for p in problems:
            print(f"invalid config: {p}", file=sys.stderr)
        return EXIT_ERROR
    try:
        return COMMANDS[ns.command](cfg)
    except (RMWaveError, ArithmeticError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
