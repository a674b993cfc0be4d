import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rmwave import model
from rmwave.errors import DomainError
from rmwave.model import FlowParams, KineticsSpec, ModelParams, PhaseState, UState, VState


def test_reference_constants(ref):
    assert model.cj_velocity(ref) == 2.0
    assert model.c_star(ref) == pytest.approx(4.25, abs=1e-15)
    assert model.equilibria(ref, 2.5) == pytest.approx((4.0, 1.0), abs=1e-14)


def test_cj_equilibria_coincide(ref):
    t0, t1 = model.equilibria(ref, 2.0)
    assert t0 == t1 == 2.0


def test_below_cj_rejected(ref):
    with pytest.raises(DomainError):
        model.equilibria(ref, 1.9)
    with pytest.raises(DomainError):
        FlowParams(0.4, 1.0).check(ref)


@pytest.mark.parametrize(
    "kwargs",
    [dict(alpha=1.0), dict(alpha=-0.1), dict(q0=0.0), dict(ti=0.0), dict(ti=2.0), dict(q0=1.0, ti=1.5)],
)
def test_invalid_params(kwargs):
    with pytest.raises(DomainError):
        ModelParams(**kwargs)


def test_kinetics_validation():
    with pytest.raises(DomainError):
        KineticsSpec("heaviside", 1.0)
    with pytest.raises(DomainError):
        KineticsSpec("first-order")
    with pytest.raises(DomainError):
        KineticsSpec.arrhenius(-1.0)


def test_flow_validation():
    with pytest.raises(DomainError):
        FlowParams(0.0, 2.5)
    with pytest.raises(DomainError):
        FlowParams(1.0, math.nan)


@given(st.floats(2.0, 50.0))
def test_equilibria_are_roots(c):
    p = ModelParams()
    t0, t1 = model.equilibria(p, c)
    assert t0 >= t1 > 0
    for t in (t0, t1):
        assert abs(model.pc(p, c, t)) <= 1e-10 * max(1.0, t * t)


@given(st.floats(0.0, 0.95), st.floats(1e-6, 1.0))
def test_u_chart_round_trip(alpha, z):
    u = model.z_to_u(alpha, z)
    assert model.u_to_z(alpha, u) == pytest.approx(z, rel=1e-12)


def test_kinetics_values(ref):
    spec = KineticsSpec.arrhenius(1.0)
    assert model.kinetics_eval(spec, 0.5, 0.4) == 0.0
    assert model.kinetics_eval(spec, 0.5, 2.0) == pytest.approx(math.exp(-0.5))
    assert model.kinetics_eval(ref.kinetics, 0.5, 0.5) == 1.0
    assert ModelParams(kinetics=spec).phi_min == pytest.approx(math.exp(-2.0))


def test_contact_point(ref):
    zi, ui = model.ignition_contact(ref, 2.5)
    assert zi == pytest.approx(model.pc(ref, 2.5, 0.5) / 2.0)
    assert ui == pytest.approx(2.0 * math.sqrt(zi))
    with pytest.raises(DomainError):
        model.ignition_contact(ref, 4.3)


@given(st.floats(0.5, 6.0), st.floats(0.01, 1.0), st.floats(0.1, 3.0), st.floats(2.0, 5.0))
def test_u_field_matches_chain_rule(t_val, z, beta, c):
    """U' = Z' Z^(-alpha) for the same state."""
    p = ModelParams()
    flow = FlowParams(beta, c)
    dt, dz = model.field_fast(p, flow, PhaseState(t_val, z))
    u = model.z_to_u(p.alpha, z)
    dt_u, du = model.field_u(p, flow, UState(t_val, u))
    assert dt_u == pytest.approx(dt, rel=1e-12, abs=1e-12)
    assert du == pytest.approx(dz * z ** (-p.alpha), rel=1e-12)


@given(st.floats(0.5, 20.0), st.floats(0.0, 1.0), st.floats(2.0, 40.0))
def test_compactified_is_rescaled_fast_field(t_val, z, c):
    p = ModelParams()
    beta = 0.7
    dt, dz = model.field_fast(p, FlowParams(beta, c), PhaseState(t_val, z))
    v = 1.0 / t_val
    dv, dz_c = model.field_compactified(p, beta, 1.0 / c, VState(v, z))
    # V' = -T'/T^2 and both scaled by -1/c
    assert dv == pytest.approx(dt / (c * t_val * t_val), rel=1e-9, abs=1e-12)
    assert dz_c == pytest.approx(-dz / c, rel=1e-12, abs=1e-15)


def test_compactified_at_infinity(ref):
    dv, dz = model.field_compactified(ref, 2.0, 0.1, VState(0.0, 0.25))
    assert dv == pytest.approx(0.05)
    assert dz == pytest.approx(-0.1 * 2.0 * 0.5)


def test_reversed_u_field(ref):
    f = model.make_field_u(ref, FlowParams(1.0, 2.5))
    g = model.make_field_u(ref, FlowParams(1.0, 2.5), sign=-1.0)
    a, b = f(0.0, (3.0, 0.4)), g(0.0, (3.0, 0.4))
    assert b == (-a[0], -a[1])


@pytest.mark.parametrize("alpha", [0.0, 0.25, 0.5, 0.75, 0.9])
@given(z=st.floats(1e-8, 10.0))
def test_round_trip_grid(alpha, z):
    assert model.u_to_z(alpha, model.z_to_u(alpha, z)) == pytest.approx(z, rel=1e-12)


@given(st.floats(0.5, 50.0), st.floats(0.0, 5.0), st.floats(1e-3, 10.0), st.floats(2.0, 10.0), st.floats(0.0, 3.0))
def test_u_field_transverse_to_axis(t_val, u, beta, c, ta):
    kin = KineticsSpec.arrhenius(ta) if ta > 0 else KineticsSpec.heaviside()
    p = ModelParams(kinetics=kin)
    assert model.field_u(p, FlowParams(beta, c), UState(t_val, u))[1] > 0.0
