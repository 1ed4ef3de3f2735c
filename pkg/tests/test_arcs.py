import math

import numpy as np
import pytest

import arcinterp as ai
from arcinterp.errors import DegenerateArc
from arcinterp.jets import variable_jet


def test_segment_is_identity_on_unit_interval(seg01):
    assert seg01.point(0.0) == 0.0
    assert seg01.point(1.0) == 1.0
    assert seg01.point(0.25) == 0.25
    assert seg01.velocity(0.5) == 1.0
    assert not seg01.closed


def test_circle_parametrization(unit_circle):
    assert unit_circle.closed
    assert unit_circle.point(0.0) == pytest.approx(1.0)
    assert unit_circle.point(0.25) == pytest.approx(1j)
    assert abs(unit_circle.velocity(0.3)) == pytest.approx(2 * math.pi)


def test_half_circle_endpoints(half_circle):
    assert half_circle.point(0.0) == pytest.approx(1.0)
    assert half_circle.point(1.0) == pytest.approx(-1.0)
    assert not half_circle.closed


def test_ellipse_jet_consistency():
    arc = ai.ellipse_arc(1 + 1j, (2.0, 0.5), (0.3, 2.0))
    t = 0.4
    jet = arc.jet(t, 3)
    # compare against finite differences of the closed form
    def phi(u):
        theta = 0.3 + 1.7 * u
        return 1 + 1j + 2.0 * math.cos(theta) + 0.5j * math.sin(theta)

    h = 1e-5
    fd1 = (phi(t + h) - phi(t - h)) / (2 * h)
    fd2 = (phi(t + h) - 2 * phi(t) + phi(t - h)) / h**2
    assert jet.value == pytest.approx(phi(t), rel=1e-14)
    assert jet.derivative_value(1) == pytest.approx(fd1, rel=1e-8)
    assert jet.derivative_value(2) == pytest.approx(fd2, rel=1e-5)


def test_full_ellipse_closed():
    assert ai.ellipse_arc(0, (1, 0.5), (0, 2 * math.pi)).closed
    assert not ai.ellipse_arc(0, (1, 0.5), (0, math.pi)).closed


@pytest.mark.parametrize(
    "builder",
    [
        lambda: ai.segment(1.0, 1.0),
        lambda: ai.circle(0.0, 0.0),
        lambda: ai.circle(0.0, -1.0),
        lambda: ai.circular_arc(0.0, 1.0, (0.5, 0.5)),
        lambda: ai.ellipse_arc(0.0, (0.0, 1.0), (0.0, 1.0)),
        lambda: ai.ellipse_arc(0.0, (1.0, 1.0), (2.0, 2.0)),
    ],
)
def test_degenerate_arcs_rejected(builder):
    with pytest.raises(DegenerateArc):
        builder()


def test_make_arc_dispatch():
    arc = ai.make_arc("segment", a=0.0, b=1.0 + 1j)
    assert arc.point(1.0) == 1.0 + 1j
    with pytest.raises(ValueError):
        ai.make_arc("hyperbola", a=1)


def test_admissibility_segment(seg01):
    rep = ai.admissibility_check(seg01, grid_size=64)
    assert rep.passed
    assert rep.min_speed == pytest.approx(1.0)


def test_admissibility_circle(unit_circle):
    rep = ai.admissibility_check(unit_circle, grid_size=128)
    assert rep.passed
    assert rep.min_speed == pytest.approx(2 * math.pi)
    assert rep.closure_point_gap == pytest.approx(0.0, abs=1e-12)
    assert rep.closure_velocity_gap == pytest.approx(0.0, abs=1e-11)


def test_admissibility_fails_for_vanishing_speed():
    # phi(t) = t^2 stalls at t = 0
    arc = ai.custom_arc(lambda t, p: variable_jet(t, p) ** 2 if p else variable_jet(t, 1) ** 2)
    rep = ai.admissibility_check(arc, grid_size=256)
    assert not rep.passed
    assert rep.argmin_t == 0.0
    assert rep.min_speed == pytest.approx(0.0, abs=1e-12)


def test_diameter_values(seg01, unit_circle, half_circle):
    assert ai.diameter(seg01, 128) == pytest.approx(1.0, abs=1e-10)
    assert ai.diameter(unit_circle, 256) == pytest.approx(2.0, abs=1e-6)
    assert ai.diameter(half_circle, 256) == pytest.approx(2.0, abs=1e-8)


def test_diameter_cached(unit_circle):
    first = ai.diameter(unit_circle, 200)
    assert ai.diameter(unit_circle, 200) == first


def test_reparametrized_arc_same_geometry(half_circle):
    # admissible warp s(t) = (t^2 + t)/2
    def warp(t, order):
        v = variable_jet(t, order)
        return (v * v + v) * 0.5

    warped = ai.reparametrize(half_circle, warp)
    assert warped.point(0.0) == pytest.approx(half_circle.point(0.0))
    assert warped.point(1.0) == pytest.approx(half_circle.point(1.0))
    assert warped.point(0.5) == pytest.approx(half_circle.point(0.375))


def test_arc_from_config_roundtrip():
    arc = ai.arc_from_config(
        {"kind": "ellipse_arc", "center": [1, 1], "semi_axes": [2, 0.5], "angles": [0.3, 2.0]}
    )
    ref = ai.ellipse_arc(1 + 1j, (2, 0.5), (0.3, 2.0))
    for t in (0.0, 0.37, 1.0):
        assert arc.point(t) == pytest.approx(ref.point(t))
    with pytest.raises(ai.ConfigError):
        ai.arc_from_config({"kind": "circle", "center": 0.0})
    with pytest.raises(ai.ConfigError):
        ai.arc_from_config({"kind": "moebius"})
