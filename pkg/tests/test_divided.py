import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import arcinterp as ai
from arcinterp.divided import lagrange_sum
from arcinterp.errors import (
    ConfluenceRegion,
    HypothesisViolated,
    NodesTooClose,
    UnsupportedOrder,
)
from conftest import sample_params


def nodes_on(arc, params):
    return ai.NodeSet.from_params(arc, params)


# -- recursive table ---------------------------------------------------------


def test_d1_of_square(seg01):
    f = ai.poly_on_arc([0, 0, 1], seg01)
    table = ai.dd_recursive(f, nodes_on(seg01, [0.0, 1.0]))
    assert table.top == pytest.approx(1.0)
    assert table.entries[0] == (0.0, 1.0)


def test_d2_of_identity_vanishes(seg01):
    f = ai.identity_on_arc(seg01)
    table = ai.dd_recursive(f, nodes_on(seg01, [0.1, 0.4, 0.9]))
    assert abs(table.top) <= 1e-15


def test_d2_of_exp_frozen_value(seg01):
    # oracle: weight sum evaluated independently below
    f = ai.exp_on_arc(seg01)
    nodes = nodes_on(seg01, [0.0, 0.5, 1.0])
    oracle = (
        1.0 / ((0 - 0.5) * (0 - 1.0))
        + math.exp(0.5) / ((0.5 - 0) * (0.5 - 1))
        + math.e / ((1 - 0) * (1 - 0.5))
    )
    assert oracle == pytest.approx(0.8416785741175774, rel=1e-15)
    assert ai.dd_recursive(f, nodes).top == pytest.approx(oracle, rel=1e-12)


def test_recursive_rejects_coincident_nodes(seg01):
    f = ai.exp_on_arc(seg01)
    with pytest.raises(NodesTooClose):
        ai.dd_recursive(f, nodes_on(seg01, [0.3, 0.3 + 1e-12, 0.9]))


def test_recursive_confluent_pair(seg01):
    # adjacent coincident pair falls back to the derivative value
    f = ai.exp_on_arc(seg01)
    table = ai.dd_recursive(f, nodes_on(seg01, [0.3, 0.3]), confluent=True)
    assert table.method == "confluent-augmented"
    assert table.top == pytest.approx(math.exp(0.3), rel=1e-12)


def test_circle_seam_is_coincident(unit_circle):
    f = ai.conj_on_arc(unit_circle)
    with pytest.raises(NodesTooClose):
        ai.dd_recursive(f, nodes_on(unit_circle, [0.0, 0.5, 1.0]))


# -- weight-sum form ----------------------------------------------------------


def test_lagrange_constant_vanishes(seg01):
    f = ai.poly_on_arc([3.7], seg01)
    for count in (2, 4, 6):
        nodes = nodes_on(seg01, np.linspace(0, 1, count))
        assert abs(ai.dd_lagrange(f, nodes)) <= 1e-25


def test_lagrange_square_at_conjugate_pair():
    arc = ai.segment(-1j, 1j)
    f = ai.poly_on_arc([0, 0, 1], arc)
    nodes = nodes_on(arc, [1.0, 0.0])  # points i and -i
    assert abs(ai.dd_lagrange(f, nodes)) <= 1e-15  # z1 + z2 = 0


def test_lagrange_matches_recursive_on_ellipse(ellipse_half):
    rng = np.random.default_rng(11)
    f = ai.conj_on_arc(ellipse_half)
    nodes = nodes_on(ellipse_half, sample_params(rng, 5))
    a = ai.dd_lagrange(f, nodes)
    b = ai.dd_recursive(f, nodes).top
    assert abs(a - b) <= 1e-12 * (1 + abs(a))


def test_lagrange_rejects_identical_points(seg01):
    f = ai.exp_on_arc(seg01)
    nodes = ai.NodeSet((0.25, 0.25), (0.25 + 0j, 0.25 + 0j), seg01)
    with pytest.raises(NodesTooClose):
        ai.dd_lagrange(f, nodes)


def test_conditioning_warning(seg01):
    f = ai.exp_on_arc(seg01)
    nodes = nodes_on(seg01, [0.5, 0.5 + 2e-9])
    with pytest.warns(ai.ConditioningWarning):
        ai.dd_lagrange(f, nodes, weight_floor=1e-6)


def test_permutation_invariance(seg01, unit_circle):
    rng = np.random.default_rng(5)
    for arc, fbuild in ((seg01, ai.exp_on_arc), (unit_circle, ai.conj_on_arc)):
        f = fbuild(arc)
        nodes = nodes_on(arc, sample_params(rng, 6, closed=arc.closed))
        base = ai.dd_lagrange(f, nodes)
        for _ in range(10):
            perm = tuple(rng.permutation(6))
            shuffled = ai.dd_lagrange(f, nodes.permuted(perm))
            assert abs(shuffled - base) <= 1e-12 * (1 + abs(base))
            rec = ai.dd_recursive(f, nodes.permuted(perm)).top
            assert abs(rec - base) <= 1e-12 * (1 + abs(base))


@settings(max_examples=40, deadline=None)
@given(
    data=st.lists(
        st.tuples(
            st.floats(min_value=-2, max_value=2, allow_nan=False),
            st.floats(min_value=-2, max_value=2, allow_nan=False),
        ),
        min_size=3,
        max_size=7,
        unique=True,
    )
)
def test_polynomial_exactness(data):
    # d_n of z^n is 1; of lower-degree monomials 0 (any complex nodes)
    pts = [complex(re, im) for re, im in data]
    gaps = [abs(a - b) for i, a in enumerate(pts) for b in pts[i + 1 :]]
    if min(gaps) < 1e-3:
        return
    n = len(pts) - 1
    monomial = [0.0] * n + [1.0]
    values = [np.polyval(monomial[::-1], z) for z in pts]
    assert lagrange_sum(pts, values) == pytest.approx(1.0, rel=1e-9, abs=1e-9)
    if n >= 1:
        low = [np.polyval([1.0] + [0.0] * (n - 1), z) for z in pts]  # z^(n-1)
        assert abs(lagrange_sum(pts, low)) <= 1e-9


def test_real_line_bound(seg01):
    # |d_n| <= sup |f^(n)| / n! for real nodes, n <= 10
    rng = np.random.default_rng(17)
    grid = np.linspace(0, 1, 10001)
    for fbuild, sup_rule in (
        (ai.exp_on_arc, lambda n: math.e),
        (ai.sin_on_arc, lambda n: float(np.max(np.abs(np.sin(grid + n * math.pi / 2))))),
    ):
        f = fbuild(seg01)
        for n in range(2, 11):
            nodes = nodes_on(seg01, sample_params(rng, n + 1))
            dn = abs(ai.dd_lagrange(f, nodes))
            assert dn <= sup_rule(n) / math.factorial(n) + 1e-12


# -- simplex integral oracle ---------------------------------------------------


def test_simplex_order1_exact(seg01):
    f = ai.exp_on_arc(seg01)
    res = ai.dd_simplex_integral(f, nodes_on(seg01, [0.0, 1.0]))
    assert res["estimate"] == pytest.approx(1.718281828459045, rel=1e-12)
    assert res["standard_error"] < 1e-10


def test_simplex_confluent_pair_gives_derivative(seg01):
    f = ai.exp_on_arc(seg01)
    nodes = ai.NodeSet((0.0, 0.0), (0j, 0j), seg01)
    res = ai.dd_simplex_integral(f, nodes)
    assert res["estimate"] == pytest.approx(1.0, rel=1e-12)


def test_simplex_matches_weight_sum(seg01):
    f = ai.exp_on_arc(seg01)
    nodes = nodes_on(seg01, [0.0, 0.5, 1.0])
    res = ai.dd_simplex_integral(f, nodes, sample_budget=400_000, rng=99)
    ref = ai.dd_lagrange(f, nodes)
    assert abs(res["estimate"] - ref) <= 3 * res["standard_error"]


def test_simplex_supports_complex_hull(unit_circle):
    f = ai.exp_on_arc(unit_circle)
    nodes = nodes_on(unit_circle, [0.0, 0.2, 0.45])
    res = ai.dd_simplex_integral(f, nodes, sample_budget=300_000, rng=7)
    ref = ai.dd_lagrange(f, nodes)
    assert abs(res["estimate"] - ref) <= 4 * res["standard_error"]


def test_simplex_rejections(seg01, unit_circle):
    f = ai.exp_on_arc(seg01)
    with pytest.raises(UnsupportedOrder):
        ai.dd_simplex_integral(f, nodes_on(seg01, np.linspace(0, 1, 7)))
    conj = ai.conj_on_arc(unit_circle)
    with pytest.raises(HypothesisViolated):
        ai.dd_simplex_integral(conj, nodes_on(unit_circle, [0.0, 0.2, 0.4]))


# -- two-point partials ---------------------------------------------------------


def test_d1_partial_square(seg01):
    f = ai.poly_on_arc([0, 0, 1], seg01)
    got = ai.d1_partial(f, seg01, 1.0, 0.0, 1)
    assert got == pytest.approx(1.0, rel=1e-12)


def test_d1_partial_k1_equals_difference_quotient(unit_circle):
    f = ai.conj_on_arc(unit_circle)
    t1, t2 = 0.25, 0.0
    z1, z2 = unit_circle.point(t1), unit_circle.point(t2)
    direct = (f.value(t1) - f.value(t2)) / (z1 - z2)
    got = ai.d1_partial(f, unit_circle, t1, t2, 1)
    assert got == pytest.approx(direct, rel=1e-11)


def test_d1_partial_k2_matches_difference_quotient_of_jets(seg01):
    # oracle: finite differences of t1 -> d1(f|phi(t1), z2) over phi'(t1)
    f = ai.exp_on_arc(seg01)
    t1, t2 = 0.8, 0.2
    z2 = seg01.point(t2)

    def d1(t):
        z = seg01.point(t)
        return (f.value(t) - f.value(t2)) / (z - z2)

    h = 1e-6
    fd = (d1(t1 + h) - d1(t1 - h)) / (2 * h) / seg01.velocity(t1)
    got = ai.d1_partial(f, seg01, t1, t2, 2)
    assert got == pytest.approx(fd, rel=1e-8)


def test_d1_confluent_values(seg01):
    f2 = ai.poly_on_arc([0, 0, 1], seg01)
    assert ai.d1_confluent(f2, seg01, 0.5, 1) == pytest.approx(1.0)
    fe = ai.exp_on_arc(seg01)
    assert ai.d1_confluent(fe, seg01, 0.0, 3) == pytest.approx(1.0 / 3.0, rel=1e-12)
    assert ai.d1_confluent(fe, seg01, 0.3, 1) == pytest.approx(math.exp(0.3), rel=1e-12)


def test_d1_partial_confluence_region(seg01):
    f = ai.exp_on_arc(seg01)
    with pytest.raises(ConfluenceRegion):
        ai.d1_partial(f, seg01, 0.5, 0.5 + 1e-12, 1)


def test_confluent_limit_monotone(seg01, unit_circle):
    # The gap is first order in the separation: roughly
    # |f^(k+1)(z2)| * |z1-z2| / (k+1).  Monotone decay holds for any smooth
    # f; the absolute size at a given separation scales with the derivative.
    for arc, fbuild in ((seg01, ai.exp_on_arc), (unit_circle, ai.conj_on_arc)):
        f = fbuild(arc)
        for k in (1, 2, 3):
            resid = [
                abs(ai.d1_partial(f, arc, 0.4 + h, 0.4, k) - ai.d1_confluent(f, arc, 0.4, k))
                for h in (1e-1, 1e-2, 1e-3)
            ]
            assert resid[0] > resid[1] > resid[2]
            assert resid[2] <= 5e-2  # first-order coefficient is O(|f^(k+1)|)


def test_confluent_limit_small_derivative_scale(seg01, unit_circle):
    # With derivative scales ~1e-3 the residual passes 1e-4 at the
    # smallest separation.
    for arc in (seg01, unit_circle):
        f = ai.poly_on_arc([0, 0, 0, 1e-3, 1e-4], arc)
        for k in (1, 2, 3):
            resid = [
                abs(ai.d1_partial(f, arc, 0.4 + h, 0.4, k) - ai.d1_confluent(f, arc, 0.4, k))
                for h in (1e-1, 1e-2, 1e-3)
            ]
            assert resid[0] > resid[1] > resid[2]
            assert resid[2] <= 1e-4


# -- derivative/integral identity -----------------------------------------------


def test_identity_base_case_reduces_to_difference_quotient(seg01):
    f = ai.poly_on_arc([0, 0, 1], seg01)
    nodes = nodes_on(seg01, [0.9, 0.2])
    res = ai.dd_identity_check(f, seg01, nodes, k=1, m=0)
    z1, z2 = nodes.points
    direct = (z1**2 - z2**2) / (z1 - z2)
    assert res["lhs"] == pytest.approx(direct, rel=1e-12)
    assert res["residual"] <= 1e-10


def test_identity_k2_matches_table(seg01):
    f = ai.exp_on_arc(seg01)
    nodes = nodes_on(seg01, [1.0, 0.3, 0.0])
    res = ai.dd_identity_check(f, seg01, nodes, k=2, m=0)
    ref = ai.dd_recursive(f, nodes).top
    assert res["lhs"] == pytest.approx(ref, rel=1e-10)
    assert res["residual"] <= 1e-9


def test_identity_with_derivative_on_circle(unit_circle):
    f = ai.conj_on_arc(unit_circle)
    nodes = nodes_on(unit_circle, [0.45, 0.2, 0.05])
    res = ai.dd_identity_check(f, unit_circle, nodes, k=1, m=1)
    assert res["residual"] <= 1e-9


def test_identity_rejects_out_of_range(seg01):
    f = ai.exp_on_arc(seg01)
    nodes = nodes_on(seg01, [0.9, 0.5, 0.2, 0.05, 0.01])
    with pytest.raises(UnsupportedOrder):
        ai.dd_identity_check(f, seg01, nodes, k=4, m=0)
    with pytest.raises(UnsupportedOrder):
        ai.dd_identity_check(f, seg01, nodes, k=1, m=4)
