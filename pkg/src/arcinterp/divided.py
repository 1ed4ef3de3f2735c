"""Divided differences on complex nodes along an arc, in several representations.

The recursive table and the Lagrange sum are the two production routes;
the simplex (Hermite-type) integral is a Monte Carlo oracle for small
orders, and the integral representation of the partial derivatives of the
two-point difference provides independent cross-checks.

High-order differences of nearby nodes are brutally ill-conditioned in
double precision (the weight sum cancels through terms ~1e12 times larger
than the result), so both production routes evaluate their core formula in
extended precision (mpmath, :data:`DD_PRECISION_DPS` digits) and round the
result once at the end.  Inputs and outputs stay ordinary complex numbers.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import mpmath
import numpy as np

from .calculus import arc_derivative, dz_along_arc, integrate_parametric
from .errors import (
    ConditioningWarning,
    ConfluenceRegion,
    HypothesisViolated,
    InsufficientJetOrder,
    NodesTooClose,
    UnsupportedOrder,
)
from .functions import ArcFunction

__all__ = [
    "CONFLUENCE_THRESHOLD",
    "NodeSet",
    "DividedDifferenceTable",
    "dd_recursive",
    "dd_lagrange",
    "dd_simplex_integral",
    "d1_partial",
    "d1_confluent",
    "dd_identity_check",
    "lagrange_sum",
    "lagrange_term_scale",
]

# Parameter separations below this are treated as coincident nodes.
CONFLUENCE_THRESHOLD = 1e-9

# Working precision (significant digits) for the difference evaluators.
DD_PRECISION_DPS = 40

_MP = mpmath.mp.clone()
_MP.dps = DD_PRECISION_DPS

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


def _to_mpc(z):
    z = complex(z)
    return _MP.mpc(z.real, z.imag)


@dataclass(frozen=True)
class NodeSet:
    """Ordered interpolation nodes: parameters, their images, and the arc."""

    params: tuple
    points: tuple
    arc: object = None

    @classmethod
    def from_params(cls, arc, params) -> "NodeSet":
        params = tuple(float(t) for t in params)
        return cls(params, tuple(arc.point(t) for t in params), arc)

    @classmethod
    def from_points(cls, points) -> "NodeSet":
        points = tuple(complex(z) for z in points)
        return cls(tuple(float("nan") for _ in points), points, None)

    def __len__(self):
        return len(self.points)

    @property
    def n(self) -> int:
        return len(self.points) - 1

    def min_point_gap(self) -> float:
        pts = self.points
        return min(
            abs(pts[i] - pts[j]) for i in range(len(pts)) for j in range(i + 1, len(pts))
        )

    def min_param_gap(self) -> float:
        """Smallest pairwise parameter distance (wrap-around on curves)."""
        ts = self.params
        closed = self.arc is not None and getattr(self.arc, "closed", False)
        best = math.inf
        for i in range(len(ts)):
            for j in range(i + 1, len(ts)):
                d = abs(ts[i] - ts[j])
                if closed:
                    d = min(d, 1.0 - d)
                best = min(best, d)
        return best

    def permuted(self, perm) -> "NodeSet":
        return NodeSet(
            tuple(self.params[i] for i in perm),
            tuple(self.points[i] for i in perm),
            self.arc,
        )

    def extended(self, t) -> "NodeSet":
        if self.arc is None:
            raise ValueError("cannot extend a node set without an arc")
        t = float(t)
        return NodeSet(self.params + (t,), self.points + (self.arc.point(t),), self.arc)

    def subset(self, indices) -> "NodeSet":
        return self.permuted(tuple(indices))


@dataclass(frozen=True)
class DividedDifferenceTable:
    """Triangular table: entries[k][i] holds the order-k difference of nodes i..i+k."""

    nodes: NodeSet
    entries: tuple
    method: str

    @property
    def top(self) -> complex:
        return self.entries[-1][0]

    @property
    def coefficients(self) -> tuple:
        """Diagonal entries[k][0]: the Newton-form coefficients."""
        return tuple(level[0] for level in self.entries)


def _coincident(nodes: NodeSet, i: int, j: int, threshold: float) -> bool:
    ti, tj = nodes.params[i], nodes.params[j]
    d = abs(ti - tj)
    if nodes.arc is not None and getattr(nodes.arc, "closed", False):
        d = min(d, 1.0 - d)
    return d < threshold


def dd_recursive(
    f: ArcFunction,
    nodes: NodeSet,
    confluent: bool = False,
    threshold: float = CONFLUENCE_THRESHOLD,
) -> DividedDifferenceTable:
    """Triangular divided-difference table by the adjacent-pair recursion.

    Coincident adjacent pairs are rejected unless ``confluent`` is set, in
    which case first-order pairs are filled with the derivative value
    (deeper coincidences are unsupported).
    """
    m = len(nodes)
    values = [f.value(t) for t in nodes.params]
    points_mp = [_to_mpc(z) for z in nodes.points]
    entries = [tuple(values)]
    prev = [_to_mpc(v) for v in values]
    used_confluent = False
    for k in range(1, m):
        cur = []
        for i in range(m - k):
            if _coincident(nodes, i, i + k, threshold):
                if confluent and k == 1:
                    cur.append(_to_mpc(arc_derivative(f, nodes.arc, nodes.params[i], 1)))
                    used_confluent = True
                    continue
                raise NodesTooClose(
                    f"nodes {i} and {i + k} are coincident at the parameter level"
                )
            dz = points_mp[i + k] - points_mp[i]
            cur.append((prev[i + 1] - prev[i]) / dz)
        entries.append(tuple(complex(c) for c in cur))
        prev = cur
    method = "confluent-augmented" if used_confluent else "recursive"
    return DividedDifferenceTable(nodes=nodes, entries=tuple(entries), method=method)


def lagrange_sum(points, values) -> complex:
    """Sum of values[k] / prod_{i != k}(z_k - z_i), evaluated in extended
    precision and rounded once."""
    pts = [_to_mpc(z) for z in points]
    vals = [_to_mpc(v) for v in values]
    total = _MP.mpc(0)
    for k, zk in enumerate(pts):
        w = _MP.mpc(1)
        for i, zi in enumerate(pts):
            if i != k:
                w *= zk - zi
        total += vals[k] / w
    return complex(total)


def lagrange_term_scale(points, values) -> float:
    """Sum of |values[k] / w_k|: the rounding scale of the weight sum.

    The float error of :func:`lagrange_sum` is a small multiple of the
    machine epsilon times this; comparisons against tiny or zero reference
    values should allow for it.
    """
    total = 0.0
    for k, zk in enumerate(points):
        w = 1.0 + 0j
        for i, zi in enumerate(points):
            if i != k:
                w *= zk - zi
        total += abs(values[k] / w)
    return total


def dd_lagrange(f: ArcFunction, nodes: NodeSet, weight_floor: float = 1e-250) -> complex:
    """Top divided difference as the Lagrange-weight sum (permutation invariant).

    Emits :class:`ConditioningWarning` when a weight-product modulus falls
    below ``weight_floor``.
    """
    pts = nodes.points
    if nodes.min_point_gap() == 0.0:
        raise NodesTooClose("nodes must be pairwise distinct")
    values = [f.value(t) for t in nodes.params]
    min_w = math.inf
    for k, zk in enumerate(pts):
        w = 1.0 + 0j
        for i, zi in enumerate(pts):
            if i != k:
                w *= zk - zi
        min_w = min(min_w, abs(w))
    if min_w < weight_floor:
        warnings.warn(
            ConditioningWarning(
                f"smallest weight product {min_w:.3e} underflows floor {weight_floor:g}"
            )
        )
    return lagrange_sum(pts, values)


def dd_simplex_integral(
    f: ArcFunction,
    nodes: NodeSet,
    sample_budget: int = 2_000_000,
    rng=None,
    chunk: int = 250_000,
) -> dict:
    """Monte Carlo estimate of the order-n difference as a simplex integral.

    Averages f^(n) over uniformly sampled convex combinations of the nodes
    (sorted uniforms give the ordered weights) and divides by n!.  Requires
    an ambient rule: either f is declared analytic on convex hulls or all
    nodes are real.  Order 1 integrates directly instead of sampling.
    """
    n = nodes.n
    if n > 4:
        raise UnsupportedOrder("simplex estimates are supported for order <= 4")
    pts = np.asarray(nodes.points, dtype=complex)
    real_nodes = bool(np.all(np.abs(pts.imag) < 1e-12))
    if f.ambient is None or not (f.analytic_hull or real_nodes):
        raise HypothesisViolated(
            "need an ambient rule valid on the convex hull (analytic or real nodes)"
        )
    rule = f.ambient
    if n == 0:
        return {"estimate": complex(rule.derivative(pts[0], 0)), "standard_error": 0.0}
    if n == 1:
        z1, z2 = pts
        total = 0j
        edges = np.linspace(0.0, 1.0, 9)
        coarse = 0j
        for lo, hi in zip(edges[:-1], edges[1:]):
            mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
            s = mid + half * _GL_X
            total += half * np.sum(_GL_W * rule.derivative((1 - s) * z1 + s * z2, 1))
        for lo, hi in zip(edges[::4][:-1], edges[::4][1:]):
            mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
            s = mid + half * _GL_X
            coarse += half * np.sum(_GL_W * rule.derivative((1 - s) * z1 + s * z2, 1))
        # Quadrature is essentially exact here; report its refinement delta
        # plus an ulp-scale floor so "within a few standard errors" stays a
        # meaningful comparison.
        se = abs(total - coarse) + 4e-16 * (1.0 + abs(total))
        return {"estimate": complex(total), "standard_error": float(se)}

    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    budget = int(sample_budget)
    done = 0
    acc = 0j
    acc_sq = 0.0
    while done < budget:
        size = min(chunk, budget - done)
        u = gen.random((size, n))
        u.sort(axis=1)
        tdesc = u[:, ::-1]
        weights = np.empty((size, n + 1))
        weights[:, 0] = 1.0 - tdesc[:, 0]
        for j in range(1, n):
            weights[:, j] = tdesc[:, j - 1] - tdesc[:, j]
        weights[:, n] = tdesc[:, n - 1]
        combos = weights @ pts
        vals = rule.derivative(combos, n)
        acc += np.sum(vals)
        acc_sq += float(np.sum(vals.real**2 + vals.imag**2))
        done += size
    mean = acc / budget
    var = max(acc_sq / budget - abs(mean) ** 2, 0.0) * budget / max(budget - 1, 1)
    nfact = math.factorial(n)
    return {
        "estimate": complex(mean / nfact),
        "standard_error": float(math.sqrt(var / budget) / nfact),
    }


def d1_partial(
    f: ArcFunction,
    arc,
    t1: float,
    t2: float,
    k: int,
    tol: float = 1e-10,
) -> complex:
    """(k-1)-th derivative in the first node of the two-point difference.

    Computed from its integral representation: the contour integral of
    (z - z2)^(k-1) f^(k)(z) from z2 to z1, divided by (z1 - z2)^k.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if f.max_order is not None and k > f.max_order - 1:
        raise InsufficientJetOrder(f"need order {k + 1} jets, provider caps at {f.max_order}")
    gap = abs(t1 - t2)
    if getattr(arc, "closed", False):
        gap = min(gap, 1.0 - gap)
    if gap < CONFLUENCE_THRESHOLD:
        raise ConfluenceRegion("node pair is inside the confluence region")
    z1, z2 = arc.point(t1), arc.point(t2)

    def h(t):
        pj = arc.jet(t, k)
        deriv = dz_along_arc(f.jet(t, k), pj, k).value
        return (pj.value - z2) ** (k - 1) * deriv * complex(pj.coeffs[1])

    integral = integrate_parametric(h, t2, t1, tol=tol)
    return integral / (z1 - z2) ** k


def d1_confluent(f: ArcFunction, arc, t2: float, k: int) -> complex:
    """Coincident-node value of the same quantity: f^(k)(z2) / k."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return arc_derivative(f, arc, t2, k) / k


def _dk_jet(f: ArcFunction, arc, t: float, order: int, rest_points, rest_values):
    """Jet in t of z1 -> d_k(f | phi(t), z_2, ..., z_{k+1}) for fixed tail nodes.

    Unwinds the recursion in the first node only: at step j the constant
    subtracted is the order-(j-1) difference of the first j tail nodes.
    """
    jet = f.jet(t, order)
    phi_jet = arc.jet(t, order)
    for j in range(1, len(rest_points) + 1):
        const = lagrange_sum(rest_points[:j], rest_values[:j])
        jet = (jet - const) / (phi_jet - rest_points[j - 1])
    return jet, phi_jet


def dd_identity_check(
    f: ArcFunction,
    arc,
    nodes: NodeSet,
    k: int,
    m: int,
    tol: float = 1e-9,
) -> dict:
    """Check the derivative/integral identity for partials of d_k.

    lhs: the m-th derivative (in the first node, along the arc) of
    z1 -> d_k(f | z1, z_2..z_{k+1}), by jet differentiation.
    rhs: the contour integral of (z - z_{k+1})^m times the (m+1)-th partial
    of d_{k-1}(f | z, z_2..z_k), divided by (z1 - z_{k+1})^(m+1), the inner
    partials computed by the same jet machinery.
    """
    if not (1 <= k <= 3) or not (0 <= m <= 3):
        raise UnsupportedOrder("validated range is 1 <= k <= 3, 0 <= m <= 3")
    if len(nodes) < k + 1:
        raise ValueError(f"need at least {k + 1} nodes for order k={k}")
    if f.max_order is not None and k + m > f.max_order - 1:
        raise InsufficientJetOrder(f"need jets beyond provider cap {f.max_order}")
    params = nodes.params[: k + 1]
    points = [complex(z) for z in nodes.points[: k + 1]]
    sub = NodeSet(tuple(params), tuple(points), nodes.arc)
    if sub.min_point_gap() == 0.0:
        raise NodesTooClose("identity check requires pairwise distinct nodes")

    rest_points = points[1:]
    rest_values = [f.value(t) for t in params[1:]]
    z1, zk1 = points[0], points[k]

    jet_k, phi_jet = _dk_jet(f, arc, params[0], m, rest_points, rest_values)
    lhs = dz_along_arc(jet_k, phi_jet, m).value

    inner_points = rest_points[: k - 1]
    inner_values = rest_values[: k - 1]

    def h(t):
        jet, pj = _dk_jet(f, arc, t, m + 1, inner_points, inner_values)
        inner = dz_along_arc(jet, pj, m + 1).value
        return (pj.value - zk1) ** m * inner * complex(pj.coeffs[1])

    integral = integrate_parametric(h, params[k], params[0], tol=tol)
    rhs = integral / (z1 - zk1) ** (m + 1)
    return {"lhs": lhs, "rhs": rhs, "residual": abs(lhs - rhs)}
