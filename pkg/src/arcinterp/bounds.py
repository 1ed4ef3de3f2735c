"""Explicit constants and certified bounds for divided differences.

The certified bound for an order-n difference of f on an arc is

    C * prod_{k=2..n} (1 + |z_1 - z_{k+1}|) / n!
      <= C * (1 + diam)^{n-1} / n!

where C is the largest, over k = 1..n-1, of

    sup |f^(k+1)|  +  sup over node pairs of
        | integral of (z - z2)^(k+1) f^(k+2)(z) dz from z2 to z1 |
        / |z1 - z2|^(k+1).

Both suprema live on a continuum, so they are estimated on grids with the
halved-grid delta reported as refinement metadata; validity tests inflate
estimates by a safety factor.  The permutation-sharpened bound minimizes
the distance product over the choice of pivot node and excluded node,
which is an exact O(n^2) reduction of the full permutation search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arcs import JordanArc, diameter
from .divided import NodeSet
from .errors import (
    EstimationUnstable,
    InsufficientJetOrder,
    NodesTooClose,
    NotApplicable,
)
from .functions import ArcFunction

__all__ = [
    "CurveConstant",
    "BoundCertificate",
    "PivotProduct",
    "integral_quotient_sup",
    "curve_constant",
    "curve_constants",
    "dd_bound_certificate",
    "minimize_pivot_product",
    "sharper_bound",
    "sequence_bound_recursion",
    "interpolation_error_bound",
    "real_line_error_bound",
]

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)

DIAGONAL_CUTOFF = 1e-4


def stable_product(factors) -> float:
    # Multiply in sorted order so equal factor multisets always produce the
    # same float, regardless of how the caller enumerated them.
    return math.prod(sorted(float(x) for x in factors))


@dataclass(frozen=True)
class CurveConstant:
    """Grid estimate of the order-k constant and its refinement delta.

    ``noise_floor`` is the rounding-debris scale of the estimator; an
    estimate at or below it is indistinguishable from zero, so its
    refinement delta carries no signal.
    """

    order: int
    sup_derivative: float
    integral_sup: float
    refinement_delta: float
    noise_floor: float = 0.0

    @property
    def total(self) -> float:
        return self.sup_derivative + self.integral_sup

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "sup_derivative": self.sup_derivative,
            "integral_sup": self.integral_sup,
            "total": self.total,
            "refinement_delta": self.refinement_delta,
            "noise_floor": self.noise_floor,
        }


@dataclass(frozen=True)
class PivotProduct:
    pivot_index: int
    excluded_index: int
    value: float


@dataclass(frozen=True)
class BoundCertificate:
    """Estimated constants and the three bound values for one node set."""

    arc_label: str
    n: int
    constants: tuple
    constant: float
    diam: float
    pivot_distances: tuple
    product_bound: float
    diam_bound: float
    sharper_bound: float
    pivot_index: int
    excluded_index: int
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "arc": self.arc_label,
            "n": self.n,
            "constant": self.constant,
            "diam": self.diam,
            "pivot_distances": list(self.pivot_distances),
            "product_bound": self.product_bound,
            "diam_bound": self.diam_bound,
            "sharper_bound": self.sharper_bound,
            "pivot_index": self.pivot_index,
            "excluded_index": self.excluded_index,
            "constants": [c.to_dict() for c in self.constants],
            "meta": dict(self.meta),
        }


# -- grid estimation of the constants ---------------------------------------


def _quadrature_mesh(grid: int, subdiv: int):
    """Gauss-Legendre nodes/weights on grid*subdiv subpanels of [0,1]."""
    fine = np.linspace(0.0, 1.0, grid * subdiv + 1)
    mids = 0.5 * (fine[:-1] + fine[1:])
    halves = 0.5 * np.diff(fine)
    ts = (mids[:, None] + halves[:, None] * _GL_X[None, :]).ravel()
    ws = (halves[:, None] * _GL_W[None, :]).ravel()
    return ts, ws


def _derivative_profile(f: ArcFunction, arc: JordanArc, ts, order: int):
    """f^(j)(phi(t)) for j = 0..order, plus phi and phi', at each t."""
    m = len(ts)
    F = np.empty((m, order + 1), dtype=complex)
    phi = np.empty(m, dtype=complex)
    dphi = np.empty(m, dtype=complex)
    for s, t in enumerate(ts):
        pj = arc.jet(t, order)
        fj = f.jet(t, order)
        phi[s] = pj.value
        dphi[s] = complex(pj.coeffs[1])
        F[s, 0] = fj.value
        if order >= 1:
            pd = pj.derivative()
            cur = fj
            for j in range(1, order + 1):
                cur = cur.derivative() / pd
                F[s, j] = cur.value
    return F, phi, dphi


def _antiderivative_table(weighted, powers_base, grid: int, max_power: int):
    """Cumulative integrals H_j(t_i) = int_0^{t_i} phi_c(t)^j g(t) phi'(t) dt.

    ``weighted`` holds g*phi'*w at the quadrature nodes, ``powers_base`` the
    centered phi values there.  Returns an array (max_power+1, grid+1).
    """
    H = np.zeros((max_power + 1, grid + 1), dtype=complex)
    pw = np.ones_like(powers_base)
    for j in range(max_power + 1):
        contrib = (weighted * pw).reshape(grid, -1).sum(axis=1)
        H[j, 1:] = np.cumsum(contrib)
        pw = pw * powers_base
    return H


def _pair_quotient_grid(H, z_centered, edges, power: int, denom_power: int, closed: bool, cutoff: float):
    """|sum_j C(power,j) (-z2)^(power-j) (H_j(t1)-H_j(t2))| / |z1-z2|^denom_power
    over the edge grid.  Rows index t1, columns t2.  Near-diagonal entries
    (and, on curves, seam-coincident ones) are masked to zero; on curves the
    complementary path around the seam is also tried and the larger quotient
    kept, so sub-arc quotients are always dominated."""
    E = len(edges)
    dt = np.abs(edges[:, None] - edges[None, :])
    if closed:
        dt = np.minimum(dt, 1.0 - dt)
    mask = dt < cutoff

    num = np.zeros((E, E), dtype=complex)
    loop_col = np.zeros(E, dtype=complex)
    for j in range(power + 1):
        comb = math.comb(power, j)
        col = comb * (-z_centered) ** (power - j)
        num += (H[j][:, None] - H[j][None, :]) * col[None, :]
        if closed:
            loop_col += (H[j][-1] - H[j][0]) * col

    den = np.abs(z_centered[:, None] - z_centered[None, :]) ** denom_power
    den[mask] = 1.0
    quot = np.abs(num) / den
    quot[mask] = 0.0
    if closed:
        quot2 = np.abs(num + loop_col[None, :]) / den
        quot2[mask] = 0.0
        quot = np.maximum(quot, quot2)
    return quot, mask


def integral_quotient_sup(
    g: ArcFunction,
    arc: JordanArc,
    k: int,
    grid: int = 64,
    subdiv: int = 4,
    power: int | None = None,
    denom_power: int | None = None,
    cutoff: float = DIAGONAL_CUTOFF,
) -> dict:
    """Grid supremum of |int (z-z2)^power g(z) dz| / |z1-z2|^denom_power.

    Defaults (power=k, denom_power=k+1) give the boundedness-style quotient,
    whose coincident-pair limit g(z2)/(k+1) fills the near-diagonal band.
    With power = denom_power = k+1 (the constant-estimation shape) the limit
    is zero.  Returns the estimate plus the halved-grid refinement delta.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    power = k if power is None else int(power)
    denom_power = k + 1 if denom_power is None else int(denom_power)
    grid = max(4, grid + (grid % 2))

    ts, ws = _quadrature_mesh(grid, subdiv)
    gv = np.array([g.value(t) for t in ts])
    phi = np.empty(len(ts), dtype=complex)
    dphi = np.empty(len(ts), dtype=complex)
    for s, t in enumerate(ts):
        pj = arc.jet(t, 1)
        phi[s] = pj.value
        dphi[s] = complex(pj.coeffs[1])
    edges = np.linspace(0.0, 1.0, grid + 1)
    z_edges = np.array([arc.point(e) for e in edges])
    center = phi.mean()

    H = _antiderivative_table(gv * dphi * ws, phi - center, grid, power)
    quot, mask = _pair_quotient_grid(
        H, z_edges - center, edges, power, denom_power, arc.closed, cutoff
    )
    if power + 1 == denom_power:
        # Coincident-pair limit of the quotient.
        g_edges = np.abs(np.array([g.value(e) for e in edges])) / (power + 1)
        limit = np.broadcast_to(g_edges[None, :], quot.shape)
        quot = np.where(mask, limit, quot)
    full = float(quot.max())
    half = float(quot[::2, ::2].max())
    return {"estimate": full, "refinement_delta": abs(full - half)}


def curve_constants(
    f: ArcFunction,
    arc: JordanArc,
    k_max: int,
    grid: int = 64,
    subdiv: int = 4,
    cutoff: float = DIAGONAL_CUTOFF,
) -> list:
    """Estimates of the order-k constants for k = 1..k_max.

    One derivative sweep (jets of order k_max+2) feeds every k: the sup of
    |f^(k+1)| over the quadrature mesh plus the pair-grid supremum of the
    integral quotient with integrand (z-z2)^(k+1) f^(k+2)(z).
    """
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    if f.max_order is not None and k_max + 2 > f.max_order:
        raise InsufficientJetOrder(
            f"need order {k_max + 2} jets, provider caps at {f.max_order}"
        )
    grid = max(4, grid + (grid % 2))
    ts, ws = _quadrature_mesh(grid, subdiv)
    order = k_max + 2
    F, phi, dphi = _derivative_profile(f, arc, ts, order)
    edges = np.linspace(0.0, 1.0, grid + 1)
    z_edges = np.array([arc.point(e) for e in edges])
    center = phi.mean()
    phi_c = phi - center
    z_edges_c = z_edges - center

    # Smallest off-diagonal pair distance; debris in the quotient numerator
    # is amplified by its reciprocal powers.
    pair_dz = np.abs(z_edges_c[:, None] - z_edges_c[None, :])
    dt = np.abs(edges[:, None] - edges[None, :])
    if arc.closed:
        dt = np.minimum(dt, 1.0 - dt)
    min_gap = float(pair_dz[dt >= max(cutoff, 1.0 / grid)].min())
    eps = float(np.finfo(float).eps)
    profile_mag = 1.0 + float(np.max(np.abs(F)))
    z_mag = 1.0 + float(np.max(np.abs(z_edges_c)))

    out = []
    for k in range(1, k_max + 1):
        p = k + 1
        H = _antiderivative_table(F[:, k + 2] * dphi * ws, phi_c, grid, p)
        quot, _ = _pair_quotient_grid(H, z_edges_c, edges, p, p, arc.closed, cutoff)
        m_full = float(quot.max())
        m_half = float(quot[::2, ::2].max())
        sup_full = float(np.max(np.abs(F[:, k + 1])))
        sup_half = float(np.max(np.abs(F[::2, k + 1])))
        delta = abs((sup_full + m_full) - (sup_half + m_half))
        noise = 256.0 * eps * profile_mag * z_mag**p / min_gap**p
        out.append(
            CurveConstant(
                order=k,
                sup_derivative=sup_full,
                integral_sup=m_full,
                refinement_delta=delta,
                noise_floor=noise,
            )
        )
    return out


def curve_constant(
    f: ArcFunction, arc: JordanArc, k: int, grid: int = 64, subdiv: int = 4
) -> dict:
    """The order-k constant: sup |f^(k+1)| plus the integral-quotient term."""
    est = curve_constants(f, arc, k, grid=grid, subdiv=subdiv)[k - 1]
    return {
        "estimate": est.total,
        "sup_deriv": est.sup_derivative,
        "M_term": est.integral_sup,
        "refinement_delta": est.refinement_delta,
    }


# -- bounds ------------------------------------------------------------------


def minimize_pivot_product(points) -> PivotProduct:
    """Smallest prod_{m not in {i,j}} (1 + |z_i - z_m|) over ordered (i, j).

    This equals the minimum over all node permutations of the distance
    product appearing in the certified bound: the product only sees which
    node is the pivot and which is excluded.  Ties break to the
    lexicographically smallest (i, j).
    """
    pts = [complex(z) for z in points]
    m = len(pts)
    if m < 3:
        raise ValueError("need at least 3 points")
    best = None
    for i in range(m):
        dists = [abs(pts[i] - pts[l]) for l in range(m)]
        for j in range(m):
            if j == i:
                continue
            value = stable_product(
                1.0 + dists[l] for l in range(m) if l != i and l != j
            )
            if best is None or value < best.value:
                best = PivotProduct(i, j, value)
    return best


def sharper_bound(constant: float, points) -> float:
    """Permutation-sharpened bound: constant * min pivot product / n!."""
    if constant < 0:
        raise ValueError("constant must be nonnegative")
    n = len(points) - 1
    if n < 2:
        raise NotApplicable("sharpened bound requires n >= 2")
    return constant * minimize_pivot_product(points).value / math.factorial(n)


def dd_bound_certificate(
    f: ArcFunction,
    arc: JordanArc,
    nodes: NodeSet,
    grid: int = 64,
    subdiv: int = 4,
    diameter_grid: int = 512,
    constants: list | None = None,
    stability_fraction: float = 0.5,
) -> BoundCertificate:
    """Certificate bounding the order-n divided difference at these nodes.

    Constants may be passed in (e.g. cached across node sets on the same
    arc); otherwise they are grid-estimated here.  Raises
    :class:`EstimationUnstable` when a refinement delta exceeds
    ``stability_fraction`` of its estimate.
    """
    n = nodes.n
    if n < 2:
        raise NotApplicable("the certified bound requires n >= 2")
    if nodes.min_point_gap() == 0.0:
        raise NodesTooClose("nodes must be pairwise distinct")
    if f.max_order is not None and n + 1 > f.max_order:
        raise InsufficientJetOrder(f"need order {n + 1} jets, provider caps at {f.max_order}")
    if constants is None:
        constants = curve_constants(f, arc, n - 1, grid=grid, subdiv=subdiv)
    else:
        constants = [c for c in constants if c.order <= n - 1]
        if len(constants) < n - 1:
            raise ValueError(f"constants must cover orders 1..{n - 1}")
    # Constants at rounding-debris scale (e.g. derivatives that vanish in
    # exact arithmetic) carry meaningless deltas; only estimates above their
    # noise floor are held to the stability test.
    for c in constants:
        if c.total > c.noise_floor and c.refinement_delta > stability_fraction * c.total:
            raise EstimationUnstable(
                f"order-{c.order} constant delta {c.refinement_delta:.3e} "
                f"exceeds {stability_fraction:g} of {c.total:.3e}"
            )
    constant = max(c.total for c in constants)
    pts = [complex(z) for z in nodes.points]
    dists = tuple(abs(pts[0] - pts[kk]) for kk in range(2, n + 1))
    # The grid diameter can lag the true one by the optimizer tolerance,
    # while each node distance is an exact lower bound for it.
    diam = max(diameter(arc, diameter_grid), max(dists, default=0.0))
    nfact = math.factorial(n)
    product_bound = constant * stable_product(1.0 + d for d in dists) / nfact
    diam_bound = constant * (1.0 + diam) ** (n - 1) / nfact
    pivot = minimize_pivot_product(pts)
    return BoundCertificate(
        arc_label=arc.label,
        n=n,
        constants=tuple(constants),
        constant=constant,
        diam=diam,
        pivot_distances=dists,
        product_bound=product_bound,
        diam_bound=diam_bound,
        sharper_bound=constant * pivot.value / nfact,
        pivot_index=pivot.pivot_index,
        excluded_index=pivot.excluded_index,
        meta={
            "constant_grid": grid,
            "quadrature_subdiv": subdiv,
            "diameter_grid": diameter_grid,
        },
    )


def sequence_bound_recursion(C: float, gaps, n: int) -> dict:
    """Exact recursion value versus the closed form C prod(1+L)/n!.

    The recursion is v[1][m] = C/(m+1) and
    v[k][m] = (v[k-1][m+1] + L_k v[k-1][m+2]) / (m+1); the value v[n][0]
    never exceeds the closed form, with equality when all gaps vanish.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    gaps = [float(g) for g in gaps]
    if len(gaps) != n - 1:
        raise ValueError(f"need {n - 1} gap entries for n={n}")
    if C < 0 or any(g < 0 for g in gaps):
        raise ValueError("inputs must be nonnegative")
    level = {m: C / (m + 1) for m in range(2 * n + 1)}
    for k in range(2, n + 1):
        Lk = gaps[k - 2]
        level = {
            m: (level[m + 1] + Lk * level[m + 2]) / (m + 1)
            for m in range(2 * (n - k) + 1)
        }
    closed = C * math.prod(1.0 + g for g in gaps) / math.factorial(n)
    return {"recursion_value": level[0], "closed_form": closed}


def interpolation_error_bound(
    f: ArcFunction,
    arc: JordanArc,
    nodes: NodeSet,
    t_eval: float,
    grid: int = 64,
    subdiv: int = 4,
    constants: list | None = None,
    extended_range: bool = False,
) -> float:
    """Certified bound on |f(z) - p_n(z)| at the on-arc point z = phi(t_eval).

    The next-order difference is bounded through the minimized pivot product
    over the nodes plus the evaluation point, scaled by the node-distance
    product.  Constants run over k = 1..n-1 as in the bound statement;
    ``extended_range`` extends them to k = n.
    """
    n = nodes.n
    if n < 2:
        raise NotApplicable("the error bound requires n >= 2")
    k_max = n if extended_range else n - 1
    if f.max_order is not None and k_max + 2 > f.max_order:
        raise InsufficientJetOrder(f"need order {k_max + 2} jets, provider caps at {f.max_order}")
    if constants is None:
        constants = curve_constants(f, arc, k_max, grid=grid, subdiv=subdiv)
    else:
        constants = [c for c in constants if c.order <= k_max]
        if len(constants) < k_max:
            raise ValueError(f"constants must cover orders 1..{k_max}")
    constant = max(c.total for c in constants)
    z = arc.point(t_eval)
    pts = [complex(p) for p in nodes.points]
    if min(abs(z - p) for p in pts) == 0.0:
        raise NodesTooClose("evaluation point coincides with a node")
    pivot = minimize_pivot_product(pts + [z])
    node_product = math.prod(abs(z - p) for p in pts)
    return constant * pivot.value / math.factorial(n + 1) * node_product


def real_line_error_bound(f: ArcFunction, arc: JordanArc, nodes_x, x: float, grid: int = 512) -> float:
    """Classical real-interval bound sup|f^(n+1)|/(n+1)! times the distance product.

    The arc must be a real segment; nodes and the evaluation point are given
    as real coordinates inside it.
    """
    a, b = arc.point(0.0), arc.point(1.0)
    if abs(a.imag) > 1e-12 or abs(b.imag) > 1e-12:
        raise ValueError("the real-interval bound needs a real segment")
    lo, hi = min(a.real, b.real), max(a.real, b.real)
    xs = [float(v) for v in nodes_x]
    if not all(lo - 1e-12 <= v <= hi + 1e-12 for v in xs + [float(x)]):
        raise ValueError("nodes and evaluation point must lie inside the interval")
    n = len(xs) - 1
    from .calculus import arc_derivative

    ts = np.linspace(0.0, 1.0, grid)
    sup = max(abs(arc_derivative(f, arc, t, n + 1)) for t in ts)
    return sup / math.factorial(n + 1) * math.prod(abs(float(x) - v) for v in xs)
