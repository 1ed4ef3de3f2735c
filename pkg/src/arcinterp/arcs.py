"""Jordan arcs and curves: constructors, admissibility diagnostics, diameter."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import DegenerateArc
from .jets import Jet, compose, factorials

__all__ = [
    "JordanArc",
    "AdmissibilityReport",
    "segment",
    "circle",
    "circular_arc",
    "ellipse_arc",
    "custom_arc",
    "make_arc",
    "reparametrize",
    "admissibility_check",
    "diameter",
]

TWO_PI = 2.0 * math.pi


class JordanArc:
    """Parametrized arc t in [0,1] -> C with jet evaluation.

    ``phi`` maps (t, order) to the jet of the parametrization at t.
    ``closed`` marks Jordan curves, for which phi(0) = phi(1) and
    phi'(0) = phi'(1).  Instances are immutable apart from a diameter
    memo; all evaluation is pure and re-entrant.
    """

    def __init__(self, phi, closed: bool = False, label: str = "arc"):
        self.phi = phi
        self.closed = bool(closed)
        self.label = label
        self._diameter_cache: dict[int, float] = {}

    def jet(self, t, order: int) -> Jet:
        return self.phi(float(t), int(order))

    def point(self, t) -> complex:
        return self.jet(t, 0).value

    def velocity(self, t) -> complex:
        return complex(self.jet(t, 1).coeffs[1])

    def points(self, ts) -> np.ndarray:
        return np.array([self.point(t) for t in np.asarray(ts, dtype=float)])

    def __repr__(self):
        kind = "curve" if self.closed else "arc"
        return f"JordanArc({self.label!r}, {kind})"


# -- constructors ----------------------------------------------------------


def segment(a, b, label: str | None = None) -> JordanArc:
    """Straight segment from a to b, phi(t) = a + (b-a) t."""
    a, b = complex(a), complex(b)
    if a == b:
        raise DegenerateArc("segment endpoints coincide")
    d = b - a

    def phi(t, order):
        coeffs = np.zeros(order + 1, dtype=complex)
        coeffs[0] = a + d * t
        if order >= 1:
            coeffs[1] = d
        return Jet(t, coeffs)

    return JordanArc(phi, closed=False, label=label or f"segment({a:g},{b:g})")


def circular_arc(center, radius, angle_range, label: str | None = None) -> JordanArc:
    """Arc of a circle, phi(t) = center + r exp(i (a0 + (a1-a0) t))."""
    center = complex(center)
    radius = float(radius)
    a0, a1 = (float(x) for x in angle_range)
    sweep = a1 - a0
    if radius <= 0:
        raise DegenerateArc("circle radius must be positive")
    if sweep == 0:
        raise DegenerateArc("angle range has zero length")
    closed = abs(abs(sweep) - TWO_PI) <= 1e-12

    def phi(t, order):
        w = radius * np.exp(1j * (a0 + sweep * t))
        j = np.arange(order + 1)
        coeffs = w * (1j * sweep) ** j / factorials(order)
        coeffs = np.asarray(coeffs, dtype=complex)
        coeffs[0] += center
        return Jet(t, coeffs)

    return JordanArc(phi, closed=closed, label=label or f"circular_arc(r={radius:g})")


def circle(center, radius, label: str | None = None) -> JordanArc:
    """Full circle traversed once counterclockwise."""
    return circular_arc(center, radius, (0.0, TWO_PI), label=label or f"circle(r={float(radius):g})")


def ellipse_arc(center, semi_axes, angle_range, label: str | None = None) -> JordanArc:
    """Arc of an axis-aligned ellipse, phi(t) = center + sa cos(theta) + i sb sin(theta)."""
    center = complex(center)
    sa, sb = (float(x) for x in semi_axes)
    a0, a1 = (float(x) for x in angle_range)
    sweep = a1 - a0
    if sa <= 0 or sb <= 0:
        raise DegenerateArc("ellipse semi-axes must be positive")
    if sweep == 0:
        raise DegenerateArc("angle range has zero length")
    closed = abs(abs(sweep) - TWO_PI) <= 1e-12

    def phi(t, order):
        theta = a0 + sweep * t
        j = np.arange(order + 1)
        scale = sweep**j / factorials(order)
        cosj = np.cos(theta + j * (math.pi / 2)) * scale
        sinj = np.sin(theta + j * (math.pi / 2)) * scale
        coeffs = sa * cosj + 1j * sb * sinj
        coeffs = np.asarray(coeffs, dtype=complex)
        coeffs[0] += center
        return Jet(t, coeffs)

    return JordanArc(phi, closed=closed, label=label or f"ellipse_arc({sa:g},{sb:g})")


def custom_arc(provider, closed: bool = False, label: str = "custom") -> JordanArc:
    """Arc from a user-supplied jet provider (t, order) -> Jet."""
    return JordanArc(provider, closed=closed, label=label)


_ARC_KINDS = {
    "segment": segment,
    "circle": circle,
    "circular_arc": circular_arc,
    "ellipse_arc": ellipse_arc,
    "custom": custom_arc,
}


def make_arc(kind: str, **params) -> JordanArc:
    """Dispatch on arc kind; see the individual constructors for parameters."""
    try:
        builder = _ARC_KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown arc kind {kind!r}") from None
    return builder(**params)


def reparametrize(arc: JordanArc, warp, label: str | None = None) -> JordanArc:
    """Same arc under phi(s(t)), with ``warp`` a jet provider for s(t).

    The warp must map [0,1] onto [0,1]; it is admissible when s' never
    vanishes.  Geometric quantities (derivatives in z, contour integrals,
    diameter) are unchanged by construction.
    """

    def phi(t, order):
        s_jet = warp(float(t), int(order))
        outer = arc.jet(s_jet.value.real, order).coeffs
        out = compose(outer, s_jet)
        return out

    return JordanArc(phi, closed=arc.closed, label=label or f"{arc.label}|warped")


# -- diagnostics -----------------------------------------------------------


@dataclass(frozen=True)
class AdmissibilityReport:
    min_speed: float
    argmin_t: float
    closure_point_gap: float | None
    closure_velocity_gap: float | None
    delta: float
    grid_size: int
    passed: bool


def admissibility_check(
    arc: JordanArc,
    grid_size: int = 1024,
    delta: float = 1e-8,
    closure_tol: float = 1e-9,
) -> AdmissibilityReport:
    """Report min |phi'| over a grid and, for curves, the closure residuals.

    Failure is a report state, not an exception: ``passed`` is False when
    the speed floor ``delta`` is violated or a closed curve fails to close.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    ts = np.linspace(0.0, 1.0, grid_size)
    speeds = np.array([abs(arc.velocity(t)) for t in ts])
    i = int(np.argmin(speeds))
    point_gap = velocity_gap = None
    if arc.closed:
        j0, j1 = arc.jet(0.0, 1), arc.jet(1.0, 1)
        point_gap = abs(j0.value - j1.value)
        velocity_gap = abs(complex(j0.coeffs[1]) - complex(j1.coeffs[1]))
    passed = speeds[i] >= delta and (
        not arc.closed or (point_gap <= closure_tol and velocity_gap <= closure_tol)
    )
    return AdmissibilityReport(
        min_speed=float(speeds[i]),
        argmin_t=float(ts[i]),
        closure_point_gap=point_gap,
        closure_velocity_gap=velocity_gap,
        delta=delta,
        grid_size=grid_size,
        passed=bool(passed),
    )


def diameter(arc: JordanArc, grid_size: int = 512) -> float:
    """Largest pairwise distance between points of the arc.

    Grid estimate polished by one Nelder-Mead pass around the maximizing
    pair; the result is an estimate (a lower bound up to the optimizer's
    tolerance) and is cached per grid size.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    cached = arc._diameter_cache.get(grid_size)
    if cached is not None:
        return cached
    ts = np.linspace(0.0, 1.0, grid_size)
    pts = arc.points(ts)
    dist = np.abs(pts[:, None] - pts[None, :])
    i, j = np.unravel_index(np.argmax(dist), dist.shape)
    best = float(dist[i, j])

    def negated(u):
        a = min(max(u[0], 0.0), 1.0)
        b = min(max(u[1], 0.0), 1.0)
        return -abs(arc.point(a) - arc.point(b))

    res = minimize(
        negated,
        np.array([ts[i], ts[j]]),
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 400},
    )
    best = max(best, float(-res.fun))
    arc._diameter_cache[grid_size] = best
    return best
