"""Derivatives and contour integrals of functions along an arc.

The derivative of f at phi(t) along the arc is (f o phi)'(t) / phi'(t);
higher orders repeat that quotient.  Both are computed with jet arithmetic,
so order-k values are exact to truncation order rather than differenced.
"""

from __future__ import annotations

import numpy as np

from .errors import NoConvergence, NonAdmissiblePoint
from .functions import ArcFunction
from .jets import Jet

__all__ = [
    "dz_along_arc",
    "arc_derivative",
    "derivative_function",
    "arc_integral",
    "integrate_parametric",
]

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)

ADMISSIBILITY_DELTA = 1e-8


def dz_along_arc(value_jet: Jet, phi_jet: Jet, k: int) -> Jet:
    """Apply d/dz = (d/dt)/phi'(t) to a jet in t, k times.

    The result after each step is one order lower; the caller must supply
    jets of order at least k.
    """
    if k < 0:
        raise ValueError("derivative order must be nonnegative")
    if k == 0:
        return value_jet
    phi_d = phi_jet.derivative()
    cur = value_jet
    for _ in range(k):
        if cur.order < 1:
            raise ValueError("jet order too small for the requested derivative")
        cur = cur.derivative() / phi_d
    return cur


def arc_derivative(f: ArcFunction, arc, t, k: int, delta: float = ADMISSIBILITY_DELTA) -> complex:
    """Value of f^(k) at phi(t), differentiating along the arc."""
    if k < 1:
        raise ValueError("derivative order must be at least 1")
    phi_jet = arc.jet(t, k)
    speed = abs(complex(phi_jet.coeffs[1]))
    if speed < delta:
        raise NonAdmissiblePoint(f"|phi'({t:g})| = {speed:.3e} below floor {delta:g}")
    return dz_along_arc(f.jet(t, k), phi_jet, k).value


def derivative_function(f: ArcFunction, arc, k: int) -> ArcFunction:
    """f^(k) along the arc, packaged as an ArcFunction."""

    def composed(t, order):
        return dz_along_arc(f.jet(t, order + k), arc.jet(t, order + k), k)

    max_order = None if f.max_order is None else f.max_order - k
    return ArcFunction(composed, max_order, label=f"{f.label}^({k})")


def integrate_parametric(h, t_a: float, t_b: float, tol: float = 1e-10, max_panels: int = 4096) -> complex:
    """Integral of h(t) dt by composite 16-point Gauss-Legendre panels.

    The panel count doubles until two successive estimates differ by at
    most tol (absolute) or tol*|estimate| (relative), whichever is looser.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if t_a == t_b:
        return 0j
    prev = None
    panels = 1
    while panels <= max_panels:
        edges = np.linspace(t_a, t_b, panels + 1)
        total = 0j
        for lo, hi in zip(edges[:-1], edges[1:]):
            mid = 0.5 * (lo + hi)
            half = 0.5 * (hi - lo)
            total += half * sum(w * h(mid + half * x) for x, w in zip(_GL_X, _GL_W))
        if prev is not None and abs(total - prev) <= tol * max(1.0, abs(total)):
            return total
        prev = total
        panels *= 2
    raise NoConvergence(
        f"quadrature did not converge within {max_panels} panels (last delta {abs(total - prev):.3e})"
    )


def arc_integral(g, arc, t_a: float, t_b: float, tol: float = 1e-10, max_panels: int = 4096) -> complex:
    """Contour integral of g along the arc from phi(t_a) to phi(t_b).

    ``g`` is either point-evaluable (called as g(z)) or jet-backed (an
    :class:`ArcFunction`, evaluated at the parameter).  Swapping the
    endpoints negates the result.
    """
    if not (0.0 <= t_a <= 1.0 and 0.0 <= t_b <= 1.0):
        raise ValueError("parameter endpoints must lie in [0, 1]")

    if hasattr(g, "jet"):

        def h(t):
            pj = arc.jet(t, 1)
            return g.jet(t, 0).value * complex(pj.coeffs[1])

    elif callable(g):

        def h(t):
            pj = arc.jet(t, 1)
            return g(pj.value) * complex(pj.coeffs[1])

    else:
        raise TypeError("integrand must be callable or jet-backed")

    return integrate_parametric(h, t_a, t_b, tol=tol, max_panels=max_panels)
