"""Functions on an arc, supplied as jets of the composition with the parametrization.

Derivatives along an arc are quotients of parameter derivatives, so the
natural input format is a provider for the jet of f(phi(t)) in t.  Analytic
functions get that jet by composing their Taylor series with the arc's jet;
non-analytic ones (conj, squared modulus) build it directly from the arc jet.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InsufficientJetOrder
from .jets import compose, factorials

__all__ = [
    "AnalyticRule",
    "ExpRule",
    "SinRule",
    "PolyRule",
    "ArcFunction",
    "analytic_on_arc",
    "exp_on_arc",
    "sin_on_arc",
    "poly_on_arc",
    "identity_on_arc",
    "conj_on_arc",
    "abs2_on_arc",
    "poly_plus_conj_on_arc",
]


class AnalyticRule:
    """Pointwise Taylor rule for a function analytic wherever it is evaluated."""

    label = "f"

    def taylor(self, z0: complex, order: int) -> np.ndarray:
        """Coefficients c_m = f^(m)(z0)/m! for m = 0..order."""
        raise NotImplementedError

    def derivative(self, z, k: int = 0):
        """k-th derivative at z; vectorized over array input."""
        raise NotImplementedError

    def __call__(self, z):
        return self.derivative(z, 0)


class ExpRule(AnalyticRule):
    label = "exp"

    def taylor(self, z0, order):
        return np.exp(complex(z0)) / factorials(order)

    def derivative(self, z, k=0):
        return np.exp(z)


class SinRule(AnalyticRule):
    label = "sin"

    def taylor(self, z0, order):
        j = np.arange(order + 1)
        return np.sin(complex(z0) + j * (math.pi / 2)) / factorials(order)

    def derivative(self, z, k=0):
        return np.sin(z + k * (math.pi / 2))


class PolyRule(AnalyticRule):
    """Polynomial with ascending coefficients c_0 + c_1 z + ... + c_d z^d."""

    def __init__(self, coeffs):
        self.coeffs = np.asarray(coeffs, dtype=complex)
        if self.coeffs.size == 0:
            self.coeffs = np.zeros(1, dtype=complex)
        self.label = f"poly(deg={self.coeffs.size - 1})"

    def taylor(self, z0, order):
        # Repeated synthetic division by (z - z0); remainders are the shifts.
        z0 = complex(z0)
        work = self.coeffs.copy()
        out = np.zeros(order + 1, dtype=complex)
        for m in range(order + 1):
            if work.size == 0:
                break
            deg = work.size - 1
            if deg == 0:
                out[m] = work[0]
                work = work[:0]
                continue
            b = np.empty(deg, dtype=complex)
            b[deg - 1] = work[deg]
            for i in range(deg - 2, -1, -1):
                b[i] = work[i + 1] + z0 * b[i + 1]
            out[m] = work[0] + z0 * b[0]
            work = b
        return out

    def derivative(self, z, k=0):
        d = self.coeffs
        for _ in range(k):
            if d.size <= 1:
                return np.zeros_like(np.asarray(z, dtype=complex))
            d = d[1:] * np.arange(1, d.size)
        return np.polyval(d[::-1], np.asarray(z, dtype=complex))


class ArcFunction:
    """A function on an arc, seen through jets of f(phi(t)) in the parameter.

    ``composed(t, order)`` returns the jet of f(phi(t)) at t.  ``max_order``
    bounds the jet orders the provider supports (None means unlimited).
    ``ambient``, when present, is an :class:`AnalyticRule` evaluating f off
    the arc; ``analytic_hull`` declares that rule valid on convex hulls of
    node sets (needed by the simplex-integral estimator).
    """

    def __init__(self, composed, max_order=None, ambient=None, label="f", analytic_hull=False):
        self.composed = composed
        self.max_order = max_order
        self.ambient = ambient
        self.label = label
        self.analytic_hull = bool(analytic_hull)

    def jet(self, t, order: int):
        if self.max_order is not None and order > self.max_order:
            raise InsufficientJetOrder(
                f"{self.label} supports jets up to order {self.max_order}, requested {order}"
            )
        return self.composed(float(t), int(order))

    def value(self, t) -> complex:
        return self.jet(t, 0).value

    def values(self, ts) -> np.ndarray:
        return np.array([self.value(t) for t in ts])

    def _combined_order(self, other):
        if isinstance(other, ArcFunction):
            orders = [o for o in (self.max_order, other.max_order) if o is not None]
            return min(orders) if orders else None
        return self.max_order

    def __add__(self, other):
        if isinstance(other, ArcFunction):
            return ArcFunction(
                lambda t, p: self.jet(t, p) + other.jet(t, p),
                self._combined_order(other),
                label=f"({self.label}+{other.label})",
            )
        return ArcFunction(
            lambda t, p: self.jet(t, p) + complex(other),
            self.max_order,
            label=f"({self.label}+const)",
        )

    __radd__ = __add__

    def __neg__(self):
        return ArcFunction(lambda t, p: -self.jet(t, p), self.max_order, label=f"(-{self.label})")

    def __sub__(self, other):
        return self + (-other if isinstance(other, ArcFunction) else -complex(other))

    def __mul__(self, other):
        if isinstance(other, ArcFunction):
            return ArcFunction(
                lambda t, p: self.jet(t, p) * other.jet(t, p),
                self._combined_order(other),
                label=f"({self.label}*{other.label})",
            )
        return ArcFunction(
            lambda t, p: self.jet(t, p) * complex(other),
            self.max_order,
            label=f"({self.label}*const)",
        )

    __rmul__ = __mul__

    def __repr__(self):
        return f"ArcFunction({self.label!r})"


# -- builders ----------------------------------------------------------------


def analytic_on_arc(rule: AnalyticRule, arc, max_order=None, label=None) -> ArcFunction:
    """Compose an analytic rule with the arc's parametrization jets."""

    def composed(t, order):
        pj = arc.jet(t, order)
        return compose(rule.taylor(pj.value, order), pj)

    return ArcFunction(
        composed, max_order, ambient=rule, label=label or rule.label, analytic_hull=True
    )


def exp_on_arc(arc) -> ArcFunction:
    return analytic_on_arc(ExpRule(), arc)


def sin_on_arc(arc) -> ArcFunction:
    return analytic_on_arc(SinRule(), arc)


def poly_on_arc(coeffs, arc, label=None) -> ArcFunction:
    return analytic_on_arc(PolyRule(coeffs), arc, label=label)


def identity_on_arc(arc) -> ArcFunction:
    return poly_on_arc([0.0, 1.0], arc, label="z")


def conj_on_arc(arc) -> ArcFunction:
    """f(z) = conj(z) restricted to the arc; smooth along it, not analytic."""

    def composed(t, order):
        return arc.jet(t, order).conjugate()

    return ArcFunction(composed, label="conj")


def abs2_on_arc(arc) -> ArcFunction:
    """f(z) = |z|^2 restricted to the arc (phi times conj(phi))."""

    def composed(t, order):
        pj = arc.jet(t, order)
        return pj * pj.conjugate()

    return ArcFunction(composed, label="abs2")


def poly_plus_conj_on_arc(coeffs, arc) -> ArcFunction:
    f = poly_on_arc(coeffs, arc) + conj_on_arc(arc)
    f.label = f"poly(deg={len(list(coeffs)) - 1})+conj"
    return f
