"""Truncated Taylor (jet) arithmetic for complex maps of one real parameter.

A jet stores the coefficients c_0..c_p of a smooth map g at a parameter
value t, with c_j = g^(j)(t)/j!.  Sums, products and quotients of order-p
jets are again order-p jets (mixed orders truncate to the smaller one), so
derivatives of composites and quotients come out exact to truncation order
instead of relying on finite differences.
"""

from __future__ import annotations

import numpy as np

__all__ = ["Jet", "constant_jet", "variable_jet", "compose", "factorials"]


def factorials(n: int) -> np.ndarray:
    """Array ``[0!, 1!, ..., n!]`` as floats."""
    return np.concatenate(([1.0], np.cumprod(np.arange(1, n + 1, dtype=float))))


class Jet:
    """Taylor coefficients of a complex-valued map at a real base point.

    Division requires a divisor with nonzero constant term.  The parameter
    is real, so conjugation acts coefficient-wise; this is what makes
    non-analytic integrands (conj, squared modulus) exactly differentiable
    along a parametrized arc.
    """

    __slots__ = ("base_point", "coeffs")

    def __init__(self, base_point, coeffs):
        coeffs = np.atleast_1d(np.asarray(coeffs, dtype=complex))
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise ValueError("a jet needs at least the constant coefficient")
        self.base_point = float(base_point)
        self.coeffs = coeffs

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @property
    def value(self) -> complex:
        return complex(self.coeffs[0])

    def derivative_value(self, k: int = 1) -> complex:
        """k-th derivative of the underlying map at the base point."""
        if k > self.order:
            raise ValueError(f"jet of order {self.order} has no derivative of order {k}")
        return complex(self.coeffs[k]) * float(np.prod(np.arange(1, k + 1)))

    def _match(self, other: "Jet"):
        if abs(self.base_point - other.base_point) > 1e-12:
            raise ValueError("jets have different base points")
        p = min(self.order, other.order)
        return self.coeffs[: p + 1], other.coeffs[: p + 1]

    # -- ring arithmetic -------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Jet):
            a, b = self._match(other)
            return Jet(self.base_point, a + b)
        out = self.coeffs.copy()
        out[0] += complex(other)
        return Jet(self.base_point, out)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.base_point, -self.coeffs)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet) else -complex(other))

    def __rsub__(self, other):
        return (-self) + complex(other)

    def __mul__(self, other):
        if isinstance(other, Jet):
            a, b = self._match(other)
            return Jet(self.base_point, np.convolve(a, b)[: a.size])
        return Jet(self.base_point, self.coeffs * complex(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return self * (1.0 / complex(other))
        a, b = self._match(other)
        if b[0] == 0:
            raise ZeroDivisionError("jet division by a jet with zero constant term")
        q = np.empty_like(a)
        q[0] = a[0] / b[0]
        for i in range(1, a.size):
            q[i] = (a[i] - np.dot(b[1 : i + 1], q[i - 1 :: -1])) / b[0]
        return Jet(self.base_point, q)

    def __rtruediv__(self, other):
        return constant_jet(other, self.base_point, self.order) / self

    def __pow__(self, exponent: int):
        if exponent < 0 or int(exponent) != exponent:
            raise ValueError("jet powers must be nonnegative integers")
        out = constant_jet(1.0, self.base_point, self.order)
        for _ in range(int(exponent)):
            out = out * self
        return out

    # -- calculus and structure -------------------------------------------

    def derivative(self) -> "Jet":
        """Jet of g' (one order lower)."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        j = np.arange(1, self.order + 1)
        return Jet(self.base_point, self.coeffs[1:] * j)

    def conjugate(self) -> "Jet":
        """Jet of t -> conj(g(t)); exact because the parameter is real."""
        return Jet(self.base_point, np.conj(self.coeffs))

    def truncated(self, order: int) -> "Jet":
        if order >= self.order:
            return self
        return Jet(self.base_point, self.coeffs[: order + 1])

    def __repr__(self):
        return f"Jet(t={self.base_point:g}, coeffs={np.array2string(self.coeffs, precision=6)})"


def constant_jet(value, base_point, order: int) -> Jet:
    coeffs = np.zeros(order + 1, dtype=complex)
    coeffs[0] = complex(value)
    return Jet(base_point, coeffs)


def variable_jet(t, order: int) -> Jet:
    """Jet of the identity map t -> t."""
    coeffs = np.zeros(order + 1, dtype=complex)
    coeffs[0] = float(t)
    if order >= 1:
        coeffs[1] = 1.0
    return Jet(t, coeffs)


def compose(outer_coeffs, inner: Jet) -> Jet:
    """Jet of f(g(t)) from Taylor coefficients of f at g(t).

    ``outer_coeffs[m]`` must equal f^(m)(inner.value)/m!.  Exact to the
    truncation order of ``inner`` (terms beyond it cannot contribute because
    the shifted inner jet has no constant term).
    """
    p = inner.order
    a = np.zeros(p + 1, dtype=complex)
    src = np.asarray(outer_coeffs, dtype=complex)
    a[: min(src.size, p + 1)] = src[: p + 1]
    w = inner - inner.value
    acc = constant_jet(a[p], inner.base_point, p)
    for m in range(p - 1, -1, -1):
        acc = acc * w + a[m]
    return acc
