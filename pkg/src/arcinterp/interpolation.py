"""Newton-form interpolation on complex nodes, with a Lagrange-form oracle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .divided import NodeSet, dd_lagrange, dd_recursive
from .functions import ArcFunction

__all__ = [
    "NewtonInterpolant",
    "newton_build",
    "newton_eval",
    "lagrange_eval",
    "leja_order",
    "remainder_check",
]

# Node count above which the greedy spread ordering is applied by default.
_LEJA_DEFAULT_FROM = 7


@dataclass(frozen=True)
class NewtonInterpolant:
    """Nodes in build order plus the diagonal table coefficients."""

    nodes: NodeSet
    coeffs: tuple

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z) -> complex:
        return newton_eval(self, z)

    def to_dict(self) -> dict:
        return {
            "params": list(self.nodes.params),
            "points": [[z.real, z.imag] for z in self.nodes.points],
            "coefficients": [[complex(c).real, complex(c).imag] for c in self.coeffs],
        }


def leja_order(nodes: NodeSet) -> tuple:
    """Greedy spread ordering: start on a diameter pair, then maximize
    the product of distances to the nodes already chosen.  Ties break to
    the smallest index."""
    pts = np.asarray(nodes.points, dtype=complex)
    m = pts.size
    if m == 1:
        return (0,)
    dist = np.abs(pts[:, None] - pts[None, :])
    first = int(np.unravel_index(np.argmax(dist), dist.shape)[0])
    chosen = [first]
    log_prod = None
    remaining = [i for i in range(m) if i != first]
    prod = {i: 1.0 for i in remaining}
    while remaining:
        last = chosen[-1]
        for i in remaining:
            prod[i] *= dist[i, last]
        best = max(remaining, key=lambda i: (prod[i], -i))
        chosen.append(best)
        remaining.remove(best)
    return tuple(chosen)


def newton_build(f: ArcFunction, nodes: NodeSet, ordering: str | None = None) -> NewtonInterpolant:
    """Interpolant with coefficients from the divided-difference diagonal.

    ``ordering`` is "as-given" or "leja"; by default the greedy ordering
    kicks in once there are at least 7 nodes (it stabilizes the recursion,
    and the interpolant itself is ordering-independent).
    """
    if ordering is None:
        ordering = "leja" if len(nodes) >= _LEJA_DEFAULT_FROM else "as-given"
    if ordering == "leja":
        nodes = nodes.permuted(leja_order(nodes))
    elif ordering != "as-given":
        raise ValueError(f"unknown ordering {ordering!r}")
    table = dd_recursive(f, nodes)
    return NewtonInterpolant(nodes=nodes, coeffs=table.coefficients)


def newton_eval(p: NewtonInterpolant, z) -> complex:
    """Nested (Horner-style) evaluation of the Newton form."""
    z = complex(z)
    acc = complex(p.coeffs[-1])
    for c, zk in zip(p.coeffs[-2::-1], p.nodes.points[-2::-1]):
        acc = complex(c) + (z - zk) * acc
    return acc


def lagrange_eval(points, values, z) -> complex:
    """Direct Lagrange-form evaluation; the cross-check oracle, not a
    production path."""
    z = complex(z)
    total = 0j
    for k, zk in enumerate(points):
        num = 1.0 + 0j
        den = 1.0 + 0j
        for i, zi in enumerate(points):
            if i != k:
                num *= z - zi
                den *= zk - zi
        total += values[k] * num / den
    return total


def remainder_check(f: ArcFunction, p: NewtonInterpolant, t: float) -> dict:
    """Residual of the exact-remainder identity at the on-arc point phi(t).

    f(z) minus the interpolant minus the next-order difference (over the
    nodes plus z) times the node product should vanish to rounding.
    """
    extended = p.nodes.extended(t)
    z = extended.points[-1]
    d_ext = dd_lagrange(f, extended)
    fz = f.value(t)
    pz = newton_eval(p, z)
    node_product = 1.0 + 0j
    for zk in p.nodes.points:
        node_product *= z - zk
    residual = abs(fz - pz - d_ext * node_product)
    return {
        "residual": float(residual),
        "f_value": fz,
        "interpolant_value": pz,
        "extended_difference": d_ext,
        "node_product": node_product,
    }
