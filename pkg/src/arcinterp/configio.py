"""Config-tree deserialization for arcs and functions.

Specs are JSON-compatible dicts with a ``kind`` tag.  Complex scalars are
written as a number or an [re, im] pair.
"""

from __future__ import annotations

from .arcs import JordanArc, make_arc
from .errors import ConfigError
from .functions import (
    ArcFunction,
    abs2_on_arc,
    conj_on_arc,
    exp_on_arc,
    identity_on_arc,
    poly_on_arc,
    poly_plus_conj_on_arc,
    sin_on_arc,
)

__all__ = [
    "as_complex",
    "arc_from_config",
    "function_from_config",
    "register_function",
    "FUNCTION_BUILDERS",
]


def as_complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigError(f"complex values need [re, im], got {value!r}")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def arc_from_config(spec: dict) -> JordanArc:
    """Build an arc from a kind-tagged dict.

    Kinds: segment {a, b}; circle {center, radius};
    circular_arc {center, radius, angles}; ellipse_arc {center, semi_axes,
    angles}.  An optional ``label`` overrides the default.
    """
    if not isinstance(spec, dict):
        raise ConfigError(f"arc spec must be a mapping, got {type(spec).__name__}")
    kind = spec.get("kind")
    label = spec.get("label")
    try:
        if kind == "segment":
            return make_arc("segment", a=as_complex(spec["a"]), b=as_complex(spec["b"]), label=label)
        if kind == "circle":
            return make_arc(
                "circle", center=as_complex(spec["center"]), radius=float(spec["radius"]), label=label
            )
        if kind == "circular_arc":
            return make_arc(
                "circular_arc",
                center=as_complex(spec["center"]),
                radius=float(spec["radius"]),
                angle_range=tuple(float(x) for x in spec["angles"]),
                label=label,
            )
        if kind == "ellipse_arc":
            return make_arc(
                "ellipse_arc",
                center=as_complex(spec["center"]),
                semi_axes=tuple(float(x) for x in spec["semi_axes"]),
                angle_range=tuple(float(x) for x in spec["angles"]),
                label=label,
            )
    except ConfigError:
        raise
    except KeyError as exc:
        raise ConfigError(f"arc spec {kind!r} is missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"arc spec {kind!r}: {exc}") from None
    raise ConfigError(f"unknown arc kind {kind!r}")


def _build_poly(arc, coeffs=None, **_):
    if coeffs is None:
        raise ConfigError("poly function spec needs 'coeffs'")
    return poly_on_arc([as_complex(c) for c in coeffs], arc)


def _build_poly_plus_conj(arc, coeffs=None, **_):
    if coeffs is None:
        raise ConfigError("poly_plus_conj function spec needs 'coeffs'")
    return poly_plus_conj_on_arc([as_complex(c) for c in coeffs], arc)


FUNCTION_BUILDERS = {
    "exp": lambda arc, **_: exp_on_arc(arc),
    "sin": lambda arc, **_: sin_on_arc(arc),
    "identity": lambda arc, **_: identity_on_arc(arc),
    "conj": lambda arc, **_: conj_on_arc(arc),
    "abs2": lambda arc, **_: abs2_on_arc(arc),
    "poly": _build_poly,
    "poly_plus_conj": _build_poly_plus_conj,
}


def register_function(name: str, builder) -> None:
    """Add a user function builder: builder(arc, **params) -> ArcFunction."""
    FUNCTION_BUILDERS[name] = builder


def function_from_config(spec: dict, arc: JordanArc) -> ArcFunction:
    if not isinstance(spec, dict):
        raise ConfigError(f"function spec must be a mapping, got {type(spec).__name__}")
    kind = spec.get("kind")
    builder = FUNCTION_BUILDERS.get(kind)
    if builder is None:
        raise ConfigError(f"unknown function kind {kind!r}")
    params = {k: v for k, v in spec.items() if k not in ("kind", "label")}
    fn = builder(arc, **params)
    if spec.get("label"):
        fn.label = spec["label"]
    return fn
