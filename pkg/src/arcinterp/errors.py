"""Exception and warning types shared across the package."""


class ArcInterpError(Exception):
    """Base class for all library-specific errors."""


class DegenerateArc(ArcInterpError):
    """Arc construction parameters describe a degenerate geometry."""


class NonAdmissiblePoint(ArcInterpError):
    """|phi'(t)| fell below the admissibility floor at an evaluation point."""


class InsufficientJetOrder(ArcInterpError):
    """A jet of higher order than the provider supports was requested."""


class NoConvergence(ArcInterpError):
    """Adaptive quadrature exhausted its panel budget without converging."""


class NodesTooClose(ArcInterpError):
    """Nodes are closer than the confluence threshold (or coincide)."""


class ConfluenceRegion(ArcInterpError):
    """The node pair lies inside the confluence region; use the confluent form."""


class UnsupportedOrder(ArcInterpError):
    """Requested order lies outside the supported range."""


class HypothesisViolated(ArcInterpError):
    """Inputs do not satisfy the hypotheses the operation relies on."""


class EstimationUnstable(ArcInterpError):
    """A grid-refinement delta is too large relative to its estimate."""


class NotApplicable(ArcInterpError):
    """The requested bound is undefined for the given order (n < 2)."""


class ConfigError(ArcInterpError):
    """Scenario configuration is invalid; the message carries the field path."""


class ConditioningWarning(UserWarning):
    """A Lagrange weight product underflowed the conditioning floor."""
