"""Divided differences, interpolation and certified error bounds on smooth
Jordan arcs and curves in the complex plane."""

from .arcs import (
    AdmissibilityReport,
    JordanArc,
    admissibility_check,
    circle,
    circular_arc,
    custom_arc,
    diameter,
    ellipse_arc,
    make_arc,
    reparametrize,
    segment,
)
from .bounds import (
    BoundCertificate,
    CurveConstant,
    PivotProduct,
    curve_constant,
    curve_constants,
    dd_bound_certificate,
    integral_quotient_sup,
    interpolation_error_bound,
    minimize_pivot_product,
    real_line_error_bound,
    sequence_bound_recursion,
    sharper_bound,
)
from .calculus import arc_derivative, arc_integral, derivative_function, dz_along_arc
from .configio import arc_from_config, function_from_config, register_function
from .divided import (
    CONFLUENCE_THRESHOLD,
    DividedDifferenceTable,
    NodeSet,
    d1_confluent,
    d1_partial,
    dd_identity_check,
    dd_lagrange,
    dd_recursive,
    dd_simplex_integral,
)
from .errors import (
    ArcInterpError,
    ConditioningWarning,
    ConfigError,
    ConfluenceRegion,
    DegenerateArc,
    EstimationUnstable,
    HypothesisViolated,
    InsufficientJetOrder,
    NoConvergence,
    NodesTooClose,
    NonAdmissiblePoint,
    NotApplicable,
    UnsupportedOrder,
)
from .functions import (
    AnalyticRule,
    ArcFunction,
    ExpRule,
    PolyRule,
    SinRule,
    abs2_on_arc,
    analytic_on_arc,
    conj_on_arc,
    exp_on_arc,
    identity_on_arc,
    poly_on_arc,
    poly_plus_conj_on_arc,
    sin_on_arc,
)
from .harness import (
    ScenarioConfig,
    SweepTable,
    TrialRow,
    VerificationReport,
    run_verification_suite,
    sweep_tightness,
)
from .interpolation import (
    NewtonInterpolant,
    lagrange_eval,
    leja_order,
    newton_build,
    newton_eval,
    remainder_check,
)
from .jets import Jet, compose, constant_jet, factorials, variable_jet

__version__ = "0.1.0"
