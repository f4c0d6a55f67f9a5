"""Gauss-image measures of convex bodies, their functionals, and solvers.

The package computes image measures of convex polytopes driven by a pair
of Musielak-Orlicz integrands and a base measure on the sphere, the dual
volume and entropy functionals they are the first variations of, and
solves the associated measure-matching problems in dimensions 2 and 3.
"""

from .bodies import (
    Polytope,
    RadialSampleBody,
    ball,
    cube,
    gauss_image_pullback,
    hausdorff_distance,
    hull_body,
    random_body,
    simplex,
    square,
    wulff_shape,
)
from .errors import (
    ConvexityError,
    DegenerateMeasureError,
    DomainError,
    EvennessError,
    HemisphereError,
    HypothesisError,
    InputError,
    MoGaussError,
    OutOfClassError,
    QuadratureError,
)
from .functionals import (
    ResidualField,
    SignedSphericalMeasure,
    Triple,
    dual_volume,
    entropy,
    j_measure,
    log_log_triple,
    mo_measure,
    mo_surface_area_measure,
    monge_ampere_residual_2d,
    polar_mo_measure,
    smooth_density_wrt_surface,
)
from .mofunctions import (
    ClassificationReport,
    MOFunction,
    T_MAX,
    T_MIN,
    classify,
    exp_decay,
    function_from_json,
    function_to_json,
    log_t,
    neg_log_t,
    power,
    power_ratio,
    power_volume,
    reciprocal,
    reciprocal_transform,
    weighted_power,
)
from .solver import (
    Mode,
    ProblemSpec,
    ResidualReport,
    Solution,
    SolveOptions,
    normalize_to_constraint,
    residual,
    residual_report,
    solve,
    solve_j_problem,
)
from .sphere import (
    SphericalMeasure,
    hemisphere_margin,
    is_even,
    log_cosine_bound,
    offset_abs_cosine,
    subsphere_margin_even,
    tilted_cosine_squared,
)
from .variation import (
    PerturbationFamily,
    VariationReport,
    mo_add,
    verify_hull_variation,
    verify_wulff_variation,
)

__version__ = "0.1.0"

__all__ = [
    "ClassificationReport", "ConvexityError", "DegenerateMeasureError",
    "DomainError", "EvennessError", "HemisphereError", "HypothesisError",
    "InputError", "MOFunction", "Mode", "MoGaussError", "OutOfClassError",
    "PerturbationFamily", "Polytope", "ProblemSpec", "QuadratureError",
    "RadialSampleBody", "ResidualField", "ResidualReport",
    "SignedSphericalMeasure", "Solution", "SolveOptions", "SphericalMeasure",
    "T_MAX", "T_MIN", "Triple", "VariationReport", "ball", "classify",
    "cube", "dual_volume", "entropy", "exp_decay", "function_from_json",
    "function_to_json", "gauss_image_pullback", "hausdorff_distance",
    "hemisphere_margin", "hull_body", "is_even", "j_measure",
    "log_cosine_bound", "log_log_triple", "log_t", "mo_add", "mo_measure",
    "mo_surface_area_measure", "monge_ampere_residual_2d", "neg_log_t",
    "normalize_to_constraint", "offset_abs_cosine", "polar_mo_measure",
    "power", "power_ratio", "power_volume", "random_body", "reciprocal",
    "reciprocal_transform", "residual", "residual_report", "simplex",
    "smooth_density_wrt_surface", "solve", "solve_j_problem", "square",
    "subsphere_margin_even", "tilted_cosine_squared", "verify_hull_variation",
    "verify_wulff_variation", "weighted_power", "wulff_shape",
]
