"""Certified numerics for products n ||n alpha|| ||n beta|| along quadratic irrationals."""

from .contfrac import (
    ConvergentTable,
    ErrorRecord,
    bad_approx_estimate,
    cf_expand_literal,
    cf_expand_surd,
    convergent_table,
    error_record,
    metallic_q,
    metallic_q_closed,
    surd_period,
)
from .cubic import (
    CartanResult,
    CriticalPoints,
    CubicModel,
    SublevelSet,
    build_cubic,
    build_line,
    cartan_bound,
    critical_points,
    reduce_cubic,
    solve_levelset,
)
from .dirichlet import DirichletPoint, badness_check, classify_point, find_dirichlet_point
from .enclosure import Enclosure, nearest_int_distance
from .errors import (
    AmbiguousEnclosure,
    BranchUndecidable,
    EmptyWindow,
    FactorizationTimeout,
    HypothesisViolation,
    LittlewoodError,
    NotAWitness,
    PrecisionExhausted,
    Undecidable,
    ZeroFirstCoordinate,
)
from .factor import Factorization, factorize
from .pairs import MetallicPair, critical_b, enumerate_pairs, lcm_condition, make_pair, ratio_check, window_has_integer
from .pipeline import (
    StageReport,
    WitnessCertificate,
    check_hypotheses,
    delta_window,
    littlewood_min,
    reverify,
    run_stage,
    run_stages,
    verify_witness,
)
from .reals import LiteralReal, QuadraticSurd, RealSpec, parse_real

__version__ = "0.1.0"

__all__ = [
    "AmbiguousEnclosure",
    "BranchUndecidable",
    "CartanResult",
    "ConvergentTable",
    "CriticalPoints",
    "CubicModel",
    "DirichletPoint",
    "EmptyWindow",
    "Enclosure",
    "ErrorRecord",
    "Factorization",
    "FactorizationTimeout",
    "HypothesisViolation",
    "LiteralReal",
    "LittlewoodError",
    "MetallicPair",
    "NotAWitness",
    "PrecisionExhausted",
    "QuadraticSurd",
    "RealSpec",
    "StageReport",
    "SublevelSet",
    "Undecidable",
    "WitnessCertificate",
    "ZeroFirstCoordinate",
    "bad_approx_estimate",
    "badness_check",
    "build_cubic",
    "build_line",
    "cartan_bound",
    "cf_expand_literal",
    "cf_expand_surd",
    "check_hypotheses",
    "classify_point",
    "convergent_table",
    "critical_b",
    "critical_points",
    "delta_window",
    "enumerate_pairs",
    "error_record",
    "factorize",
    "find_dirichlet_point",
    "lcm_condition",
    "littlewood_min",
    "make_pair",
    "metallic_q",
    "metallic_q_closed",
    "nearest_int_distance",
    "parse_real",
    "ratio_check",
    "reduce_cubic",
    "reverify",
    "run_stage",
    "run_stages",
    "solve_levelset",
    "surd_period",
    "verify_witness",
    "window_has_integer",
]
