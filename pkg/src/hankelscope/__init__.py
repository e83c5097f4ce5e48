"""Bergman-space moments and Hankel-operator spectra on complete Reinhardt domains in C^2."""

__version__ = "0.1.0"

from .domain import (
    Ball,
    Bidisk,
    CheckReport,
    DomainError,
    Egg,
    GammaReport,
    HypothesisError,
    IncompleteDomainError,
    PolygonShadow,
    ShadowDomain,
    check_complete,
    check_convex,
    detect_gamma,
    profile_sigma,
    profile_tau,
)
from .hankel import (
    HankelAction,
    PolySymbol,
    hankel_action,
    hankel_eigenvalue,
    hankel_gram,
    projection_coeff,
    shell_eigenvalues,
    symbol_norm_sq,
)
from .moments import (
    GradeIndex,
    MomentTable,
    MultiIndex,
    closed_form_log_moment,
    log_moment,
    monomial_inner,
    warm_cache,
)
from .probe import (
    ConsistencyReport,
    DecayReport,
    Prediction,
    Thresholds,
    Verdict,
    decay_scan,
    shell_sup,
    theorem_check,
)
from .specio import SpecError, parse_domain_spec, parse_symbol_spec

__all__ = [
    "Ball",
    "Bidisk",
    "CheckReport",
    "ConsistencyReport",
    "DecayReport",
    "DomainError",
    "Egg",
    "GammaReport",
    "GradeIndex",
    "HankelAction",
    "HypothesisError",
    "IncompleteDomainError",
    "MomentTable",
    "MultiIndex",
    "PolySymbol",
    "PolygonShadow",
    "Prediction",
    "ShadowDomain",
    "SpecError",
    "Thresholds",
    "Verdict",
    "check_complete",
    "check_convex",
    "closed_form_log_moment",
    "decay_scan",
    "detect_gamma",
    "hankel_action",
    "hankel_eigenvalue",
    "hankel_gram",
    "log_moment",
    "monomial_inner",
    "parse_domain_spec",
    "parse_symbol_spec",
    "profile_sigma",
    "profile_tau",
    "projection_coeff",
    "shell_eigenvalues",
    "shell_sup",
    "symbol_norm_sq",
    "theorem_check",
    "warm_cache",
]
