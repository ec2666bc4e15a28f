"""Exact push-forwards of tautological classes down towers of projective bundles."""

from .series import (
    LaurentPoly,
    Monomial,
    Rational,
    RationalFunction1V,
    VariableId,
    binomial_general,
    coefficient_of,
    descending_expand,
    geometric_expand,
    negative_part,
    rename_variables,
    shift_expand,
)
from .tower import (
    PIVOT,
    InvalidTowerError,
    TowerFactor,
    TowerLevel,
    TowerSpec,
    TruncationRequest,
    Violation,
    aux_variable,
    base_variable,
    closed_formula_product,
    closed_formula_segre,
    individual_segre,
    inverse_chern_series,
    pushforward_monomial,
    random_tower_spec,
    stepwise_pushforward,
    taut_variable,
    tower_variable,
    tower_violations,
    validate_tower,
)
from .flag import (
    FlagSpec,
    LocalizationDisagreement,
    arrangement_sign,
    flag_integral,
    flag_tower,
    localization_integral,
    vandermonde_integral,
    vandermonde_product,
)

__all__ = [
    "LaurentPoly",
    "Monomial",
    "Rational",
    "RationalFunction1V",
    "VariableId",
    "binomial_general",
    "coefficient_of",
    "descending_expand",
    "geometric_expand",
    "negative_part",
    "rename_variables",
    "shift_expand",
    "PIVOT",
    "InvalidTowerError",
    "TowerFactor",
    "TowerLevel",
    "TowerSpec",
    "TruncationRequest",
    "Violation",
    "aux_variable",
    "base_variable",
    "closed_formula_product",
    "closed_formula_segre",
    "individual_segre",
    "inverse_chern_series",
    "pushforward_monomial",
    "random_tower_spec",
    "stepwise_pushforward",
    "taut_variable",
    "tower_variable",
    "tower_violations",
    "validate_tower",
    "FlagSpec",
    "LocalizationDisagreement",
    "arrangement_sign",
    "flag_integral",
    "flag_tower",
    "localization_integral",
    "vandermonde_integral",
    "vandermonde_product",
]
