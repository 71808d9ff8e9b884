from crwarplab.chen.algebra import (
    exact_remainder,
    lemma1_beta,
    lemma1_check,
    lemma_identity_residual,
    theta,
    theta_groups,
    upsilon1,
)
from crwarplab.chen.equality import EqualityClassification, equality_classify
from crwarplab.chen.invariants import (
    chen_original,
    coeff_identities,
    delta_invariant,
    fundamental_identity_residual,
    inequality_i,
    inequality_ii,
    partial_scalar,
    real_form_chen,
    tilde_tau_cr,
)
from crwarplab.chen.report import (
    InvariantReport,
    PointData,
    SyntheticScenario,
    corollary_minimal_check,
    evaluate_chart,
    evaluate_point,
    evaluate_synthetic,
)

__all__ = [
    "EqualityClassification", "InvariantReport", "PointData", "SyntheticScenario",
    "chen_original", "coeff_identities", "corollary_minimal_check", "delta_invariant",
    "equality_classify", "evaluate_chart", "evaluate_point", "evaluate_synthetic",
    "exact_remainder", "fundamental_identity_residual", "inequality_i", "inequality_ii",
    "lemma1_beta", "lemma1_check", "lemma_identity_residual", "partial_scalar",
    "real_form_chen", "theta", "theta_groups", "tilde_tau_cr", "upsilon1",
]
