"""Information-theoretic predictive-uncertainty measures on sampled
predictive distributions: the full TU/AU/EU framework grid, its proven
identities as runtime checks, and detection / selective-prediction metrics.
"""

from .core import (
    EnsembleItem,
    MeasureSpec,
    ProbVec,
    ScoreRecord,
    normalize,
    validate_item,
)
from .errors import (
    AllZeroError,
    BadLabelError,
    DimMismatchError,
    EmptySamplesError,
    KInconsistentError,
    MissingReferenceError,
    MissingSingleError,
    NeedTwoSamplesError,
    NegativeMassError,
    OneClassOnlyError,
    ParseError,
    SumNotOneError,
    UncqError,
    ValidationError,
)
from .io import FORMAT_HEADER, read_items, read_scores, write_items, write_scores
from .measures import (
    AuditReport,
    IdentityCheck,
    MeasureValue,
    aleatoric,
    audit_identities,
    epistemic,
    measure,
    posterior_mean,
    score_dataset,
    total_uncertainty,
)
from .metrics import (
    DetectionSet,
    RetentionSet,
    auarc,
    aupr,
    auroc,
    fpr_at_tpr,
    retention_curve,
)
from .scoring import Rule, divergence, entropy, rule_from_name, total
from .synth import (
    BetaPosterior,
    SynthConfig,
    beta_bernoulli_item,
    beta_bernoulli_oracle,
    beta_measure_grid,
    detection_scenario,
    dirichlet_ensemble,
)

__version__ = "0.1.0"

__all__ = [
    "AllZeroError",
    "AuditReport",
    "BadLabelError",
    "BetaPosterior",
    "DetectionSet",
    "DimMismatchError",
    "EmptySamplesError",
    "EnsembleItem",
    "FORMAT_HEADER",
    "IdentityCheck",
    "KInconsistentError",
    "MeasureSpec",
    "MeasureValue",
    "MissingReferenceError",
    "MissingSingleError",
    "NeedTwoSamplesError",
    "NegativeMassError",
    "OneClassOnlyError",
    "ParseError",
    "ProbVec",
    "RetentionSet",
    "Rule",
    "ScoreRecord",
    "SumNotOneError",
    "SynthConfig",
    "UncqError",
    "ValidationError",
    "aleatoric",
    "auarc",
    "aupr",
    "auroc",
    "audit_identities",
    "beta_bernoulli_item",
    "beta_bernoulli_oracle",
    "beta_measure_grid",
    "detection_scenario",
    "dirichlet_ensemble",
    "divergence",
    "entropy",
    "epistemic",
    "fpr_at_tpr",
    "measure",
    "normalize",
    "posterior_mean",
    "read_items",
    "read_scores",
    "retention_curve",
    "rule_from_name",
    "score_dataset",
    "total",
    "total_uncertainty",
    "validate_item",
    "write_items",
    "write_scores",
]
