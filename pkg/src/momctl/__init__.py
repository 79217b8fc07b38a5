"""Exact isometric embeddings of finite metric spaces into spaces of metrics."""
from .embeddings import (
    BoundedVector,
    EmbeddingWitness,
    InvalidInputError,
    PlanError,
    TruncationPlan,
    c0_embed,
    clamp,
    discrete_embed,
    discrete_witness,
    frechet_embed,
    net_min,
    one_point_embed,
    plan_truncation,
    replay,
)
from .metric import (
    BandViolationError,
    MetricMatrix,
    StructuralError,
    ValidationReport,
    add,
    band_metric,
    diameter,
    pullback,
    restrict,
    sup_distance,
    validate,
)
from .oracle import (
    GeneratorConfig,
    IsometryReport,
    brute_sup,
    exhaustive_triangle,
    gen_band_map,
    gen_random_metric,
    verify_isometry,
)

__version__ = "0.1.0"
