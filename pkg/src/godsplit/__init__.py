"""godsplit: detect god classes in a code model and split their responsibilities."""

from .decomposition import (
    Decomposition,
    ResponsibilityGraph,
    ThresholdDecomposer,
    ThresholdInterval,
    build_graph,
    classify_type,
    split,
    sweep,
    threshold_interval,
    to_dot,
)
from .detection import (
    ClassMetrics,
    DetectionReport,
    DetectionRule,
    FiveNumberSummary,
    GodClassDetector,
    class_cohesion,
    class_coupling,
    detect_god_classes,
    metric_summary,
)
from .engine import SimilarityEngine
from .evaluation import (
    EvaluationResult,
    GroundTruth,
    best_match,
    load_ground_truth,
    score,
)
from .interaction import CallIndex, interaction_similarity, mean_set_similarity
from .model import (
    CallEdge,
    ClassRelationship,
    CodeModel,
    Diagnostic,
    Entity,
    ModelError,
    ParseError,
    ValidationError,
    load_model,
    loads_model,
    serialize_model,
    validate_model,
)
from .refinement import WeightConfig, relationship_weight
from .taxonomy import TaxonomyIndex, build_taxonomy, structural_similarity

__version__ = "0.1.0"

__all__ = [
    "CallEdge",
    "CallIndex",
    "ClassMetrics",
    "ClassRelationship",
    "CodeModel",
    "Decomposition",
    "DetectionReport",
    "DetectionRule",
    "Diagnostic",
    "Entity",
    "EvaluationResult",
    "FiveNumberSummary",
    "GodClassDetector",
    "GroundTruth",
    "ModelError",
    "ParseError",
    "ResponsibilityGraph",
    "SimilarityEngine",
    "TaxonomyIndex",
    "ThresholdDecomposer",
    "ThresholdInterval",
    "ValidationError",
    "WeightConfig",
    "best_match",
    "build_graph",
    "build_taxonomy",
    "class_cohesion",
    "class_coupling",
    "classify_type",
    "detect_god_classes",
    "interaction_similarity",
    "load_ground_truth",
    "load_model",
    "loads_model",
    "mean_set_similarity",
    "metric_summary",
    "relationship_weight",
    "score",
    "serialize_model",
    "split",
    "structural_similarity",
    "sweep",
    "threshold_interval",
    "to_dot",
    "validate_model",
]
