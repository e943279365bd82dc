"""Per-class metrics and the god-class detection rule.

A class is flagged when it defines more methods than most (NOM above the
quartile cutoff), talks to more classes than most (CBO above), and its
methods are less similar to each other than most (IC below).  Cutoffs are
always derived from the analyzed system's own metric distributions, never
hard-coded.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .engine import SimilarityEngine
from .model import CodeModel
from .refinement import WeightConfig
from .validation import check_code_model

DEFAULT_QUARTILE = 0.75


@dataclass(frozen=True)
class ClassMetrics:
    class_id: str
    name: str
    nom: int
    cbo: int
    ic: Optional[float]  # absent when the class defines fewer than 2 methods


@dataclass(frozen=True)
class FiveNumberSummary:
    """Box-plot statistics: min, quartiles, max."""

    min: float
    q1: float
    median: float
    q3: float
    max: float

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "FiveNumberSummary":
        if len(values) == 0:
            raise ValueError("cannot summarize an empty list")
        lo, q1, med, q3, hi = np.quantile(np.asarray(values, dtype=float), [0.0, 0.25, 0.5, 0.75, 1.0])
        return cls(float(lo), float(q1), float(med), float(q3), float(hi))


@dataclass(frozen=True)
class DetectionRule:
    """Quantile cutoffs applied with strict inequalities."""

    nom_cutoff: float
    cbo_cutoff: float
    ic_cutoff: Optional[float]
    quartile: float = DEFAULT_QUARTILE

    @classmethod
    def from_metrics(cls, metrics: Sequence[ClassMetrics], quartile: float = DEFAULT_QUARTILE) -> "DetectionRule":
        if not 0.0 < quartile < 1.0:
            raise ValueError(f"quartile must be in (0, 1), got {quartile}")
        if not metrics:
            raise ValueError("cannot derive cutoffs without classes")
        noms = [m.nom for m in metrics]
        cbos = [m.cbo for m in metrics]
        ics = [m.ic for m in metrics if m.ic is not None]
        return cls(
            nom_cutoff=quantile(noms, quartile),
            cbo_cutoff=quantile(cbos, quartile),
            ic_cutoff=quantile(ics, quartile) if ics else None,
            quartile=quartile,
        )

    def matches(self, m: ClassMetrics) -> bool:
        return (
            m.ic is not None
            and self.ic_cutoff is not None
            and m.nom > self.nom_cutoff
            and m.cbo > self.cbo_cutoff
            and m.ic < self.ic_cutoff
        )


@dataclass
class DetectionReport:
    metrics: list[ClassMetrics]
    rule: Optional[DetectionRule]
    summaries: dict[str, FiveNumberSummary] = field(default_factory=dict)
    detected: list[str] = field(default_factory=list)


def quantile(values: Sequence[float], q: float) -> float:
    """Quantile with linear interpolation at fractional rank (n-1)*q."""
    if len(values) == 0:
        raise ValueError("cannot take a quantile of an empty list")
    return float(np.quantile(np.asarray(values, dtype=float), q))


def metric_summary(values: Sequence[float]) -> FiveNumberSummary:
    """Five-number summary of a non-empty metric distribution."""
    return FiveNumberSummary.from_values(values)


def class_cohesion(engine: SimilarityEngine, class_id: str) -> Optional[float]:
    """Mean interaction similarity over distinct method pairs; None when NOM < 2."""
    methods = engine.model.methods_of(class_id)
    m = len(methods)
    if m < 2:
        return None
    total = sum(engine.iss(a, b) for a, b in combinations(methods, 2))
    # each unordered pair appears twice in the ordered double sum
    return 2.0 * total / (m * (m - 1))


def class_coupling(model: CodeModel, class_id: str) -> int:
    """Distinct other classes linked by a call edge or declared relationship."""
    ent = model.entities.get(class_id)
    if ent is None:
        raise KeyError(f"unknown entity id: {class_id!r}")
    if ent.kind != "class":
        raise ValueError(f"not a class: {class_id!r} (kind={ent.kind})")
    return len(model.coupling_partners.get(class_id, ()))


def compute_class_metrics(model: CodeModel, engine: SimilarityEngine) -> list[ClassMetrics]:
    """NOM, CBO and IC for every class, in model order."""
    out = []
    for cid in model.class_ids():
        methods = model.methods_by_class.get(cid, [])
        out.append(
            ClassMetrics(
                class_id=cid,
                name=model.name_of(cid),
                nom=len(methods),
                cbo=len(model.coupling_partners.get(cid, ())),
                ic=class_cohesion(engine, cid),
            )
        )
    return out


def detect_god_classes(
    model: CodeModel,
    engine: SimilarityEngine,
    rule: Optional[DetectionRule] = None,
    quartile: float = DEFAULT_QUARTILE,
) -> DetectionReport:
    """Apply the detection rule; cutoffs derived from this system unless given."""
    metrics = compute_class_metrics(model, engine)
    if not metrics:
        return DetectionReport(metrics=[], rule=None)
    if rule is None:
        rule = DetectionRule.from_metrics(metrics, quartile=quartile)
    ics = [m.ic for m in metrics if m.ic is not None]
    summaries = {
        "nom": FiveNumberSummary.from_values([m.nom for m in metrics]),
        "cbo": FiveNumberSummary.from_values([m.cbo for m in metrics]),
    }
    if ics:
        summaries["ic"] = FiveNumberSummary.from_values(ics)
    detected = [m.class_id for m in metrics if rule.matches(m)]
    return DetectionReport(metrics=metrics, rule=rule, summaries=summaries, detected=detected)


class GodClassDetector(BaseEstimator):
    """Estimator-style front end for god-class detection.

    Fitting computes per-class NOM/CBO/IC over a code model, derives the
    quantile cutoffs, and flags the classes matching the rule.

    Parameters
    ----------
    quartile : float, default 0.75
        Quantile used for all three cutoffs.
    weights : dict or None
        Relationship-weight overrides (kind -> weight).
    call_multiplier : float, default 2.0
        Boost for same-class method pairs linked by a call.
    tapping : {"off", "clamp"}, default "off"
        Whether refined similarity is capped at the taxonomy maximum.

    Attributes
    ----------
    classes_ : list of class ids in model order
    metrics_ : list of ClassMetrics
    rule_ : DetectionRule or None
    report_ : DetectionReport
    detected_ : list of detected class ids
    engine_ : the configured SimilarityEngine (reusable for decomposition)
    """

    def __init__(
        self,
        quartile: float = DEFAULT_QUARTILE,
        weights: Optional[dict] = None,
        call_multiplier: float = 2.0,
        tapping: str = "off",
    ):
        self.quartile = quartile
        self.weights = weights
        self.call_multiplier = call_multiplier
        self.tapping = tapping

    def _weight_config(self) -> WeightConfig:
        config = WeightConfig().with_overrides(self.weights or {})
        return replace(config, same_class_call_multiplier=self.call_multiplier, tapping=self.tapping)

    def fit(self, X: CodeModel, y=None) -> "GodClassDetector":
        model = check_code_model(X)
        self.engine_ = SimilarityEngine(model, weights=self._weight_config())
        self.report_ = detect_god_classes(model, self.engine_, quartile=self.quartile)
        self.metrics_ = self.report_.metrics
        self.rule_ = self.report_.rule
        self.classes_ = [m.class_id for m in self.metrics_]
        self.detected_ = list(self.report_.detected)
        return self

    def fit_predict(self, X: CodeModel, y=None) -> np.ndarray:
        """Fit and return one flag per class (True where detected), in model order."""
        self.fit(X)
        detected = set(self.detected_)
        return np.array([cid in detected for cid in self.classes_], dtype=bool)

    def predict(self, X: Optional[CodeModel] = None) -> np.ndarray:
        """Flags for the fitted model; X, when given, must be the fitted model."""
        check_is_fitted(self, "report_")
        if X is not None and check_code_model(X) is not self.engine_.model:
            raise ValueError("detection cutoffs are system-relative; call fit on the new model instead")
        detected = set(self.detected_)
        return np.array([cid in detected for cid in self.classes_], dtype=bool)
