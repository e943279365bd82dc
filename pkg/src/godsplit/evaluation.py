"""Scoring produced decompositions against manually identified responsibilities.

Each ground-truth responsibility is matched to the produced group with the
highest Jaccard overlap; precision, recall and F-measure are computed per
responsibility and aggregated into a class-level F (harmonic mean of the
mean precision and mean recall).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Collection, Sequence


@dataclass(frozen=True)
class GroundTruth:
    """Manually identified responsibilities for one class."""

    class_id: str
    responsibilities: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if not self.responsibilities:
            raise ValueError("ground truth must list at least one responsibility")
        seen: set[str] = set()
        for resp in self.responsibilities:
            if not resp:
                raise ValueError("ground-truth responsibilities must be non-empty")
            overlap = seen.intersection(resp)
            if overlap:
                raise ValueError(f"ground-truth responsibilities overlap on {sorted(overlap)}")
            seen.update(resp)


@dataclass(frozen=True)
class ResponsibilityScore:
    truth: tuple[str, ...]
    matched: tuple[str, ...]
    precision: float
    recall: float
    f_measure: float


@dataclass(frozen=True)
class EvaluationResult:
    class_id: str
    per_responsibility: tuple[ResponsibilityScore, ...]
    mean_precision: float
    mean_recall: float
    class_f: float


def load_ground_truth(path: str | Path) -> GroundTruth:
    """Read {"class": id, "responsibilities": [[methodId, ...], ...]}."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    try:
        class_id = doc["class"]
        responsibilities = doc["responsibilities"]
    except (TypeError, KeyError) as exc:
        raise ValueError(f"ground-truth file missing field {exc.args[0]!r}") from None
    if not isinstance(responsibilities, list) or not all(isinstance(r, list) for r in responsibilities):
        raise ValueError("'responsibilities' must be a list of method-id lists")
    return GroundTruth(
        class_id=str(class_id),
        responsibilities=tuple(tuple(str(m) for m in r) for r in responsibilities),
    )


def best_match(truth: Collection[str], produced: Sequence[Collection[str]]) -> Collection[str]:
    """The produced set with the highest Jaccard overlap against truth.

    Ties break toward the larger intersection, then the earliest position.
    """
    if not produced:
        raise ValueError("produced decomposition has no groups")
    truth_set = set(truth)
    best = None
    best_key = None
    for pos, group in enumerate(produced):
        group_set = set(group)
        inter = len(truth_set & group_set)
        union = len(truth_set | group_set)
        jaccard = inter / union if union else 0.0
        key = (-jaccard, -inter, pos)
        if best_key is None or key < best_key:
            best, best_key = group, key
    return best


def _f(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def score(truth: GroundTruth, produced: Sequence[Collection[str]]) -> EvaluationResult:
    """Precision/recall/F per ground-truth responsibility plus the class-level F.

    The same produced group may be the best match of several responsibilities;
    no one-to-one assignment is enforced.
    """
    if not produced:
        raise ValueError("produced decomposition has no groups")
    scores = []
    for resp in truth.responsibilities:
        match = best_match(resp, produced)
        match_set = set(match)
        inter = len(set(resp) & match_set)
        precision = inter / len(match_set) if match_set else 0.0
        recall = inter / len(resp)
        scores.append(
            ResponsibilityScore(
                truth=tuple(resp),
                matched=tuple(match),
                precision=precision,
                recall=recall,
                f_measure=_f(precision, recall),
            )
        )
    mean_p = sum(s.precision for s in scores) / len(scores)
    mean_r = sum(s.recall for s in scores) / len(scores)
    return EvaluationResult(
        class_id=truth.class_id,
        per_responsibility=tuple(scores),
        mean_precision=mean_p,
        mean_recall=mean_r,
        class_f=_f(mean_p, mean_r),
    )
