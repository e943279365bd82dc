"""Report serializers: JSON structures and CSV rows for every pipeline stage."""

from __future__ import annotations

import csv
import io
from typing import Optional, Sequence

from .decomposition import Decomposition
from .detection import DetectionReport, FiveNumberSummary
from .evaluation import EvaluationResult


def _summary_dict(s: FiveNumberSummary) -> dict:
    return {"min": s.min, "q1": s.q1, "median": s.median, "q3": s.q3, "max": s.max}


def detection_to_json(report: DetectionReport) -> dict:
    doc: dict = {
        "classes": [
            {
                "id": m.class_id,
                "name": m.name,
                "nom": m.nom,
                "cbo": m.cbo,
                "ic": m.ic,
                "detected": m.class_id in set(report.detected),
            }
            for m in report.metrics
        ],
        "detected": list(report.detected),
        "summaries": {k: _summary_dict(v) for k, v in report.summaries.items()},
    }
    if report.rule is not None:
        doc["cutoffs"] = {
            "nom": report.rule.nom_cutoff,
            "cbo": report.rule.cbo_cutoff,
            "ic": report.rule.ic_cutoff,
            "quartile": report.rule.quartile,
        }
    return doc


def detection_to_csv(report: DetectionReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["id", "name", "nom", "cbo", "ic", "detected"])
    detected = set(report.detected)
    for m in report.metrics:
        writer.writerow([m.class_id, m.name, m.nom, m.cbo, "" if m.ic is None else f"{m.ic:.6f}", m.class_id in detected])
    if report.summaries:
        cutoffs = {}
        if report.rule is not None:
            cutoffs = {"nom": report.rule.nom_cutoff, "cbo": report.rule.cbo_cutoff, "ic": report.rule.ic_cutoff}
        writer.writerow([])
        writer.writerow(["metric", "min", "q1", "median", "q3", "max", "cutoff"])
        for name, s in report.summaries.items():
            cut = cutoffs.get(name)
            writer.writerow([name, s.min, s.q1, s.median, s.q3, s.max, "" if cut is None else cut])
    return buf.getvalue()


def decomposition_to_json(decomposition: Decomposition) -> dict:
    return {
        "class": decomposition.class_id,
        "threshold": decomposition.threshold,
        "groups": [list(g) for g in decomposition.groups],
        "removed_edges": decomposition.removed_edges,
        "type": decomposition.type_label,
    }


def sweep_to_json(class_id: str, results: Sequence[tuple[float, Decomposition]]) -> dict:
    return {
        "class": class_id,
        "sweep": [decomposition_to_json(d) for _, d in results],
    }


def evaluation_to_json(result: EvaluationResult, threshold: Optional[float] = None) -> dict:
    doc = {
        "class": result.class_id,
        "responsibilities": [
            {
                "truth": list(s.truth),
                "matched": list(s.matched),
                "precision": s.precision,
                "recall": s.recall,
                "f_measure": s.f_measure,
            }
            for s in result.per_responsibility
        ],
        "mean_precision": result.mean_precision,
        "mean_recall": result.mean_recall,
        "class_f": result.class_f,
    }
    if threshold is not None:
        doc["threshold"] = threshold
    return doc


def evaluation_to_csv(results: Sequence[dict]) -> str:
    """Flatten one or more evaluation JSON documents into per-responsibility rows."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["class", "threshold", "responsibility", "precision", "recall", "f_measure", "class_f"])
    for doc in results:
        for i, resp in enumerate(doc["responsibilities"]):
            writer.writerow(
                [
                    doc["class"],
                    doc.get("threshold", ""),
                    i,
                    f"{resp['precision']:.6f}",
                    f"{resp['recall']:.6f}",
                    f"{resp['f_measure']:.6f}",
                    f"{doc['class_f']:.6f}",
                ]
            )
    return buf.getvalue()
