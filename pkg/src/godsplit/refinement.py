"""Refinement of raw structural similarity.

Two refinements stack on top of the taxonomy value: the strongest declared
relationship between the methods' classes scales cross-class pairs, and a
call dependency between methods of the same class doubles their similarity.
Refined values can exceed the self-similarity maximum; the optional tapping
clamp caps them there, but is off by default because the reference worked
values are carried through unclamped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

from .model import RELATIONSHIP_KINDS, CodeModel

TAPPING_MODES = ("off", "clamp")


@dataclass(frozen=True)
class WeightConfig:
    """Relationship weights, the same-class call multiplier, and tapping mode."""

    inner: float = 1.5
    generalization: float = 1.4
    aggregation: float = 1.3
    association: float = 1.2
    dependency: float = 1.2
    same_class_call_multiplier: float = 2.0
    tapping: str = "off"  # "off" | "clamp"

    def __post_init__(self):
        for kind in RELATIONSHIP_KINDS:
            if getattr(self, kind) < 1.0:
                raise ValueError(f"weight for {kind!r} must be >= 1, got {getattr(self, kind)}")
        if self.same_class_call_multiplier < 1.0:
            raise ValueError(f"call multiplier must be >= 1, got {self.same_class_call_multiplier}")
        if self.tapping not in TAPPING_MODES:
            raise ValueError(f"tapping must be one of {TAPPING_MODES}, got {self.tapping!r}")

    def weight_of(self, kind: str) -> float:
        if kind not in RELATIONSHIP_KINDS:
            raise KeyError(f"unknown relationship kind: {kind!r}")
        return getattr(self, kind)

    def with_overrides(self, overrides: dict[str, float]) -> "WeightConfig":
        """New config with some relationship weights replaced (key = kind)."""
        unknown = set(overrides) - set(RELATIONSHIP_KINDS)
        if unknown:
            raise KeyError(f"unknown relationship kinds in overrides: {sorted(unknown)}")
        return replace(self, **{k: float(v) for k, v in overrides.items()})


def load_weight_overrides(path: str | Path) -> dict[str, float]:
    """Read a weight-override file: a JSON object of relationship kind -> weight."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(doc, dict):
        raise ValueError("weight file must be a JSON object of kind -> weight")
    return {str(k): float(v) for k, v in doc.items()}


def relationship_weight_table(model: CodeModel, config: WeightConfig) -> dict[tuple[str, str], float]:
    """Per class pair (sorted tuple): the weight of the strongest relationship."""
    table: dict[tuple[str, str], float] = {}
    for rel in model.relationships:
        key = (rel.source, rel.target) if rel.source <= rel.target else (rel.target, rel.source)
        w = config.weight_of(rel.kind)
        if w > table.get(key, 1.0):
            table[key] = w
    return table


def relationship_weight(config: WeightConfig, model: CodeModel, class_a: str, class_b: str) -> float:
    """Weight for a class pair: max over declared kinds in either direction, 1.0 if unrelated.

    A class paired with itself weighs 1.0; same-class method pairs are
    boosted by the call multiplier instead.
    """
    for cid in (class_a, class_b):
        ent = model.entities.get(cid)
        if ent is None:
            raise KeyError(f"unknown entity id: {cid!r}")
        if ent.kind != "class":
            raise ValueError(f"not a class: {cid!r} (kind={ent.kind})")
    if class_a == class_b:
        return 1.0
    best = 1.0
    for rel in model.relationships:
        if {rel.source, rel.target} == {class_a, class_b}:
            best = max(best, config.weight_of(rel.kind))
    return best


def apply_refinement(
    raw: float,
    weight: float,
    call_doubled: bool,
    multiplier: float,
    clamp_at: float | None,
) -> float:
    """Pure refinement rule: scale raw similarity, optionally clamp.

    Exactly one of the two boosts applies per pair: the relationship weight
    for cross-class pairs, the call multiplier for same-class pairs with a
    call dependency.
    """
    refined = raw * multiplier if call_doubled else raw * weight
    if clamp_at is not None and refined > clamp_at:
        return clamp_at
    return refined
