"""Configured similarity engine over one code model.

Bundles the taxonomy, the relationship weights and the call index behind
three pairwise queries: raw structural similarity, refined similarity, and
interaction similarity.  Values are computed lazily per pair; only results
for pairs actually queried are retained, so a system with thousands of
methods never allocates a dense pairwise matrix.

All queries are pure and safe to issue concurrently once built.
"""

from __future__ import annotations

from typing import Collection

from .interaction import CallIndex, mean_set_similarity
from .model import CodeModel
from .refinement import WeightConfig, apply_refinement, relationship_weight_table
from .taxonomy import TaxonomyIndex, build_taxonomy


class SimilarityEngine:
    def __init__(
        self,
        model: CodeModel,
        weights: WeightConfig | None = None,
        taxonomy: TaxonomyIndex | None = None,
    ):
        self.model = model
        self.weights = weights or WeightConfig()
        self.taxonomy = taxonomy or build_taxonomy(model)
        self.calls = CallIndex(model)
        self._class_of = model.method_class
        self._pair_weights = relationship_weight_table(model, self.weights)
        self._call_pairs = {
            (c.caller, c.callee) if c.caller <= c.callee else (c.callee, c.caller)
            for c in model.calls
        }
        self._clamp_at = self.taxonomy.max_similarity if self.weights.tapping == "clamp" else None
        self._iss_cache: dict[tuple[str, str], float] = {}

    @property
    def max_similarity(self) -> float:
        """Raw self-similarity of any leaf: the taxonomy-wide maximum."""
        return self.taxonomy.max_similarity

    def structural(self, a: str, b: str) -> float:
        """Raw taxonomy similarity (before any refinement)."""
        return self.taxonomy.similarity(a, b)

    def refined(self, a: str, b: str) -> float:
        """Structural similarity scaled by class relationship or same-class call."""
        raw = self.taxonomy.similarity(a, b)
        ca, cb = self._class_of[a], self._class_of[b]
        if ca == cb:
            key = (a, b) if a <= b else (b, a)
            doubled = key in self._call_pairs
            return apply_refinement(raw, 1.0, doubled, self.weights.same_class_call_multiplier, self._clamp_at)
        pair = (ca, cb) if ca <= cb else (cb, ca)
        weight = self._pair_weights.get(pair, 1.0)
        return apply_refinement(raw, weight, False, 1.0, self._clamp_at)

    def mss(self, set_a: Collection[str], set_b: Collection[str]) -> float:
        """Mean refined similarity over the Cartesian product of two method sets."""
        return mean_set_similarity(self.refined, set_a, set_b)

    def iss(self, a: str, b: str) -> float:
        """Interaction similarity: fan-in mss + fan-out mss + refined pair similarity."""
        key = (a, b) if a <= b else (b, a)
        cached = self._iss_cache.get(key)
        if cached is not None:
            return cached
        calls = self.calls
        value = (
            self.mss(calls.fan_in(a), calls.fan_in(b))
            + self.mss(calls.fan_out(a), calls.fan_out(b))
            + self.refined(a, b)
        )
        self._iss_cache[key] = value
        return value

    def cached_pairs(self) -> int:
        """Number of pairwise interaction values currently retained."""
        return len(self._iss_cache)
