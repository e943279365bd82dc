"""Fan-in/fan-out sets and interaction-based similarity of methods.

Two methods that are called by similar methods and that call similar methods
are similar themselves, even when the structural taxonomy cannot tell them
apart (methods of one class all share the same container).  The interaction
value is the sum of the mean pairwise similarity of the fan-in sets, of the
fan-out sets, and of the refined similarity of the pair itself.
"""

from __future__ import annotations

from typing import Callable, Collection

from .model import CodeModel

SimilarityFn = Callable[[str, str], float]


class CallIndex:
    """Deduplicated fan-in and fan-out sets per method."""

    def __init__(self, model: CodeModel):
        known = set(model.method_class)
        fan_in: dict[str, set[str]] = {}
        fan_out: dict[str, set[str]] = {}
        for call in model.calls:
            if call.caller not in known or call.callee not in known:
                continue
            fan_out.setdefault(call.caller, set()).add(call.callee)
            fan_in.setdefault(call.callee, set()).add(call.caller)
        self._fan_in = {m: frozenset(s) for m, s in fan_in.items()}
        self._fan_out = {m: frozenset(s) for m, s in fan_out.items()}
        self._known = known

    def fan_in(self, method_id: str) -> frozenset[str]:
        """Methods invoking the given method."""
        self._check(method_id)
        return self._fan_in.get(method_id, frozenset())

    def fan_out(self, method_id: str) -> frozenset[str]:
        """Methods the given method invokes."""
        self._check(method_id)
        return self._fan_out.get(method_id, frozenset())

    def _check(self, method_id: str) -> None:
        if method_id not in self._known:
            raise KeyError(f"unknown method id: {method_id!r}")


def mean_set_similarity(similarity: SimilarityFn, set_a: Collection[str], set_b: Collection[str]) -> float:
    """Average similarity over the Cartesian product of two method sets.

    Empty operands mean "no interaction evidence" and score 0.  Operands are
    iterated in sorted order so the float sum is identical across processes
    regardless of set iteration order (hash randomization).
    """
    if not set_a or not set_b:
        return 0.0
    ordered_b = sorted(set_b)
    total = 0.0
    for a in sorted(set_a):
        for b in ordered_b:
            total += similarity(a, b)
    return total / (len(set_a) * len(set_b))


def interaction_similarity(similarity: SimilarityFn, calls: CallIndex, a: str, b: str) -> float:
    """Fan-in mss + fan-out mss + refined similarity of the pair; symmetric."""
    fan_in = mean_set_similarity(similarity, calls.fan_in(a), calls.fan_in(b))
    fan_out = mean_set_similarity(similarity, calls.fan_out(a), calls.fan_out(b))
    return fan_in + fan_out + similarity(a, b)
