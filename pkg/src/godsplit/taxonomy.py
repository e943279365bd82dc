"""Structural taxonomy over the entity tree and pairwise structural similarity.

The taxonomy treats packages/classes as internal nodes and methods as leaves.
Similarity of two methods is -log10 of the normalized subtree size of their
lowest common ancestor, so methods deep in a small shared container score
high and methods that only meet at the root score near zero.

Queries are O(1) after an O(N log N) build (Euler tour + sparse table), and
nothing quadratic in the number of methods is ever materialized.
"""

from __future__ import annotations

import math

from .model import CodeModel


class TaxonomyIndex:
    """Preprocessed tree answering LCA, subtree-size and similarity queries.

    Immutable after construction; queries are pure and thread-safe.
    """

    def __init__(self, model: CodeModel):
        root = model.root  # raises if the tree is not single-rooted
        order = list(model.entities)
        self._index = {eid: i for i, eid in enumerate(order)}
        self._ids = order
        self._kinds = [model.entities[eid].kind for eid in order]
        n = len(order)
        self.node_count = n

        children = [[] for _ in range(n)]
        for eid, ent in model.entities.items():
            if ent.parent is not None:
                children[self._index[ent.parent]].append(self._index[eid])

        # iterative Euler tour; recursion would overflow on deep trees
        euler: list[int] = []
        depth_at: list[int] = []
        first = [-1] * n
        subtree = [0] * n  # proper descendants
        stack: list[tuple[int, int, int]] = [(self._index[root], 0, 0)]  # node, depth, child cursor
        while stack:
            node, depth, cursor = stack.pop()
            if cursor == 0:
                first[node] = len(euler)
            euler.append(node)
            depth_at.append(depth)
            if cursor < len(children[node]):
                stack.append((node, depth, cursor + 1))
                stack.append((children[node][cursor], depth + 1, 0))
            elif stack:  # returning to the parent: fold this subtree into it
                parent = stack[-1][0]
                subtree[parent] += subtree[node] + 1

        self._euler = euler
        self._first = first
        self._subtree = subtree
        self._depth_at = depth_at
        self._table, self._log = self._build_sparse(euler, depth_at)

        # per-node similarity contribution: -log10(|se(node)|_eff / N)
        # leaves store 0 descendants but count as 1 so self-similarity is finite
        self._node_ss = [-math.log10(max(1, subtree[i]) / n) for i in range(n)]
        self.max_similarity = -math.log10(1.0 / n)

    @staticmethod
    def _build_sparse(euler: list[int], depth_at: list[int]) -> tuple[list[list[int]], list[int]]:
        """Sparse table of argmin-by-depth positions over the Euler tour."""
        m = len(euler)
        log = [0] * (m + 1)
        for i in range(2, m + 1):
            log[i] = log[i // 2] + 1
        table = [list(range(m))]
        j = 1
        while (1 << j) <= m:
            prev = table[j - 1]
            half = 1 << (j - 1)
            row = [0] * (m - (1 << j) + 1)
            for i in range(len(row)):
                a, b = prev[i], prev[i + half]
                row[i] = a if depth_at[a] <= depth_at[b] else b
            table.append(row)
            j += 1
        return table, log

    def _lca_index(self, a: int, b: int) -> int:
        lo, hi = self._first[a], self._first[b]
        if lo > hi:
            lo, hi = hi, lo
        span = self._log[hi - lo + 1]
        left = self._table[span][lo]
        right = self._table[span][hi - (1 << span) + 1]
        return left if self._depth_at[left] <= self._depth_at[right] else right

    # -- public queries ------------------------------------------------------

    def lca(self, a: str, b: str) -> str:
        """Lowest common ancestor of two entities (lca(a, a) == a)."""
        ai, bi = self._resolve(a), self._resolve(b)
        return self._ids[self._euler[self._lca_index(ai, bi)]]

    def subtree_size(self, entity_id: str) -> int:
        """Number of proper descendants (0 for leaves)."""
        return self._subtree[self._resolve(entity_id)]

    def similarity(self, a: str, b: str) -> float:
        """Structural similarity of two methods; symmetric, maximal at a == b."""
        ai, bi = self._resolve(a), self._resolve(b)
        for name, idx in ((a, ai), (b, bi)):
            if self._kinds[idx] != "method":
                raise ValueError(f"similarity is defined for methods only, got {name!r} ({self._kinds[idx]})")
        return self._node_ss[self._euler[self._lca_index(ai, bi)]]

    def similarity_by_index(self, ai: int, bi: int) -> float:
        """Untyped fast path used by the similarity engine's inner loops."""
        return self._node_ss[self._euler[self._lca_index(ai, bi)]]

    def index_of(self, entity_id: str) -> int:
        return self._resolve(entity_id)

    def _resolve(self, entity_id: str) -> int:
        try:
            return self._index[entity_id]
        except KeyError:
            raise KeyError(f"unknown entity id: {entity_id!r}") from None


def build_taxonomy(model: CodeModel) -> TaxonomyIndex:
    """Build the structural index for a validated, single-rooted model."""
    return TaxonomyIndex(model)


def structural_similarity(index: TaxonomyIndex, a: str, b: str) -> float:
    """Structural similarity of methods a and b (see TaxonomyIndex.similarity)."""
    return index.similarity(a, b)
