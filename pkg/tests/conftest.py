"""Shared generators for randomized tests.

Everything is seeded through numpy Generators passed in explicitly, so any
failure reproduces from the test's own seed.
"""

from itertools import combinations

import numpy as np
import pytest

from condavg import Concept, DirectedGraph, ExplicitClass, is_independent


def random_graph(rng: np.random.Generator, n: int, p: float) -> DirectedGraph:
    """Directed Erdos-Renyi: each ordered pair (u, v), u != v, kept with prob p."""
    edges = []
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < p:
                edges.append((u, v))
    return DirectedGraph(n, edges)


def random_explicit_class(
    rng: np.random.Generator, n: int, size: int
) -> ExplicitClass:
    """Up to `size` distinct random concepts on n vertices."""
    seen = set()
    concepts = []
    for _ in range(4 * size):
        labels = tuple(int(b) for b in rng.integers(0, 2, size=n))
        if labels not in seen:
            seen.add(labels)
            concepts.append(Concept(labels))
        if len(concepts) == size:
            break
    return ExplicitClass(concepts)


def brute_force_alpha(g: DirectedGraph) -> tuple[int, tuple[int, ...]]:
    """Exhaustive maximum independent set; lexicographically smallest witness.

    Scans sizes downward and, within a size, combinations() already emits
    lexicographic order, so the first hit is the lexmin witness.
    """
    verts = range(g.n)
    for size in range(g.n, 0, -1):
        for combo in combinations(verts, size):
            if is_independent(g, combo):
                return size, combo
    return 0, ()


@pytest.fixture
def rng():
    return np.random.default_rng(20260816)
