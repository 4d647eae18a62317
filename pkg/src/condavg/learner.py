"""Learners for neighborhood-average targets.

The core learner predicts at ``x`` the fraction of positive labels among
sample points landing in the closed out-neighborhood of ``x`` (with
multiplicity).  When no sample point lands there it falls back to
one-inclusion prediction over the isolated vertices of the subgraph
induced on the distinct sampled vertices plus ``x``, using the concept
class restricted to those coordinates.

Confidence amplification splits the sample into contiguous blocks, fits
the core learner per block, and takes the pointwise median.  The ERM
variant fits the first consistent concept on one sample and smooths it
with neighborhood counts from a second.
"""

import math
from collections.abc import Sequence

from .concepts import (
    Concept,
    ConceptClass,
    SingletonClass,
    first_consistent_concept,
    is_realizable,
    restrict,
)
from .errors import RealizabilityError
from .graphs import DirectedGraph
from .measure import LabeledSample
from .oig import PatternClass, oig_predict

AMPLIFICATION_FACTOR = 23.0


def median_combine(values: Sequence[float]) -> float:
    """Median of the values; even counts take the midpoint of the central pair."""
    if not values:
        raise ValueError("need at least one value")
    ordered = sorted(values)
    mid = len(ordered) // 2
    if len(ordered) % 2 == 1:
        return ordered[mid]
    return (ordered[mid - 1] + ordered[mid]) / 2.0


def choose_k(delta: float) -> int:
    """Number of blocks for confidence ``delta``: ``ceil(23 * ln(1/delta))``."""
    if not (0 < delta < 1):
        raise ValueError("delta must lie in (0, 1)")
    return max(1, math.ceil(AMPLIFICATION_FACTOR * math.log(1.0 / delta)))


class TrainedModel:
    """Base predictor: a pure map from vertex to a value in [0, 1]."""

    mode = "base"

    def __init__(self, graph: DirectedGraph, concept_class: ConceptClass):
        if concept_class.n != graph.n:
            raise ValueError("class and graph domain sizes differ")
        self.graph = graph
        self.concept_class = concept_class
        self._memo: dict[int, float] = {}

    def predict(self, x: int) -> float:
        if not (0 <= x < self.graph.n):
            raise ValueError(f"vertex {x} out of range for n={self.graph.n}")
        got = self._memo.get(x)
        if got is None:
            got = self._predict(x)
            self._memo[x] = got
        return got

    def _predict(self, x: int) -> float:
        raise NotImplementedError

    def __call__(self, x: int) -> float:
        return self.predict(x)

    def predict_all(self) -> tuple[float, ...]:
        return tuple(self.predict(x) for x in range(self.graph.n))


class NeighborAverageModel(TrainedModel):
    mode = "neighbor_avg"

    def __init__(
        self, graph: DirectedGraph, concept_class: ConceptClass, sample: LabeledSample
    ):
        super().__init__(graph, concept_class)
        self.sample = sample
        for v in sample.distinct:
            if v >= graph.n:
                raise ValueError(f"sampled vertex {v} out of range for n={graph.n}")
        if not is_realizable(concept_class, sample.items):
            raise RealizabilityError("sample labels fit no concept in the class")
        distinct = frozenset(sample.distinct)
        self._distinct = distinct
        # Sampled vertices with no edge to another sampled vertex; the
        # one-inclusion fallback reads labels off these.
        self._isolated_sampled = tuple(
            v
            for v in sample.distinct
            if not ((graph.out_neighbors(v) | graph.in_neighbors(v)) & distinct)
        )

    def _neighborhood_counts(self, x: int) -> tuple[int, int]:
        g = self.graph
        sample = self.sample
        total = sample.count(x)
        ones = sample.ones(x)
        out = g.out_neighbors(x)
        if len(out) <= len(self._distinct):
            hits = out & self._distinct
        else:
            hits = (v for v in self._distinct if v in out)
        for u in hits:
            total += sample.count(u)
            ones += sample.ones(u)
        return total, ones

    def _predict(self, x: int) -> float:
        total, ones = self._neighborhood_counts(x)
        if total > 0:
            return ones / total
        if isinstance(self.concept_class, SingletonClass):
            # Restricting a one-concept class leaves a single pattern, so the
            # orientation step is forced; skip building it.
            return float(self.concept_class.concept(x))
        g = self.graph
        coords = [
            v
            for v in self._isolated_sampled
            if v != x and not (g.has_edge(x, v) or g.has_edge(v, x))
        ]
        observed = [self.sample.label(v) for v in coords]
        coords.append(x)
        pc = PatternClass.from_concepts(restrict(self.concept_class, coords))
        return float(oig_predict(pc, observed))


class AmplifiedModel(TrainedModel):
    mode = "amplified"

    def __init__(
        self,
        graph: DirectedGraph,
        concept_class: ConceptClass,
        sample: LabeledSample,
        k: int,
    ):
        super().__init__(graph, concept_class)
        self.sample = sample
        self.k = k
        self.blocks = tuple(
            NeighborAverageModel(graph, concept_class, block)
            for block in sample.blocks(k)
        )

    def _predict(self, x: int) -> float:
        return median_combine([m.predict(x) for m in self.blocks])


class ErmModel(TrainedModel):
    mode = "erm"

    def __init__(
        self,
        graph: DirectedGraph,
        concept_class: ConceptClass,
        concept: Concept,
        smoothing_sample: LabeledSample,
    ):
        super().__init__(graph, concept_class)
        self.concept = concept
        self.smoothing_sample = smoothing_sample

    def _predict(self, x: int) -> float:
        g = self.graph
        sample = self.smoothing_sample
        total = sample.count(x)
        ones = sample.ones(x)
        for u in g.out_neighbors(x):
            total += sample.count(u)
            ones += sample.ones(u)
        return (self.concept(x) + ones) / (total + 1)


def fit_neighbor_average(
    g: DirectedGraph, cc: ConceptClass, sample: LabeledSample
) -> NeighborAverageModel:
    """Fit the core learner; the sample must be realizable by the class."""
    return NeighborAverageModel(g, cc, sample)


def fit_amplified(
    g: DirectedGraph, cc: ConceptClass, sample: LabeledSample, k: int
) -> AmplifiedModel:
    """Median of ``k`` block models; needs at least ``k`` sample points.

    With ``k = 1`` the predictions coincide with the core learner's.
    """
    if k < 1:
        raise ValueError("need k >= 1 blocks")
    return AmplifiedModel(g, cc, sample, k)


def fit_erm(
    g: DirectedGraph,
    cc: ConceptClass,
    fitting_sample: LabeledSample,
    smoothing_sample: LabeledSample,
) -> ErmModel:
    """First consistent concept on one sample, neighborhood-smoothed by another.

    The prediction at ``x`` averages the fitted concept's label at ``x``
    with the labels of smoothing points in the closed out-neighborhood:
    ``(c(x) + positives) / (count + 1)``.
    """
    for v in list(fitting_sample.distinct) + list(smoothing_sample.distinct):
        if v >= g.n:
            raise ValueError(f"sampled vertex {v} out of range for n={g.n}")
    concept = first_consistent_concept(cc, fitting_sample.items)
    if concept is None:
        raise RealizabilityError("fitting sample labels fit no concept in the class")
    if not is_realizable(cc, smoothing_sample.items):
        raise RealizabilityError("smoothing sample labels fit no concept in the class")
    return ErmModel(g, cc, concept, smoothing_sample)
