"""Hard-instance generators for lower-bound experiments.

Two constructions stress a learner in complementary ways:

* a shattered-set instance concentrates mass on an anchor of a shattered
  independent set and spreads the rest uniformly, so the target labels on
  the set are invisible until its low-mass members are sampled;
* a bichromatic instance perturbs the weights of an independent set of
  bichromatic vertices by ``+/- sqrt(eps)`` (signs summing to zero), which
  shifts every member's neighborhood average without changing the support.

Both generators are deterministic given their inputs; only
:func:`sample_sign_string` consumes randomness, through an explicit seed.
"""

import json
import math
from dataclasses import dataclass

from .concepts import Concept, ConceptClass, concept_class_to_json
from .errors import RealizabilityError
from .graphs import DirectedGraph, graph_to_json
from .measure import Distribution
from .params import alpha1, alpha2_concept
from .rng import philox


@dataclass(frozen=True)
class ShatteredInstance:
    """Anchor-heavy distribution on a shattered independent set.

    ``independent_set`` is sorted ascending and defines the coordinate
    order for target patterns.  The anchor is its smallest member and
    carries mass ``1 - 8 * eps_prime``; the remaining members share
    ``8 * eps_prime`` uniformly.  Because the set is independent, the
    neighborhood average of any target concept equals its labels on the
    whole support.
    """

    graph: DirectedGraph
    concept_class: ConceptClass
    independent_set: tuple[int, ...]
    eps_prime: float

    @property
    def anchor(self) -> int:
        return self.independent_set[0]

    @property
    def distribution(self) -> Distribution:
        rest = self.independent_set[1:]
        share = 8.0 * self.eps_prime / len(rest)
        weights = [0.0] * self.graph.n
        weights[self.anchor] = 1.0 - 8.0 * self.eps_prime
        for v in rest:
            weights[v] = share
        return Distribution(weights)

    def concept_for(self, pattern) -> Concept:
        """First concept (enumeration order) realizing ``pattern`` on the set."""
        pattern = tuple(int(b) for b in pattern)
        if len(pattern) != len(self.independent_set):
            raise ValueError(
                f"pattern length {len(pattern)} does not match set size "
                f"{len(self.independent_set)}"
            )
        for c in self.concept_class.members():
            if all(c(v) == b for v, b in zip(self.independent_set, pattern)):
                return c
        raise RealizabilityError(f"no concept realizes pattern {pattern}")

    def to_json(self) -> str:
        doc = {
            "family": "shattered",
            "graph": json.loads(graph_to_json(self.graph)),
            "concept_class": json.loads(concept_class_to_json(self.concept_class)),
            "independent_set": list(self.independent_set),
            "anchor": self.anchor,
            "eps_prime": self.eps_prime,
            "weights": list(self.distribution.weights),
        }
        return json.dumps(doc, separators=(", ", ": "))


def gen_shattered_instance(
    g: DirectedGraph,
    cc: ConceptClass,
    eps_prime: float = 0.01,
    budget: int | None = None,
) -> ShatteredInstance:
    """Build a shattered-set instance; needs a shattered independent pair.

    Raises ValueError naming the failing condition when ``eps_prime`` is
    outside ``(0, 1/8)`` or the largest shattered independent set has
    fewer than 2 vertices.
    """
    if not (0.0 < eps_prime < 0.125):
        raise ValueError(f"eps_prime must lie in (0, 1/8), got {eps_prime}")
    size, witness = alpha1(g, cc, budget)
    if size < 2:
        raise ValueError(
            f"shattered independence number is {size}, need at least 2"
        )
    return ShatteredInstance(
        graph=g,
        concept_class=cc,
        independent_set=tuple(sorted(witness)),
        eps_prime=eps_prime,
    )


@dataclass(frozen=True)
class BichromaticInstance:
    """Perturbable distribution on an independent bichromatic set.

    ``a_vertices`` (even count ``K``, sorted) carry base weight ``p_a``
    each; ``b_vertices`` (their selected opposite-labeled out-neighbors)
    carry ``p_b = p_a / d`` each, where every ``a`` vertex has between
    ``d`` and ``2d`` out-neighbors among ``b_vertices``.
    """

    graph: DirectedGraph
    concept: Concept
    a_vertices: tuple[int, ...]
    b_vertices: tuple[int, ...]
    d: int
    eps: float

    @property
    def k(self) -> int:
        return len(self.a_vertices)

    @property
    def p_b(self) -> float:
        return 1.0 / (self.d * self.k + len(self.b_vertices))

    @property
    def p_a(self) -> float:
        return self.d * self.p_b

    @property
    def base_distribution(self) -> Distribution:
        weights = [0.0] * self.graph.n
        for x in self.a_vertices:
            weights[x] = self.p_a
        for z in self.b_vertices:
            weights[z] = self.p_b
        return Distribution(weights)

    def to_json(self) -> str:
        doc = {
            "family": "bichromatic",
            "graph": json.loads(graph_to_json(self.graph)),
            "concept": list(self.concept.labels),
            "a_vertices": list(self.a_vertices),
            "b_vertices": list(self.b_vertices),
            "d": self.d,
            "eps": self.eps,
            "p_a": self.p_a,
            "p_b": self.p_b,
        }
        return json.dumps(doc, separators=(", ", ": "))


def gen_bichromatic_instance(
    g: DirectedGraph,
    c: Concept,
    eps: float,
    budget: int | None = None,
) -> BichromaticInstance:
    """Refine a maximum bichromatic independent set into a perturbable core.

    Steps: take the majority-label side of the witness (ties keep label 1);
    map each member to its smallest oppositely labeled out-neighbor; bucket
    members by the dyadic range of their degree into that image (largest
    bucket wins, ties to the smaller range); keep the image vertices
    adjacent to the bucket; drop the largest member if the bucket is odd.

    Raises ValueError naming the failing condition when ``eps`` is outside
    ``(0, 1/4)`` or fewer than 2 vertices survive the refinement.
    """
    if not (0.0 < eps < 0.25):
        raise ValueError(f"eps must lie in (0, 1/4), got {eps}")
    size, witness = alpha2_concept(g, c, budget)
    if size < 2:
        raise ValueError(f"bichromatic independence number is {size}, need at least 2")
    members = sorted(witness)
    ones = sum(1 for x in members if c(x) == 1)
    majority = 1 if 2 * ones >= len(members) else 0
    a_major = [x for x in members if c(x) == majority]

    image = set()
    for x in a_major:
        opposite = [u for u in g.out_neighbors(x) if c(u) != c(x)]
        image.add(min(opposite))
    b_all = frozenset(image)

    buckets: dict[int, list[int]] = {}
    for x in a_major:
        deg = len(g.out_neighbors(x) & b_all)
        j = deg.bit_length() - 1
        buckets.setdefault(j, []).append(x)
    best_j = max(buckets, key=lambda j: (len(buckets[j]), -j))
    a_bucket = sorted(buckets[best_j])
    d = 1 << best_j

    b_near = set()
    for x in a_bucket:
        b_near |= g.out_neighbors(x) & b_all
    if len(a_bucket) % 2 == 1:
        a_bucket = a_bucket[:-1]
    if len(a_bucket) < 2:
        raise ValueError(
            "refinement left fewer than 2 anchor vertices; "
            "the bichromatic witness is too unbalanced"
        )
    return BichromaticInstance(
        graph=g,
        concept=c,
        a_vertices=tuple(a_bucket),
        b_vertices=tuple(sorted(b_near)),
        d=d,
        eps=eps,
    )


def _check_sign_string(inst: BichromaticInstance, signs) -> tuple[int, ...]:
    s = tuple(int(x) for x in signs)
    if len(s) != inst.k:
        raise ValueError(f"sign string length {len(s)} != K = {inst.k}")
    if any(x not in (-1, 1) for x in s):
        raise ValueError("sign entries must be +1 or -1")
    if sum(s) != 0:
        raise ValueError("sign string must sum to zero")
    return s


def perturbed_distribution(inst: BichromaticInstance, signs) -> Distribution:
    """Tilt each anchor weight by ``+/- sqrt(eps)``; image weights unchanged.

    The signs sum to zero, so the total mass stays 1 and the result is a
    valid distribution with the same support as the base.
    """
    s = _check_sign_string(inst, signs)
    root = math.sqrt(inst.eps)
    weights = [0.0] * inst.graph.n
    for x, sign in zip(inst.a_vertices, s):
        weights[x] = inst.p_a * (1.0 + sign * root)
    for z in inst.b_vertices:
        weights[z] = inst.p_b
    return Distribution(weights)


def sample_sign_string(k: int, seed: int) -> tuple[int, ...]:
    """Uniform zero-sum string of ``k`` signs (``k`` even)."""
    if k < 2 or k % 2 != 0:
        raise ValueError(f"need an even K >= 2, got {k}")
    base = [1] * (k // 2) + [-1] * (k // 2)
    perm = philox(seed).permutation(base)
    return tuple(int(x) for x in perm)
