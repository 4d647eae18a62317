"""Distributions on vertices, samples, and the neighborhood-average target.

The regression target of a concept ``c`` under a distribution ``D`` at a
vertex ``x`` is the conditional average of ``c`` over the closed
out-neighborhood of ``x``:

    target(x) = sum(D(u) * c(u) for u in N[x]) / sum(D(u) for u in N[x])

Risk is the squared distance to that target, averaged over the test point:
``risk(h) = sum(D(x) * (h(x) - target(x))**2)``.  Both quantities are
accumulated with ``math.fsum`` in a fixed vertex order, so identical-term
sums (for instance a monochromatic neighborhood) compare exactly.
"""

import json
import math
from collections.abc import Callable, Iterable, Sequence

import numpy as np

from .concepts import Concept
from .errors import ConfigError, UndefinedConditionalError
from .graphs import DirectedGraph
from .rng import philox

LOAD_TOLERANCE = 1e-9

Predictor = Callable[[int], float]


class Distribution:
    """Probability weights on vertices ``0 .. n-1``.

    The constructor requires the weights to sum to 1 within ``1e-9`` and
    then renormalizes exactly once; use :meth:`normalized` to build from an
    arbitrary non-negative vector.
    """

    __slots__ = ("weights", "_cum")

    def __init__(self, weights: Sequence[float]):
        w = [float(x) for x in weights]
        if any(x < 0 or not math.isfinite(x) for x in w):
            raise ValueError("weights must be finite and non-negative")
        total = math.fsum(w)
        if abs(total - 1.0) > LOAD_TOLERANCE:
            raise ValueError(
                f"weights must sum to 1 within {LOAD_TOLERANCE}, got {total!r}"
            )
        self.weights = tuple(x / total for x in w)
        self._cum = None

    @classmethod
    def normalized(cls, weights: Sequence[float]) -> "Distribution":
        """Scale an arbitrary non-negative vector to total mass 1."""
        w = [float(x) for x in weights]
        if any(x < 0 or not math.isfinite(x) for x in w):
            raise ValueError("weights must be finite and non-negative")
        total = math.fsum(w)
        if total <= 0:
            raise ValueError("total weight must be positive")
        return cls([x / total for x in w])

    @classmethod
    def uniform(cls, n: int) -> "Distribution":
        if n <= 0:
            raise ValueError("uniform distribution needs n >= 1")
        return cls([1.0 / n] * n)

    @classmethod
    def point_mass(cls, n: int, v: int) -> "Distribution":
        if not (0 <= v < n):
            raise ValueError(f"vertex {v} out of range for n={n}")
        return cls([1.0 if u == v else 0.0 for u in range(n)])

    @property
    def n(self) -> int:
        return len(self.weights)

    def weight(self, v: int) -> float:
        return self.weights[v]

    def mass(self, vertices: Iterable[int]) -> float:
        """Total weight of a vertex set (fsum, ascending vertex order)."""
        return math.fsum(self.weights[v] for v in sorted(set(vertices)))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(v for v, w in enumerate(self.weights) if w > 0)

    def _cumulative(self) -> np.ndarray:
        if self._cum is None:
            self._cum = np.cumsum(np.asarray(self.weights, dtype=float))
        return self._cum


class LabeledSample:
    """Ordered multiset of (vertex, label) pairs with consistent labels."""

    __slots__ = ("items", "_count", "_ones", "_distinct")

    def __init__(self, items: Iterable[tuple[int, int]]):
        pairs = []
        count: dict[int, int] = {}
        ones: dict[int, int] = {}
        label_of: dict[int, int] = {}
        for v, lab in items:
            v = int(v)
            lab = int(lab)
            if v < 0:
                raise ValueError(f"vertex id must be non-negative, got {v}")
            if lab not in (0, 1):
                raise ValueError(f"label must be 0 or 1, got {lab}")
            if label_of.setdefault(v, lab) != lab:
                raise ValueError(f"vertex {v} appears with both labels")
            pairs.append((v, lab))
            count[v] = count.get(v, 0) + 1
            ones[v] = ones.get(v, 0) + lab
        self.items = tuple(pairs)
        self._count = count
        self._ones = ones
        self._distinct = tuple(sorted(count))

    def __len__(self) -> int:
        return len(self.items)

    @property
    def distinct(self) -> tuple[int, ...]:
        """Distinct sampled vertices, ascending."""
        return self._distinct

    def count(self, v: int) -> int:
        return self._count.get(v, 0)

    def ones(self, v: int) -> int:
        return self._ones.get(v, 0)

    def label(self, v: int) -> int | None:
        """Observed label of ``v``, or None if unsampled."""
        if v not in self._count:
            return None
        return 1 if self._ones[v] > 0 else 0

    def blocks(self, k: int) -> list["LabeledSample"]:
        """Split into ``k`` contiguous equal blocks, discarding the remainder."""
        if k < 1:
            raise ValueError("need k >= 1 blocks")
        size = len(self.items) // k
        if size == 0:
            raise ValueError(f"sample of size {len(self.items)} cannot fill {k} blocks")
        return [
            LabeledSample(self.items[i * size : (i + 1) * size]) for i in range(k)
        ]

    def to_csv(self) -> str:
        lines = ["vertex,label"]
        lines += [f"{v},{lab}" for v, lab in self.items]
        return "\n".join(lines) + "\n"


def conditional_average(
    g: DirectedGraph, d: Distribution, c: Concept, x: int
) -> float:
    """Average label of ``c`` over the closed out-neighborhood of ``x``.

    Raises :class:`UndefinedConditionalError` when the neighborhood has
    zero mass.  Numerator and denominator run over the same vertices in the
    same order, so a monochromatic neighborhood returns exactly 0.0 or 1.0.
    """
    hood = sorted(g.closed_out_neighborhood(x))
    den = math.fsum(d.weight(u) for u in hood)
    if den <= 0.0:
        raise UndefinedConditionalError(
            f"closed neighborhood of vertex {x} has zero mass"
        )
    num = math.fsum(d.weight(u) for u in hood if c(u))
    return num / den


def pointwise_loss(h: Predictor, y: float, x: int) -> float:
    """Squared error of the prediction at ``x`` against target value ``y``."""
    if not (0.0 <= y <= 1.0):
        raise ValueError(f"target value must lie in [0, 1], got {y!r}")
    v = h(x)
    if not (0.0 <= v <= 1.0):
        raise ValueError(f"prediction at {x} must lie in [0, 1], got {v!r}")
    return (y - v) ** 2


def risk(g: DirectedGraph, d: Distribution, c: Concept, h: Predictor) -> float:
    """Expected squared distance between ``h`` and the neighborhood target.

    Zero-weight vertices are skipped, so the target is evaluated only where
    it is defined (a positive-weight vertex always has positive
    neighborhood mass because it belongs to its own neighborhood).
    """
    terms = []
    for x in d.support:
        y = conditional_average(g, d, c, x)
        terms.append(d.weight(x) * pointwise_loss(h, y, x))
    return math.fsum(terms)


def draw_sample(d: Distribution, c: Concept, m: int, seed: int) -> LabeledSample:
    """Draw ``m`` labeled points i.i.d. from ``d`` by inverse CDF.

    Uniform variates are scaled by the total cumulative mass before the
    ``searchsorted`` lookup, so zero-weight vertices are never selected and
    a point mass yields ``m`` copies of its vertex.
    """
    if m < 0:
        raise ValueError("sample size must be non-negative")
    if c.n != d.n:
        raise ValueError("concept and distribution domain sizes differ")
    cum = d._cumulative()
    gen = philox(seed)
    u = gen.random(m) * cum[-1]
    idx = np.searchsorted(cum, u, side="right")
    return LabeledSample((int(v), c(int(v))) for v in idx)


def degree_mass_sums(g: DirectedGraph, d: Distribution) -> tuple[float, float]:
    """The two sides of the weighted degree identity.

    Returns ``(sum_v d(v) * d(out(v)), sum_v d(v) * d(in(v)))``; both equal
    the total edge weight ``sum_(u,v) d(u) * d(v)`` so they agree up to
    floating-point rounding.
    """
    out_total = math.fsum(
        d.weight(v) * math.fsum(d.weight(u) for u in sorted(g.out_neighbors(v)))
        for v in range(g.n)
    )
    in_total = math.fsum(
        d.weight(v) * math.fsum(d.weight(u) for u in sorted(g.in_neighbors(v)))
        for v in range(g.n)
    )
    return out_total, in_total


def _balanced_in_residual(
    g: DirectedGraph, d: Distribution, residual: set[int]
) -> int:
    for v in sorted(residual):
        out_m = math.fsum(d.weight(u) for u in sorted(g.out_neighbors(v) & residual))
        in_m = math.fsum(d.weight(u) for u in sorted(g.in_neighbors(v) & residual))
        if out_m >= in_m:
            return v
    raise RuntimeError("no balanced vertex found; this should be impossible")


def balanced_vertex(g: DirectedGraph, d: Distribution) -> int:
    """Lowest-index vertex whose out-neighborhood outweighs its in-neighborhood.

    Existence is guaranteed: summing ``d(v) * (d(out(v)) - d(in(v)))`` over
    all vertices gives zero, so some vertex has a non-negative difference.
    """
    if g.n == 0:
        raise ValueError("graph has no vertices")
    return _balanced_in_residual(g, d, set(range(g.n)))


def light_mass(
    g: DirectedGraph, d: Distribution, lam: float
) -> tuple[float, frozenset]:
    """Mass and membership of ``{v : d(N[v]) <= lam}`` (non-strict)."""
    if lam < 0:
        raise ValueError("mass threshold must be non-negative")
    light = frozenset(
        v
        for v in range(g.n)
        if math.fsum(d.weight(u) for u in sorted(g.closed_out_neighborhood(v))) <= lam
    )
    return d.mass(light), light


def light_removal_witness(
    g: DirectedGraph, d: Distribution, lam: float
) -> list[tuple[int, frozenset]]:
    """Peeling certificate that light vertices carry little total mass.

    Starting from the light set, each round picks the lowest-index vertex
    of the residual whose residual out-mass is at least its residual
    in-mass, then removes it along with its residual neighbors (both
    directions).  The picked vertices form an independent set of the
    original graph and each round removes mass at most ``2 * lam``, which
    bounds the light mass by ``2 * lam * independence_number``.
    """
    _, light = light_mass(g, d, lam)
    residual = set(light)
    rounds: list[tuple[int, frozenset]] = []
    while residual:
        v = _balanced_in_residual(g, d, residual)
        removed = ({v} | g.out_neighbors(v) | g.in_neighbors(v)) & residual
        rounds.append((v, frozenset(removed)))
        residual -= removed
    return rounds


def empirical_mean_sq_error(mu: float, m: int) -> float:
    """Expected squared error of a mean of ``m`` Bernoulli(mu) draws."""
    if not (0.0 <= mu <= 1.0):
        raise ValueError(f"mu must lie in [0, 1], got {mu!r}")
    if m < 1:
        raise ValueError("need at least one draw")
    return mu * (1.0 - mu) / m


def distribution_from_json(text: str) -> Distribution:
    """Parse ``{"weights": [...]}``; weights are normalized at load."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid distribution JSON: {exc.msg}") from exc
    if not isinstance(doc, dict) or "weights" not in doc:
        raise ConfigError('distribution JSON must be an object with "weights"')
    try:
        return Distribution.normalized(doc["weights"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad weights: {exc}") from exc


def load_distribution(path: str) -> Distribution:
    with open(path, encoding="utf-8") as fh:
        return distribution_from_json(fh.read())


def distribution_to_json(d: Distribution) -> str:
    return json.dumps({"weights": list(d.weights)}, separators=(", ", ": "))
