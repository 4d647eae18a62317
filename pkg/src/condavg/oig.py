"""One-inclusion prediction on pattern classes.

A pattern class is a non-empty, duplicate-free set of 0/1 rows of a common
length.  Its one-inclusion graph has the rows as vertices and an edge
between every two rows at Hamming distance exactly one, tagged with the
differing coordinate.

An orientation assigns each edge a head (one of its endpoints); the
out-degree of a row is the number of incident edges oriented away from it.
The orientation minimizing the maximum out-degree is found by binary
search over the out-degree cap, testing feasibility with a max-flow where
each edge must charge one of its endpoints and every row accepts at most
``cap`` charges.  Given a row observed on all but the last coordinate, the
predictor returns the last bit of the head of the edge between the two
consistent completions (or the unique completion when only one exists).

The leave-one-out mistake bound needs all coordinates to share one
orientation, so :func:`canonical_orientation` memoizes per pattern class
and every prediction path goes through it.
"""

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from collections.abc import Sequence

from .errors import EnumerationGuardError, RealizabilityError

PATTERN_GUARD = 1 << 20

Row = tuple[int, ...]


class PatternClass:
    """Duplicate-free rows of equal length, kept in lexicographic order."""

    __slots__ = ("length", "rows", "_index")

    def __init__(self, length: int, rows: Sequence[Sequence[int]]):
        if length < 0:
            raise ValueError("row length must be non-negative")
        clean = []
        for r in rows:
            row = tuple(int(b) for b in r)
            if len(row) != length:
                raise ValueError(f"row {row} does not have length {length}")
            if any(b not in (0, 1) for b in row):
                raise ValueError(f"row {row} has a non-binary entry")
            clean.append(row)
        if not clean:
            raise ValueError("pattern class must be non-empty")
        if len(set(clean)) != len(clean):
            raise ValueError("pattern class must be duplicate-free")
        if len(clean) > PATTERN_GUARD:
            raise EnumerationGuardError(
                f"pattern class with {len(clean)} rows exceeds guard {PATTERN_GUARD}"
            )
        self.length = length
        self.rows = tuple(sorted(clean))
        self._index = {row: i for i, row in enumerate(self.rows)}

    @classmethod
    def from_concepts(cls, explicit_class) -> "PatternClass":
        return cls(explicit_class.n, [c.labels for c in explicit_class.concepts])

    def index_of(self, row: Sequence[int]) -> int | None:
        return self._index.get(tuple(row))

    def __len__(self) -> int:
        return len(self.rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PatternClass):
            return NotImplemented
        return self.length == other.length and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.length, self.rows))

    def __repr__(self) -> str:
        return f"PatternClass(length={self.length}, rows={len(self.rows)})"


@dataclass(frozen=True)
class OneInclusionGraph:
    pc: PatternClass
    edges: tuple[tuple[int, int, int], ...]
    """Edges ``(i, j, coord)`` with ``i < j`` indices into ``pc.rows``."""

    def edge_lookup(self) -> dict[tuple[int, int], int]:
        return {(i, j): pos for pos, (i, j, _) in enumerate(self.edges)}

    def degree(self, v: int) -> int:
        return sum(1 for (i, j, _) in self.edges if v in (i, j))


def build_oig(pc: PatternClass) -> OneInclusionGraph:
    """Connect rows at Hamming distance one, tagging the differing coordinate."""
    edges = []
    for coord in range(pc.length):
        buckets: dict[tuple, list[int]] = {}
        for i, row in enumerate(pc.rows):
            key = row[:coord] + row[coord + 1 :]
            buckets.setdefault(key, []).append(i)
        for pair in buckets.values():
            if len(pair) == 2:
                i, j = pair
                edges.append((min(i, j), max(i, j), coord))
    edges.sort()
    return OneInclusionGraph(pc, tuple(edges))


@dataclass(frozen=True)
class Orientation:
    """Head row index per edge, aligned with ``OneInclusionGraph.edges``."""

    heads: tuple[int, ...]
    out_degrees: tuple[int, ...]
    max_out_degree: int


class _Dinic:
    """Deterministic max-flow; arc order follows insertion order."""

    def __init__(self, n: int):
        self.n = n
        self.to: list[int] = []
        self.cap: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(n)]

    def add(self, u: int, v: int, cap: int) -> int:
        arc = len(self.to)
        self.to.append(v)
        self.cap.append(cap)
        self.adj[u].append(arc)
        self.to.append(u)
        self.cap.append(0)
        self.adj[v].append(arc + 1)
        return arc

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        while True:
            level = [-1] * self.n
            level[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for arc in self.adj[u]:
                    v = self.to[arc]
                    if self.cap[arc] > 0 and level[v] < 0:
                        level[v] = level[u] + 1
                        queue.append(v)
            if level[t] < 0:
                return flow
            ptr = [0] * self.n

            def push(u: int, limit: int) -> int:
                if u == t:
                    return limit
                while ptr[u] < len(self.adj[u]):
                    arc = self.adj[u][ptr[u]]
                    v = self.to[arc]
                    if self.cap[arc] > 0 and level[v] == level[u] + 1:
                        got = push(v, min(limit, self.cap[arc]))
                        if got > 0:
                            self.cap[arc] -= got
                            self.cap[arc ^ 1] += got
                            return got
                    ptr[u] += 1
                return 0

            while True:
                got = push(s, 1 << 60)
                if got == 0:
                    break
                flow += got


def _feasible_orientation(
    oig: OneInclusionGraph, cap: int
) -> tuple[int, ...] | None:
    """Heads tuple achieving max out-degree <= cap, or None if impossible."""
    n_rows = len(oig.pc)
    n_edges = len(oig.edges)
    source = 0
    edge_base = 1
    row_base = 1 + n_edges
    sink = row_base + n_rows
    net = _Dinic(sink + 1)
    endpoint_arcs = []
    for pos, (i, j, _) in enumerate(oig.edges):
        net.add(source, edge_base + pos, 1)
        arc_i = net.add(edge_base + pos, row_base + i, 1)
        arc_j = net.add(edge_base + pos, row_base + j, 1)
        endpoint_arcs.append((arc_i, arc_j))
    for v in range(n_rows):
        net.add(row_base + v, sink, cap)
    if net.max_flow(source, sink) < n_edges:
        return None
    heads = []
    for pos, (i, j, _) in enumerate(oig.edges):
        arc_i, arc_j = endpoint_arcs[pos]
        # The saturated endpoint arc marks the charged endpoint (the tail);
        # the head is the other one.
        if net.cap[arc_i] == 0:
            heads.append(j)
        else:
            assert net.cap[arc_j] == 0
            heads.append(i)
    return tuple(heads)


def orient_min_max_outdegree(oig: OneInclusionGraph) -> tuple[Orientation, int]:
    """Orientation minimizing the maximum out-degree, and that optimum.

    Deterministic: the flow network is built in canonical edge order and
    augmented in a fixed order, so equal inputs give identical heads.
    """
    n_rows = len(oig.pc)
    if not oig.edges:
        zeros = (0,) * n_rows
        return Orientation(heads=(), out_degrees=zeros, max_out_degree=0), 0
    lo, hi = 1, max(oig.degree(v) for v in range(n_rows))
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible_orientation(oig, mid) is not None:
            hi = mid
        else:
            lo = mid + 1
    # Rebuild at exactly the optimum so the heads are independent of the
    # binary-search path (cap = max degree is always feasible).
    best = _feasible_orientation(oig, lo)
    assert best is not None
    out = [0] * n_rows
    for pos, (i, j, _) in enumerate(oig.edges):
        head = best[pos]
        tail = i if head == j else j
        out[tail] += 1
    max_out = max(out)
    return (
        Orientation(heads=best, out_degrees=tuple(out), max_out_degree=max_out),
        max_out,
    )


@lru_cache(maxsize=4096)
def canonical_orientation(pc: PatternClass) -> tuple[OneInclusionGraph, Orientation]:
    """Shared memoized orientation; all prediction paths must use this."""
    oig = build_oig(pc)
    orientation, _ = orient_min_max_outdegree(oig)
    return oig, orientation


def oig_predict(pc: PatternClass, observed: Sequence[int]) -> int:
    """Predict the last coordinate from the first ``length - 1``.

    With two consistent completions, returns the last bit of the head of
    their edge under the canonical orientation; with one, that row's last
    bit.  No consistent completion raises :class:`RealizabilityError`.
    """
    if pc.length < 1:
        raise ValueError("need at least one coordinate to predict")
    prefix = tuple(int(b) for b in observed)
    if len(prefix) != pc.length - 1:
        raise ValueError(
            f"observed prefix has length {len(prefix)}, expected {pc.length - 1}"
        )
    if any(b not in (0, 1) for b in prefix):
        raise ValueError("observed labels must be 0 or 1")
    matches = [i for i, row in enumerate(pc.rows) if row[:-1] == prefix]
    if not matches:
        raise RealizabilityError("no pattern extends the observed labels")
    if len(matches) == 1:
        return pc.rows[matches[0]][-1]
    assert len(matches) == 2, "rows differing off the last coordinate"
    oig, orientation = canonical_orientation(pc)
    i, j = matches
    pos = oig.edge_lookup()[(i, j)]
    return pc.rows[orientation.heads[pos]][-1]


def loo_error(pc: PatternClass, truth: Sequence[int]) -> Fraction:
    """Leave-one-out mistake rate of one-inclusion prediction on ``truth``.

    For each coordinate, the remaining bits are observed and the held-out
    bit is predicted with the single canonical orientation shared across
    coordinates; the result is the exact fraction of mistakes, which is at
    most ``max_out_degree / length``.
    """
    row = tuple(int(b) for b in truth)
    idx = pc.index_of(row)
    if idx is None:
        raise ValueError("truth row is not in the pattern class")
    if pc.length == 0:
        raise ValueError("need at least one coordinate")
    oig, orientation = canonical_orientation(pc)
    lookup = oig.edge_lookup()
    mistakes = 0
    for coord in range(pc.length):
        flipped = row[:coord] + (1 - row[coord],) + row[coord + 1 :]
        other = pc.index_of(flipped)
        if other is None:
            continue  # unique completion, always correct
        pos = lookup[(min(idx, other), max(idx, other))]
        if orientation.heads[pos] != idx:
            mistakes += 1
    return Fraction(mistakes, pc.length)
