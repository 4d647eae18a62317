"""Finite directed graphs and independence-number search.

Graphs are simple and directed: no self-loops, no duplicate edges, but a
pair of anti-parallel edges ``(u, v)`` and ``(v, u)`` is allowed and is how
undirected ("bidirected") structure is encoded.  Vertices are the integers
``0 .. n-1``.

Independence here always means: no edge between two of the vertices in
*either* direction.  The exact independence number is computed by
branch-and-bound with an explicit node budget so callers can bound their
worst case; running out of budget raises :class:`BudgetExceededError`
carrying the best set found so far.
"""

import json
import os
import re
from collections.abc import Iterable

from .errors import BudgetExceededError, GraphFormatError
from .rng import philox

DEFAULT_NODE_BUDGET = 2_000_000
_ENV_BUDGET = "CONDAVG_BUDGET"


def default_budget() -> int:
    """Node budget for exact searches; the CONDAVG_BUDGET env var overrides."""
    raw = os.environ.get(_ENV_BUDGET)
    if raw is None:
        return DEFAULT_NODE_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{_ENV_BUDGET} must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise ValueError(f"{_ENV_BUDGET} must be positive, got {value}")
    return value


class DirectedGraph:
    """Immutable directed graph on vertices ``0 .. n-1``.

    Parameters
    ----------
    n : int
        Number of vertices (non-negative).
    edges : iterable of (int, int)
        Directed edges ``(u, v)`` with ``u != v``.  Duplicates are rejected.
    """

    __slots__ = ("n", "_edge_set", "_edges_sorted", "_out", "_in")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError(f"vertex count must be non-negative, got {n}")
        self.n = n
        seen: set[tuple[int, int]] = set()
        out: list[set[int]] = [set() for _ in range(n)]
        into: list[set[int]] = [set() for _ in range(n)]
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop ({u}, {v}) not allowed")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            out[u].add(v)
            into[v].add(u)
        self._edge_set = frozenset(seen)
        self._edges_sorted = tuple(sorted(seen))
        self._out = tuple(frozenset(s) for s in out)
        self._in = tuple(frozenset(s) for s in into)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """All edges in sorted order."""
        return self._edges_sorted

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._edge_set

    def out_neighbors(self, v: int) -> frozenset:
        """Open out-neighborhood ``{u : (v, u) is an edge}``."""
        return self._out[v]

    def in_neighbors(self, v: int) -> frozenset:
        """Open in-neighborhood ``{u : (u, v) is an edge}``."""
        return self._in[v]

    def closed_out_neighborhood(self, v: int) -> frozenset:
        """``{v}`` together with the out-neighbors of ``v``."""
        return self._out[v] | {v}

    def total_degree(self, v: int) -> int:
        return len(self._out[v]) + len(self._in[v])

    def __eq__(self, other) -> bool:
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return self.n == other.n and self._edge_set == other._edge_set

    def __hash__(self) -> int:
        return hash((self.n, self._edge_set))

    def __repr__(self) -> str:
        return f"DirectedGraph(n={self.n}, edges={len(self._edge_set)})"


def is_independent(g: DirectedGraph, s: Iterable[int]) -> bool:
    """True when no edge joins two members of ``s`` in either direction."""
    members = frozenset(s)
    for v in members:
        if not (0 <= v < g.n):
            raise ValueError(f"vertex {v} out of range for n={g.n}")
    # Checking every member's out-neighborhood covers both directions: an
    # edge (u, v) inside the set is seen while scanning u.
    for v in members:
        if g.out_neighbors(v) & members:
            return False
    return True


def _conflict_masks(g: DirectedGraph) -> list[int]:
    """Per-vertex bitmask of all vertices adjacent in either direction."""
    masks = [0] * g.n
    for u, v in g.edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    return masks


def _mask_to_set(mask: int) -> frozenset:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return frozenset(out)


def _greedy_mask(order: list[int], conflict: list[int], allowed: int) -> int:
    """Greedy independent set (as a bitmask) taking vertices in ``order``."""
    chosen = 0
    cand = allowed
    for v in order:
        bit = 1 << v
        if cand & bit:
            chosen |= bit
            cand &= ~(conflict[v] | bit)
    return chosen


def _branch_and_bound(
    conflict: list[int],
    order: list[int],
    forced: int,
    cand: int,
    budget: int,
    incumbent: int = 0,
    target: int | None = None,
) -> tuple[int, int]:
    """Maximize an independent set extending ``forced`` inside ``cand``.

    ``order`` fixes the branching vertex choice (first listed vertex present
    in the candidate mask), which makes the search, and hence the returned
    witness, deterministic.  ``budget`` counts node expansions.  When
    ``target`` is given the search stops as soon as a set of that size is
    found.  Returns ``(best_size, best_mask)``.
    """
    best_mask = incumbent if incumbent.bit_count() >= forced.bit_count() else forced
    best = best_mask.bit_count()
    if target is not None and best >= target:
        return best, best_mask
    spent = 0
    stack = [(forced, cand)]
    while stack:
        cur, avail = stack.pop()
        size = cur.bit_count()
        if size > best:
            best, best_mask = size, cur
            if target is not None and best >= target:
                return best, best_mask
        if not avail or size + avail.bit_count() <= best:
            continue
        spent += 1
        if spent > budget:
            raise BudgetExceededError(
                f"independence search exceeded budget of {budget} nodes",
                best_size=best,
                witness=_mask_to_set(best_mask),
            )
        for v in order:
            bit = 1 << v
            if avail & bit:
                # LIFO: push the exclude branch first so include is explored
                # first, which reaches large sets (and cutoffs) early.
                stack.append((cur, avail & ~bit))
                stack.append((cur | bit, avail & ~(conflict[v] | bit)))
                break
    return best, best_mask


def _degree_order(g: DirectedGraph) -> list[int]:
    return sorted(range(g.n), key=lambda v: (-g.total_degree(v), v))


def independence_number(
    g: DirectedGraph, budget: int | None = None
) -> tuple[int, frozenset]:
    """Exact independence number with a certifying witness.

    Branch-and-bound over vertices ordered by decreasing total degree, with
    a greedy set as the starting incumbent.  ``budget`` bounds the number of
    node expansions (default :func:`default_budget`); exceeding it raises
    :class:`BudgetExceededError` whose ``best_size``/``witness`` give a
    valid lower bound.
    """
    if budget is None:
        budget = default_budget()
    if g.n == 0:
        return 0, frozenset()
    conflict = _conflict_masks(g)
    order = _degree_order(g)
    all_mask = (1 << g.n) - 1
    # Low-degree-first greedy is a strong incumbent and costs one pass.
    incumbent = _greedy_mask(list(reversed(order)), conflict, all_mask)
    size, mask = _branch_and_bound(conflict, order, 0, all_mask, budget, incumbent)
    return size, _mask_to_set(mask)


def max_independent_extension(
    g: DirectedGraph,
    forced: Iterable[int],
    allowed: Iterable[int],
    budget: int | None = None,
    target: int | None = None,
) -> tuple[int, frozenset]:
    """Largest independent set containing ``forced`` within ``forced | allowed``.

    ``forced`` must itself be independent.  With ``target`` set, the search
    returns early once a set of that size is found, which makes repeated
    feasibility probes cheap.
    """
    if budget is None:
        budget = default_budget()
    forced_set = frozenset(forced)
    if not is_independent(g, forced_set):
        raise ValueError("forced set is not independent")
    conflict = _conflict_masks(g)
    forced_mask = 0
    for v in forced_set:
        forced_mask |= 1 << v
    cand = 0
    for v in allowed:
        if not (0 <= v < g.n):
            raise ValueError(f"vertex {v} out of range for n={g.n}")
        cand |= 1 << v
    cand &= ~forced_mask
    for v in forced_set:
        cand &= ~conflict[v]
    order = _degree_order(g)
    size, mask = _branch_and_bound(
        conflict, order, forced_mask, cand, budget, target=target
    )
    return size, _mask_to_set(mask)


def greedy_independent_set(g: DirectedGraph, seed: int) -> frozenset:
    """Maximal independent set grown in a seed-shuffled vertex order."""
    order = list(range(g.n))
    philox(seed).shuffle(order)
    conflict = _conflict_masks(g)
    chosen = _greedy_mask(order, conflict, (1 << g.n) - 1) if g.n else 0
    return _mask_to_set(chosen)


def isolated_vertices(g: DirectedGraph) -> frozenset:
    """Vertices with no incident edge in either direction."""
    return frozenset(v for v in range(g.n) if g.total_degree(v) == 0)


def induced_subgraph(
    g: DirectedGraph, s: Iterable[int]
) -> tuple[DirectedGraph, tuple[int, ...]]:
    """Subgraph induced on ``s``, relabeled to ``0 .. |s|-1``.

    Returns the subgraph together with the index map: entry ``i`` of the
    returned tuple is the original id of new vertex ``i``.  Original ids are
    taken in ascending order.
    """
    keep = sorted(set(s))
    for v in keep:
        if not (0 <= v < g.n):
            raise ValueError(f"vertex {v} out of range for n={g.n}")
    new_of_old = {old: new for new, old in enumerate(keep)}
    sub_edges = [
        (new_of_old[u], new_of_old[v])
        for (u, v) in g.edges
        if u in new_of_old and v in new_of_old
    ]
    return DirectedGraph(len(keep), sub_edges), tuple(keep)


# ---------------------------------------------------------------------------
# Named families
# ---------------------------------------------------------------------------


def edgeless_graph(n: int) -> DirectedGraph:
    return DirectedGraph(n, ())


def complete_bidirected_graph(n: int) -> DirectedGraph:
    edges = [(u, v) for u in range(n) for v in range(n) if u != v]
    return DirectedGraph(n, edges)


def tournament_graph(n: int) -> DirectedGraph:
    """Canonical tournament: one edge per pair, oriented low to high."""
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return DirectedGraph(n, edges)


def star_graph(leaves: int, bidirected: bool = True) -> DirectedGraph:
    """Star with root 0 and leaves ``1 .. leaves``."""
    if leaves < 0:
        raise ValueError("leaf count must be non-negative")
    edges = []
    for leaf in range(1, leaves + 1):
        edges.append((0, leaf))
        if bidirected:
            edges.append((leaf, 0))
    return DirectedGraph(leaves + 1, edges)


def path_graph(n: int) -> DirectedGraph:
    """Directed path 0 -> 1 -> ... -> n-1."""
    return DirectedGraph(n, [(i, i + 1) for i in range(n - 1)])


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

_PAIR_RE = re.compile(r"\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]")


def _edge_lines(text: str) -> list[int]:
    """1-based line number of each ``[u, v]`` pair literal, in order."""
    key = text.find('"edges"')
    start = key if key >= 0 else 0
    lines = []
    for match in _PAIR_RE.finditer(text, start):
        lines.append(text.count("\n", 0, match.start()) + 1)
    return lines


def graph_from_json(text: str) -> DirectedGraph:
    """Parse ``{"n": int, "edges": [[u, v], ...]}``.

    Self-loops, duplicate pairs, and out-of-range endpoints are rejected
    with the input line of the offending pair in the message.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
    if not isinstance(doc, dict):
        raise GraphFormatError("top level must be an object")
    if "n" not in doc or not isinstance(doc["n"], int) or isinstance(doc["n"], bool):
        raise GraphFormatError('missing or non-integer "n"')
    n = doc["n"]
    if n < 0:
        raise GraphFormatError(f'"n" must be non-negative, got {n}')
    raw_edges = doc.get("edges", [])
    if not isinstance(raw_edges, list):
        raise GraphFormatError('"edges" must be a list of [u, v] pairs')
    lines = _edge_lines(text)

    def line_of(i: int) -> int | None:
        return lines[i] if i < len(lines) and len(lines) == len(raw_edges) else None

    seen = set()
    edges = []
    for i, pair in enumerate(raw_edges):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in pair)
        ):
            raise GraphFormatError(
                f"edge #{i} must be a two-integer pair, got {pair!r}", line=line_of(i)
            )
        u, v = pair
        if u == v:
            raise GraphFormatError(f"self-loop ({u}, {v})", line=line_of(i))
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(
                f"edge ({u}, {v}) out of range for n={n}", line=line_of(i)
            )
        if (u, v) in seen:
            raise GraphFormatError(f"duplicate edge ({u}, {v})", line=line_of(i))
        seen.add((u, v))
        edges.append((u, v))
    return DirectedGraph(n, edges)


def load_graph(path: str) -> DirectedGraph:
    with open(path, encoding="utf-8") as fh:
        return graph_from_json(fh.read())


def graph_to_json(g: DirectedGraph) -> str:
    """Serialize with edges sorted, so equal graphs give identical bytes."""
    edges = [[u, v] for (u, v) in g.edges]
    return json.dumps({"n": g.n, "edges": edges}, separators=(", ", ": "))
