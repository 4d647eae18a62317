"""Combinatorial complexity parameters of a (graph, concept class) pair.

Two quantities control learnability of neighborhood averages:

* the shattered independence number: the size of a largest independent set
  that the class shatters;
* the bichromatic independence number: over concepts ``c``, the size of a
  largest independent set whose members each have an out-neighbor labeled
  oppositely by ``c``.

Both searches are exact, budgeted, and deterministic.  Ties among maximum
witnesses are broken toward the lexicographically smallest vertex set, and
class-level searches take the first maximizing concept in enumeration
order.
"""

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

from .concepts import Concept, ConceptClass, FullClass, shatters
from .errors import BudgetExceededError
from .graphs import (
    DirectedGraph,
    default_budget,
    independence_number,
    induced_subgraph,
    is_independent,
)


def _mask_to_tuple(mask: int) -> tuple[int, ...]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def _lexmin_max_feasible(
    n: int,
    conflict: Sequence[int] | None,
    feasible: Callable[[tuple[int, ...]], bool],
    budget: int,
    cap: int | None = None,
    target: int | None = None,
) -> tuple[int, frozenset]:
    """Largest feasible vertex set under a downward-closed predicate.

    Depth-first search over ascending vertex indices, include branch first,
    with the count bound ``|current| + |available| <= best`` for pruning.
    Because leaves are reached in lexicographic order and no set larger
    than the incumbent is ever pruned, the first maximum-size set found is
    the lexicographically smallest one.

    ``conflict`` (optional per-vertex bitmasks) restricts candidates to
    non-adjacent vertices so ``feasible`` never needs to re-check
    independence.  ``budget`` counts include attempts.  ``target``, when
    given, stops the search at the first set of that size.
    """
    best = 0
    best_mask = 0
    spent = 0
    stack: list[tuple[int, int]] = [(0, (1 << n) - 1)]
    while stack:
        cur, avail = stack.pop()
        size = cur.bit_count()
        if size > best:
            best, best_mask = size, cur
            if target is not None and best >= target:
                return best, frozenset(_mask_to_tuple(best_mask))
        if not avail or size + avail.bit_count() <= best:
            continue
        if cap is not None and size >= cap:
            continue
        v = (avail & -avail).bit_length() - 1
        bit = 1 << v
        # Exclude branch goes on the stack first so the include branch,
        # which extends the lexicographically earlier sets, is popped first.
        stack.append((cur, avail & ~bit))
        spent += 1
        if spent > budget:
            raise BudgetExceededError(
                f"parameter search exceeded budget of {budget} nodes",
                best_size=best,
                witness=frozenset(_mask_to_tuple(best_mask)),
            )
        new = cur | bit
        if feasible(_mask_to_tuple(new)):
            new_avail = avail & ~bit
            if conflict is not None:
                new_avail &= ~conflict[v]
            stack.append((new, new_avail))
    return best, frozenset(_mask_to_tuple(best_mask))


def _conflicts(g: DirectedGraph) -> list[int]:
    masks = [0] * g.n
    for u, v in g.edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    return masks


def bichromatic_vertices(g: DirectedGraph, c: Concept) -> frozenset:
    """Vertices with at least one oppositely labeled out-neighbor."""
    if c.n != g.n:
        raise ValueError("concept and graph domain sizes differ")
    return frozenset(
        x for x in range(g.n) if any(c(u) != c(x) for u in g.out_neighbors(x))
    )


def _lexmin_independent(
    g: DirectedGraph, target: int, budget: int
) -> tuple[int, frozenset]:
    """Lexicographically smallest independent set of a known maximum size."""
    return _lexmin_max_feasible(
        g.n, _conflicts(g), lambda s: True, budget, target=target
    )


def alpha1(
    g: DirectedGraph, cc: ConceptClass, budget: int | None = None
) -> tuple[int, frozenset]:
    """Largest independent set shattered by the class, with witness.

    The budget bounds the number of branch nodes; on exhaustion a
    :class:`BudgetExceededError` carries the best shattered independent
    set found so far.
    """
    if cc.n != g.n:
        raise ValueError("class and graph domain sizes differ")
    if budget is None:
        budget = default_budget()
    if isinstance(cc, FullClass):
        # The full class shatters everything, so this is the plain
        # independence number.
        size, _ = independence_number(g, budget)
        if size == 0:
            return 0, frozenset()
        return _lexmin_independent(g, size, budget)
    # A set of size k needs 2^k distinct restriction patterns.
    cap = cc.size.bit_length() - 1
    return _lexmin_max_feasible(
        g.n,
        _conflicts(g),
        lambda s: shatters(cc, s),
        budget,
        cap=cap,
    )


def alpha2_concept(
    g: DirectedGraph, c: Concept, budget: int | None = None
) -> tuple[int, frozenset]:
    """Largest independent set of bichromatic vertices for one concept.

    Equals the independence number of the subgraph induced on the
    bichromatic vertices.  The budget applies to each internal search.
    """
    if budget is None:
        budget = default_budget()
    marked = bichromatic_vertices(g, c)
    sub, old_of_new = induced_subgraph(g, marked)
    size, _ = independence_number(sub, budget)
    if size == 0:
        return 0, frozenset()
    # Second pass for the lexicographically smallest maximum witness: the
    # ascending include-first search returns it as the first set of
    # optimal size it reaches.
    _, wit = _lexmin_max_feasible(
        sub.n, _conflicts(sub), lambda s: True, budget, target=size
    )
    return size, frozenset(old_of_new[v] for v in wit)


def alpha2_class(
    g: DirectedGraph, cc: ConceptClass, budget: int | None = None
) -> tuple[int, Concept | None, frozenset]:
    """Maximum of :func:`alpha2_concept` over the class.

    Returns ``(size, concept, witness)`` where ``concept`` is the first
    maximizer in enumeration order (None when the class has no bichromatic
    structure at all, i.e. the maximum is 0).
    """
    if cc.n != g.n:
        raise ValueError("class and graph domain sizes differ")
    if budget is None:
        budget = default_budget()
    if isinstance(cc, FullClass):
        return _alpha2_full_class(g, budget)
    best = 0
    best_concept: Concept | None = None
    best_wit: frozenset = frozenset()
    for c in cc.members():
        size, wit = alpha2_concept(g, c, budget)
        if size > best:
            best, best_concept, best_wit = size, c, wit
    return best, best_concept, best_wit


def _alpha2_full_class(
    g: DirectedGraph, budget: int
) -> tuple[int, Concept | None, frozenset]:
    """Closed form over all labelings, bypassing concept enumeration.

    Any independent set of vertices with out-degree at least 1 can be made
    all-bichromatic: label the set 0 and everything else 1 (independence
    puts every out-neighbor outside the set).  Conversely a bichromatic
    vertex needs an out-neighbor, so the maximum over labelings is exactly
    the independence number over positive-out-degree vertices.  The
    returned concept realizes the witness but is not the enumeration-first
    maximizer, which would take 2^n searches to identify.
    """
    eligible = [v for v in range(g.n) if g.out_neighbors(v)]
    sub, old_of_new = induced_subgraph(g, eligible)
    size, _ = independence_number(sub, budget)
    if size == 0:
        return 0, None, frozenset()
    _, wit_sub = _lexmin_independent(sub, size, budget)
    witness = frozenset(old_of_new[v] for v in wit_sub)
    labels = tuple(0 if v in witness else 1 for v in range(g.n))
    return size, Concept(labels), witness


@dataclass(frozen=True)
class FamilyParams:
    alpha1: int
    alpha1_witness: frozenset
    alpha2: int
    alpha2_pair_index: int | None
    alpha2_witness: frozenset


def family_params(
    pairs: Sequence[tuple[DirectedGraph, Concept]], budget: int | None = None
) -> FamilyParams:
    """Parameters of a family of (graph, concept) pairs on a shared domain.

    The family-level shattered independence number counts only patterns
    contributed by pairs whose graph leaves the candidate set independent;
    the bichromatic number is the maximum over pairs.
    """
    if not pairs:
        raise ValueError("need at least one (graph, concept) pair")
    n = pairs[0][0].n
    for g, c in pairs:
        if g.n != n or c.n != n:
            raise ValueError("all pairs must share a domain size")
    if budget is None:
        budget = default_budget()

    def family_shatters(s: tuple[int, ...]) -> bool:
        needed = 1 << len(s)
        patterns: set[tuple[int, ...]] = set()
        for g, c in pairs:
            if is_independent(g, s):
                patterns.add(tuple(c(v) for v in s))
                if len(patterns) == needed:
                    return True
        return False

    cap = len(pairs).bit_length() - 1
    a1, a1_wit = _lexmin_max_feasible(n, None, family_shatters, budget, cap=cap)

    a2 = 0
    a2_idx: int | None = None
    a2_wit: frozenset = frozenset()
    for i, (g, c) in enumerate(pairs):
        size, wit = alpha2_concept(g, c, budget)
        if size > a2:
            a2, a2_idx, a2_wit = size, i, wit
    return FamilyParams(a1, a1_wit, a2, a2_idx, a2_wit)


def theoretical_sample_bound(
    alpha1_value: int,
    alpha2_value: int,
    eps: float,
    delta: float,
    c0: float = 8.0,
) -> int:
    """Sample size sufficient for accuracy ``eps`` at confidence ``delta``.

    ``ceil(c0 * (a1 + a2 * max(1, ln(1/eps))) / eps)``, clamped to at least
    1, times the confidence amplification factor ``ceil(23 * ln(1/delta))``.
    """
    if alpha1_value < 0 or alpha2_value < 0:
        raise ValueError("parameters must be non-negative")
    if not (0 < eps < 1) or not (0 < delta < 1):
        raise ValueError("eps and delta must lie in (0, 1)")
    if c0 <= 0:
        raise ValueError("c0 must be positive")
    log_term = max(1.0, math.log(1.0 / eps))
    base = c0 * (alpha1_value + alpha2_value * log_term) / eps
    complexity_factor = max(1, math.ceil(base))
    confidence_factor = max(1, math.ceil(23.0 * math.log(1.0 / delta)))
    return complexity_factor * confidence_factor


@dataclass(frozen=True)
class ParamReport:
    """All parameters of one instance, with exactness flags.

    When a search runs out of budget the reported value is the best lower
    bound found and the matching ``*_exact`` flag is False.
    """

    n: int
    alpha: int
    alpha_exact: bool
    alpha_witness: tuple[int, ...]
    alpha1: int
    alpha1_exact: bool
    alpha1_witness: tuple[int, ...]
    alpha2: int
    alpha2_exact: bool
    alpha2_witness: tuple[int, ...]
    alpha2_concept: tuple[int, ...] | None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "alpha": {
                "value": self.alpha,
                "exact": self.alpha_exact,
                "witness": list(self.alpha_witness),
            },
            "alpha1": {
                "value": self.alpha1,
                "exact": self.alpha1_exact,
                "witness": list(self.alpha1_witness),
            },
            "alpha2": {
                "value": self.alpha2,
                "exact": self.alpha2_exact,
                "witness": list(self.alpha2_witness),
                "concept": None
                if self.alpha2_concept is None
                else list(self.alpha2_concept),
            },
        }


def compute_param_report(
    g: DirectedGraph, cc: ConceptClass, budget: int | None = None
) -> ParamReport:
    """Run all three parameter searches, downgrading to bounds on budget."""
    if budget is None:
        budget = default_budget()

    def run(search):
        try:
            return (*search(), True)
        except BudgetExceededError as exc:
            return exc.best_size, exc.witness, False

    a_size, a_wit, a_exact = run(lambda: independence_number(g, budget))
    a1_size, a1_wit, a1_exact = run(lambda: alpha1(g, cc, budget))
    try:
        a2_size, a2_concept, a2_wit = alpha2_class(g, cc, budget)
        a2_exact = True
    except BudgetExceededError as exc:
        a2_size, a2_concept, a2_wit, a2_exact = exc.best_size, None, exc.witness, False
    return ParamReport(
        n=g.n,
        alpha=a_size,
        alpha_exact=a_exact,
        alpha_witness=tuple(sorted(a_wit)),
        alpha1=a1_size,
        alpha1_exact=a1_exact,
        alpha1_witness=tuple(sorted(a1_wit)),
        alpha2=a2_size,
        alpha2_exact=a2_exact,
        alpha2_witness=tuple(sorted(a2_wit)),
        alpha2_concept=None if a2_concept is None else a2_concept.labels,
    )
