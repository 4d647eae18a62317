"""Binary concepts and concept classes over a finite vertex domain.

A concept is a total 0/1 labeling of ``0 .. n-1``.  Classes come in four
kinds: an explicit list, the full class of all ``2^n`` labelings, a
singleton, and the threshold class on the line (``c_t(v) = 1`` iff
``v < t`` for ``t = 0 .. n``, enumerated by ascending ``t``).

Enumeration order is part of the contract because downstream tie-breaking
(first consistent concept wins) relies on it:

* explicit: constructor order;
* full: integer counting ``0 .. 2^n - 1`` with vertex 0 as the least
  significant bit (guarded, refuses ``n > 20``);
* singleton: its one member;
* thresholds: ``t`` ascending.
"""

import json
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

from .errors import ConfigError, EnumerationGuardError
from .graphs import DirectedGraph

FULL_CLASS_ENUMERATION_LIMIT = 20
SHATTER_SET_LIMIT = 30


@dataclass(frozen=True)
class Concept:
    """Total binary labeling; ``labels[v]`` is the label of vertex ``v``."""

    labels: tuple[int, ...]

    def __post_init__(self):
        clean = tuple(int(b) for b in self.labels)
        if any(b not in (0, 1) for b in clean):
            raise ValueError("concept labels must be 0 or 1")
        object.__setattr__(self, "labels", clean)

    @property
    def n(self) -> int:
        return len(self.labels)

    def __call__(self, v: int) -> int:
        return self.labels[v]

    def mask(self) -> int:
        """Labels packed into an int, vertex 0 at the least significant bit."""
        m = 0
        for v, b in enumerate(self.labels):
            m |= b << v
        return m


@dataclass(frozen=True)
class ExplicitClass:
    kind = "explicit"
    concepts: tuple[Concept, ...]

    def __post_init__(self):
        concepts = tuple(self.concepts)
        object.__setattr__(self, "concepts", concepts)
        if not concepts:
            raise ValueError("explicit class must be non-empty")
        n = concepts[0].n
        if any(c.n != n for c in concepts):
            raise ValueError("concepts must share a domain size")
        if len({c.labels for c in concepts}) != len(concepts):
            raise ValueError("explicit class must be duplicate-free")

    @property
    def n(self) -> int:
        return self.concepts[0].n

    @property
    def size(self) -> int:
        return len(self.concepts)

    def members(self) -> Iterator[Concept]:
        return iter(self.concepts)


@dataclass(frozen=True)
class FullClass:
    kind = "full"
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("domain size must be non-negative")

    @property
    def size(self) -> int:
        return 1 << self.n

    def members(self) -> Iterator[Concept]:
        if self.n > FULL_CLASS_ENUMERATION_LIMIT:
            raise EnumerationGuardError(
                f"refusing to enumerate 2^{self.n} concepts "
                f"(limit n <= {FULL_CLASS_ENUMERATION_LIMIT})"
            )
        for i in range(1 << self.n):
            yield Concept(tuple((i >> v) & 1 for v in range(self.n)))


@dataclass(frozen=True)
class SingletonClass:
    kind = "singleton"
    concept: Concept

    @property
    def n(self) -> int:
        return self.concept.n

    @property
    def size(self) -> int:
        return 1

    def members(self) -> Iterator[Concept]:
        yield self.concept


@dataclass(frozen=True)
class ThresholdClass:
    kind = "thresholds"
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("domain size must be non-negative")

    @property
    def size(self) -> int:
        return self.n + 1

    def members(self) -> Iterator[Concept]:
        for t in range(self.n + 1):
            yield Concept(tuple(1 if v < t else 0 for v in range(self.n)))


ConceptClass = ExplicitClass | FullClass | SingletonClass | ThresholdClass


def _check_subset(n: int, s: Sequence[int]) -> None:
    if len(set(s)) != len(s):
        raise ValueError("vertex subset must not repeat vertices")
    for v in s:
        if not (0 <= v < n):
            raise ValueError(f"vertex {v} out of range for n={n}")


def shatters(cc: ConceptClass, s: Sequence[int]) -> bool:
    """True when every labeling of ``s`` is realized by some member.

    ``len(s)`` is capped at 30; larger requests raise ValueError.
    """
    s = list(s)
    _check_subset(cc.n, s)
    if len(s) > SHATTER_SET_LIMIT:
        raise ValueError(f"shattering check limited to |s| <= {SHATTER_SET_LIMIT}")
    if isinstance(cc, FullClass):
        return True
    needed = 1 << len(s)
    if cc.size < needed:
        return False
    patterns: set[int] = set()
    for c in cc.members():
        pat = 0
        for j, v in enumerate(s):
            pat |= c.labels[v] << j
        patterns.add(pat)
        if len(patterns) == needed:
            return True
    return False


def vc_dimension(cc: ConceptClass) -> int:
    """Size of a largest shattered subset of the domain."""
    if isinstance(cc, FullClass):
        return cc.n
    if isinstance(cc, SingletonClass):
        return 0
    # Level-by-level climb through shattered sets.  Shattering is closed
    # downward, and any shattered set of size k+1 extends a shattered k-set
    # by a vertex above its maximum, so this frontier is exhaustive.
    masks = [c.mask() for c in cc.members()]
    n = cc.n

    def shatters_tuple(s: tuple[int, ...]) -> bool:
        needed = 1 << len(s)
        if len(masks) < needed:
            return False
        seen: set[int] = set()
        for m in masks:
            pat = 0
            for j, v in enumerate(s):
                pat |= ((m >> v) & 1) << j
            seen.add(pat)
            if len(seen) == needed:
                return True
        return False

    frontier: list[tuple[int, ...]] = [()]
    d = 0
    while True:
        nxt = []
        for s in frontier:
            lo = s[-1] + 1 if s else 0
            for v in range(lo, n):
                cand = s + (v,)
                if shatters_tuple(cand):
                    nxt.append(cand)
        if not nxt:
            return d
        frontier = nxt
        d += 1


def restrict(cc: ConceptClass, s: Sequence[int]) -> ExplicitClass:
    """Project the class onto coordinates ``s`` (order preserved).

    Returns an explicit class over ``len(s)`` points whose members are the
    distinct restriction patterns in lexicographic order.
    """
    s = list(s)
    _check_subset(cc.n, s)
    k = len(s)
    if isinstance(cc, FullClass):
        if k > FULL_CLASS_ENUMERATION_LIMIT:
            raise EnumerationGuardError(
                f"full-class restriction to {k} points would enumerate 2^{k} patterns"
            )
        patterns = [tuple((i >> j) & 1 for j in range(k)) for i in range(1 << k)]
        patterns.sort()
    else:
        patterns = sorted({tuple(c.labels[v] for v in s) for c in cc.members()})
    return ExplicitClass(tuple(Concept(p) for p in patterns))


def is_realizable(cc: ConceptClass, items: Iterable[tuple[int, int]]) -> bool:
    """True when some member agrees with every (vertex, label) pair."""
    by_vertex: dict[int, int] = {}
    for v, lab in items:
        if not (0 <= v < cc.n):
            raise ValueError(f"vertex {v} out of range for n={cc.n}")
        if lab not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {lab!r}")
        if by_vertex.setdefault(v, lab) != lab:
            return False
    if isinstance(cc, FullClass):
        return True
    if isinstance(cc, SingletonClass):
        c = cc.concept
        return all(c.labels[v] == lab for v, lab in by_vertex.items())
    for c in cc.members():
        if all(c.labels[v] == lab for v, lab in by_vertex.items()):
            return True
    return False


def first_consistent_concept(
    cc: ConceptClass, items: Iterable[tuple[int, int]]
) -> Concept | None:
    """First member (canonical enumeration order) consistent with ``items``."""
    by_vertex: dict[int, int] = {}
    for v, lab in items:
        if not (0 <= v < cc.n):
            raise ValueError(f"vertex {v} out of range for n={cc.n}")
        if by_vertex.setdefault(v, lab) != lab:
            return None
    if isinstance(cc, FullClass):
        # First in counting order: labeled vertices as observed, rest 0.
        return Concept(tuple(by_vertex.get(v, 0) for v in range(cc.n)))
    for c in cc.members():
        if all(c.labels[v] == lab for v, lab in by_vertex.items()):
            return c
    return None


# ---------------------------------------------------------------------------
# Partial concepts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PartialConcept:
    """Labeling by 0, 1, or None (undefined)."""

    labels: tuple[int | None, ...]

    def __post_init__(self):
        clean = tuple(None if b is None else int(b) for b in self.labels)
        if any(b not in (0, 1, None) for b in clean):
            raise ValueError("partial labels must be 0, 1, or None")
        object.__setattr__(self, "labels", clean)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def support(self) -> frozenset:
        return frozenset(v for v, b in enumerate(self.labels) if b is not None)


def encode_partial_concept(pc: PartialConcept) -> tuple[DirectedGraph, Concept]:
    """Graph/concept pair whose neighborhood averages reproduce ``pc``.

    Support vertices are isolated and keep their label.  Off-support
    vertices form a bidirected clique and are labeled 1, so their
    neighborhood average is 1 under any distribution on the clique.
    """
    n = pc.n
    support = pc.support
    rest = [v for v in range(n) if v not in support]
    edges = [(u, v) for u in rest for v in rest if u != v]
    labels = tuple(pc.labels[v] if v in support else 1 for v in range(n))
    return DirectedGraph(n, edges), Concept(labels)


def encode_partial_class(
    pcs: Sequence[PartialConcept],
) -> list[tuple[DirectedGraph, Concept]]:
    """Encode each partial concept; all must share a domain size."""
    if not pcs:
        raise ValueError("need at least one partial concept")
    n = pcs[0].n
    if any(pc.n != n for pc in pcs):
        raise ValueError("partial concepts must share a domain size")
    return [encode_partial_concept(pc) for pc in pcs]


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------


def concept_class_from_json(text: str) -> ConceptClass:
    """Parse a class file; see ``concept_class_to_json`` for the schema."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid class JSON: {exc.msg} (line {exc.lineno})") from exc
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ConfigError('class JSON must be an object with a "kind" field')
    kind = doc["kind"]
    try:
        if kind == "explicit":
            rows = doc["concepts"]
            if not isinstance(rows, list) or not rows:
                raise ConfigError('"concepts" must be a non-empty list')
            return ExplicitClass(tuple(Concept(tuple(row)) for row in rows))
        if kind == "full":
            return FullClass(int(doc["n"]))
        if kind == "singleton":
            return SingletonClass(Concept(tuple(doc["labels"])))
        if kind == "thresholds":
            return ThresholdClass(int(doc["n"]))
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad {kind!r} class JSON: {exc}") from exc
    raise ConfigError(f"unknown class kind {kind!r}")


def load_concept_class(path: str) -> ConceptClass:
    with open(path, encoding="utf-8") as fh:
        return concept_class_from_json(fh.read())


def concept_class_to_json(cc: ConceptClass) -> str:
    if isinstance(cc, ExplicitClass):
        doc = {"kind": "explicit", "concepts": [list(c.labels) for c in cc.concepts]}
    elif isinstance(cc, FullClass):
        doc = {"kind": "full", "n": cc.n}
    elif isinstance(cc, SingletonClass):
        doc = {"kind": "singleton", "labels": list(cc.concept.labels)}
    elif isinstance(cc, ThresholdClass):
        doc = {"kind": "thresholds", "n": cc.n}
    else:
        raise TypeError(f"not a concept class: {cc!r}")
    return json.dumps(doc, separators=(", ", ": "))


def partial_concepts_from_json(text: str) -> list[PartialConcept]:
    """Parse ``[{"labels": [0, 1, null, ...]}, ...]``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg} (line {exc.lineno})") from exc
    if not isinstance(doc, list):
        raise ConfigError("partial concept file must be a JSON array")
    out = []
    for i, row in enumerate(doc):
        if not isinstance(row, dict) or "labels" not in row:
            raise ConfigError(f'entry #{i} must be an object with "labels"')
        out.append(PartialConcept(tuple(row["labels"])))
    return out
