"""Balls, colorings, queries, partition answers and the constraint graph.

Ball indices are 1-based everywhere. Colors are 1, 2 and 3.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

NUM_COLORS = 3

Coloring = tuple[int, ...]
Query = frozenset[int]
Partition = tuple[tuple[int, ...], ...]


class InvalidMove(ValueError):
    """A query or an answer that does not fit the game configuration."""


@dataclass(frozen=True)
class GameConfig:
    n: int
    k: int
    c: int = NUM_COLORS

    def __post_init__(self) -> None:
        if self.c != NUM_COLORS:
            raise ValueError(f"only {NUM_COLORS} colors are supported, got c={self.c}")
        if not (self.n >= self.k >= 2):
            raise ValueError(f"need n >= k >= 2, got n={self.n}, k={self.k}")


class Goal(str, enum.Enum):
    PLURALITY = "plurality"
    PARTITION = "partition"


def check_coloring(colors, n: int | None = None) -> Coloring:
    colors = tuple(int(c) for c in colors)
    if n is not None and len(colors) != n:
        raise ValueError(f"coloring has length {len(colors)}, expected {n}")
    if any(c not in (1, 2, 3) for c in colors):
        raise ValueError(f"colors must be in {{1,2,3}}: {colors}")
    return colors


def make_query(balls, config: GameConfig) -> Query:
    q = frozenset(int(b) for b in balls)
    balls = list(balls)
    if len(q) != len(balls):
        raise InvalidMove(f"query has repeated balls: {sorted(balls)}")
    if len(q) != config.k:
        raise InvalidMove(f"query must have exactly {config.k} balls, got {len(q)}")
    if not all(1 <= b <= config.n for b in q):
        raise InvalidMove(f"query balls out of range 1..{config.n}: {sorted(q)}")
    return q


def normalize_partition(parts) -> Partition:
    """Canonical form: each part sorted, parts ordered by their smallest ball."""
    return tuple(sorted(tuple(sorted(map(int, p))) for p in parts))


def check_partition(query: Query, parts) -> Partition:
    """Validate that ``parts`` partitions ``query`` into 1..3 nonempty classes."""
    norm = normalize_partition(parts)
    if not 1 <= len(norm) <= NUM_COLORS:
        raise InvalidMove(f"answer must have 1..{NUM_COLORS} parts, got {len(norm)}")
    if not all(norm):
        raise InvalidMove("answer has an empty part")
    seen = [b for p in norm for b in p]
    if len(seen) != len(set(seen)):
        raise InvalidMove(f"answer parts overlap: {norm}")
    if set(seen) != set(query):
        raise InvalidMove(f"answer {norm} does not cover query {sorted(query)}")
    return norm


def partition_by_coloring(query, coloring: Coloring) -> Partition:
    # scanning the balls in ascending order already yields the canonical form
    classes: dict[int, list[int]] = {}
    for b in sorted(query):
        classes.setdefault(coloring[b - 1], []).append(b)
    return tuple(map(tuple, classes.values()))


@lru_cache(maxsize=None)
def partition_patterns(size: int, max_parts: int) -> tuple[Partition, ...]:
    """Set partitions of positions 0..size-1 in canonical form, sorted."""
    out: list[list[list[int]]] = [[]]
    for b in range(size):
        nxt = []
        for parts in out:
            for i in range(len(parts)):
                nxt.append([*parts[:i], parts[i] + [b], *parts[i + 1:]])
            if len(parts) < max_parts:
                nxt.append(parts + [[b]])
        out = nxt
    return tuple(sorted(normalize_partition(p) for p in out))


def all_partitions(query, max_parts: int = NUM_COLORS) -> list[Partition]:
    """Every set partition of ``query`` into at most ``max_parts`` parts, sorted."""
    balls = sorted(query)
    # an increasing relabelling of positions keeps both the canonical form and the order
    return [tuple(tuple(balls[i] for i in p) for p in pat) for pat in partition_patterns(len(balls), max_parts)]


def plurality_status(coloring: Coloring) -> frozenset[int] | None:
    """Balls of the strictly largest color class, or None when no class is strictly largest."""
    sizes = [0] * (NUM_COLORS + 1)
    for c in coloring:
        sizes[c] += 1
    top = max(sizes)
    if sizes.count(top) > 1:
        return None
    color = sizes.index(top)
    return frozenset(i + 1 for i, c in enumerate(coloring) if c == color)


def class_sizes(coloring: Coloring) -> tuple[int, int, int]:
    return tuple(coloring.count(c) for c in (1, 2, 3))  # type: ignore[return-value]


def classes_of(coloring: Coloring) -> Partition:
    """The color classes of a coloring, forgetting the color names."""
    return partition_by_coloring(range(1, len(coloring) + 1), coloring)


@dataclass(frozen=True, eq=False)
class ConstraintGraph:
    """Same-color and different-color constraints implied by a sequence of answers.

    ``rep[b]`` is the smallest ball of b's same-color class; ``uneq`` holds pairs of
    representatives known to differ. Values are never mutated after construction.
    """

    n: int
    rep: tuple[int, ...]
    uneq: frozenset[tuple[int, int]] = frozenset()
    touched: frozenset[int] = frozenset()
    contradictory: bool = False
    _adj: dict | None = field(default=None, repr=False, compare=False)

    @classmethod
    def empty(cls, n: int) -> ConstraintGraph:
        return cls(n=n, rep=tuple(range(n + 1)))

    @classmethod
    def from_answers(cls, n: int, answers) -> ConstraintGraph:
        g = cls.empty(n)
        for q, parts in answers:
            g = apply_answer(g, q, parts)
        return g

    def find(self, b: int) -> int:
        return self.rep[b]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConstraintGraph):
            return NotImplemented
        return (self.n, self.rep, self.uneq, self.touched, self.contradictory) == (
            other.n, other.rep, other.uneq, other.touched, other.contradictory)

    def __hash__(self) -> int:
        return hash((self.n, self.rep, self.uneq, self.touched, self.contradictory))

    def classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for b in range(1, self.n + 1):
            out.setdefault(self.rep[b], []).append(b)
        return out

    def eq_partition(self) -> Partition:
        return normalize_partition(self.classes().values())

    def adjacency(self) -> dict[int, set[int]]:
        """Different-color adjacency on representatives (every rep is a key)."""
        if self._adj is None:
            adj: dict[int, set[int]] = {r: set() for r in set(self.rep[1:])}
            for a, b in self.uneq:
                adj[a].add(b)
                adj[b].add(a)
            object.__setattr__(self, "_adj", adj)
        return self._adj  # type: ignore[return-value]

    def same(self, a: int, b: int) -> bool:
        return self.rep[a] == self.rep[b]

    def differ(self, a: int, b: int) -> bool:
        ra, rb = self.rep[a], self.rep[b]
        return (min(ra, rb), max(ra, rb)) in self.uneq

    def is_consistent_with(self, coloring: Coloring) -> bool:
        if self.contradictory:
            return False
        for b in range(1, self.n + 1):
            if coloring[b - 1] != coloring[self.rep[b] - 1]:
                return False
        return all(coloring[a - 1] != coloring[b - 1] for a, b in self.uneq)


def apply_answer(g: ConstraintGraph, query, parts) -> ConstraintGraph:
    """Record the answer ``parts`` to ``query``; returns a new graph."""
    q = frozenset(query)
    if not q or not all(1 <= b <= g.n for b in q):
        raise InvalidMove(f"query balls out of range 1..{g.n}: {sorted(q)}")
    norm = check_partition(q, parts)
    rep = list(g.rep)
    for part in norm:
        roots = {rep[b] for b in part}
        if len(roots) > 1:
            new_root = min(roots)
            for b in range(1, g.n + 1):
                if rep[b] in roots:
                    rep[b] = new_root
    pairs = {(rep[a], rep[b]) for a, b in g.uneq}
    for p1, p2 in combinations(norm, 2):
        pairs.add((rep[p1[0]], rep[p2[0]]))
    contradictory = g.contradictory
    uneq = set()
    for a, b in pairs:
        if a == b:
            contradictory = True
        else:
            uneq.add((min(a, b), max(a, b)))
    return ConstraintGraph(
        n=g.n,
        rep=tuple(rep),
        uneq=frozenset(uneq),
        touched=g.touched | q,
        contradictory=contradictory,
    )


class ResolutionKind(str, enum.Enum):
    UNRESOLVED = "none"
    NO_PLURALITY = "no_plurality"
    PLURALITY_BALL = "plurality_ball"
    PARTITION = "partition"


@dataclass(frozen=True)
class Resolution:
    kind: ResolutionKind
    ball: int | None = None
    classes: Partition | None = None

    @property
    def resolved(self) -> bool:
        return self.kind is not ResolutionKind.UNRESOLVED

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind.value}
        if self.ball is not None:
            out["ball"] = self.ball
        if self.classes is not None:
            out["classes"] = [list(c) for c in self.classes]
        return out

    @classmethod
    def from_json(cls, data: dict) -> Resolution:
        classes = data.get("classes")
        return cls(
            kind=ResolutionKind(data["kind"]),
            ball=data.get("ball"),
            classes=normalize_partition(classes) if classes is not None else None,
        )

    def holds_for(self, coloring: Coloring) -> bool:
        """Whether this declaration is a correct output for the given coloring."""
        if self.kind is ResolutionKind.NO_PLURALITY:
            return plurality_status(coloring) is None
        if self.kind is ResolutionKind.PLURALITY_BALL:
            top = plurality_status(coloring)
            return top is not None and self.ball in top
        if self.kind is ResolutionKind.PARTITION:
            return self.classes == classes_of(coloring)
        return False


UNRESOLVED = Resolution(ResolutionKind.UNRESOLVED)
