"""Questioner strategies.

A questioner is driven by :meth:`Questioner.next`: it receives the answer to
its previous query (None at the start) and returns either its next query or a
final :class:`~plurality.core.Resolution`.
"""

from __future__ import annotations

import random
from collections.abc import Generator

from .core import GameConfig, Goal, Partition, Resolution, ResolutionKind, normalize_partition

Move = tuple[int, ...] | Resolution
Plan = Generator[tuple[int, ...], Partition, Resolution]


class Questioner:
    name = "questioner"

    def __init__(self, config: GameConfig, goal: Goal = Goal.PLURALITY) -> None:
        self.config = config
        self.goal = Goal(goal)
        self.declaration: Resolution | None = None
        self._plan: Plan | None = None
        self._started = False

    def plan(self) -> Plan:
        raise NotImplementedError

    def next(self, last_answer: Partition | None = None) -> Move:
        if self.declaration is not None:
            raise RuntimeError(f"{self.name} has already declared")
        try:
            if not self._started:
                self._started = True
                self._plan = self.plan()
                move = next(self._plan)
            else:
                if last_answer is None:
                    raise ValueError("an answer to the previous query is required")
                assert self._plan is not None
                move = self._plan.send(normalize_partition(last_answer))
        except StopIteration as stop:
            self.declaration = stop.value
            return stop.value
        return tuple(sorted(move))


class _Parity:
    """Union-find with parity over the balls that are not of the anchor's color."""

    def __init__(self, n: int) -> None:
        self.parent = list(range(n + 1))
        self.par = [0] * (n + 1)

    def find(self, b: int) -> tuple[int, int]:
        p = 0
        while self.parent[b] != b:
            p ^= self.par[b]
            b = self.parent[b]
        return b, p

    def relate(self, a: int, b: int, differ: bool) -> tuple[int, int] | None:
        """Record the relation; returns (kept root, absorbed root) when two trees merge."""
        (ra, pa), (rb, pb) = self.find(a), self.find(b)
        want = int(differ)
        if ra == rb:
            if pa ^ pb != want:
                raise ValueError(f"answers are inconsistent: balls {a} and {b}")
            return None
        if ra > rb:
            ra, rb, pa, pb = rb, ra, pb, pa
        self.parent[rb] = ra
        self.par[rb] = pa ^ pb ^ want
        return ra, rb


class _TwoColorTracker:
    """What the anchor-based strategies learn: the anchor's class and a parity forest on the rest."""

    def __init__(self, config: GameConfig, anchor: int = 1) -> None:
        self.n = config.n
        self.anchor = anchor
        self.same_as_anchor = {anchor}
        self.forest = _Parity(config.n)
        self.edges: list[tuple[int, int, bool]] = []  # (u, v, differ) among non-anchor-colored balls
        self._groups: dict[int, list[int]] = {b: [b] for b in range(1, config.n + 1) if b != anchor}

    def observe(self, query, parts: Partition) -> None:
        part_of = {b: i for i, p in enumerate(parts) for b in p}
        known = [b for b in query if b in self.same_as_anchor]
        if known:
            anchor_part = part_of[known[0]]
            for b in query:
                if part_of[b] == anchor_part and b not in self.same_as_anchor:
                    self.same_as_anchor.add(b)
                    self._leave(b)
        rest = [b for b in query if b not in self.same_as_anchor]
        for u, v in zip(rest, rest[1:]):
            self.relate(u, v, part_of[u] != part_of[v])

    def _leave(self, b: int) -> None:
        r = self.forest.find(b)[0]
        group = self._groups.get(r)
        if group is not None and b in group:
            group.remove(b)
            if not group:
                del self._groups[r]

    def relate(self, u: int, v: int, differ: bool) -> None:
        self.edges.append((u, v, differ))
        merged = self.forest.relate(u, v, differ)
        if merged is not None:
            keep, gone = merged
            self._groups[keep] = sorted(self._groups.get(keep, []) + self._groups.pop(gone, []))

    def others(self) -> list[int]:
        return [b for b in range(1, self.n + 1) if b not in self.same_as_anchor]

    def components(self) -> list[list[int]]:
        """Components of the non-anchor balls, ordered by smallest ball."""
        return sorted(g for g in self._groups.values() if g)

    def classes(self) -> tuple[list[int], list[int], list[int]]:
        """Anchor class, then the two other classes by red-edge parity from the lowest ball."""
        comps = self.components()
        if len(comps) > 1:
            raise RuntimeError("the two-color graph is not connected yet")
        c1 = sorted(self.same_as_anchor)
        if not comps:
            return c1, [], []
        y = comps[0][0]
        ry, py = self.forest.find(y)
        c2, c3 = [], []
        for b in comps[0]:
            r, p = self.forest.find(b)
            assert r == ry, "parity reconstruction left the component"
            (c2 if p == py else c3).append(b)
        self._check_paths(y, set(c2))
        return c1, c2, c3

    def _check_paths(self, y: int, same_as_y: set[int]) -> None:
        # every recorded edge must agree with the reconstructed classes
        for u, v, differ in self.edges:
            if ((u in same_as_y) != (v in same_as_y)) != differ:
                raise RuntimeError(f"red-edge parity is path dependent at edge {u}-{v}")

    def declare(self, goal: Goal) -> Resolution:
        classes = [c for c in self.classes() if c]
        if goal is Goal.PARTITION:
            return Resolution(ResolutionKind.PARTITION, classes=normalize_partition(classes))
        sizes = sorted((len(c) for c in classes), reverse=True)
        if len(sizes) > 1 and sizes[0] == sizes[1]:
            return Resolution(ResolutionKind.NO_PLURALITY)
        top = max(classes, key=len)
        return Resolution(ResolutionKind.PLURALITY_BALL, ball=min(top))


class K3Questioner(Questioner):
    """Two-phase strategy for triplet queries.

    Phase 1 asks the anchor ball 1 with consecutive pairs (and, for even n,
    the anchor with the last ball and the lowest ball not yet known to share
    the anchor's color). Phase 2 merges three components
    of the remaining two-color graph per query until it is connected.
    """

    name = "paper-k3"

    def __init__(self, config: GameConfig, goal: Goal = Goal.PLURALITY) -> None:
        if config.k != 3:
            raise ValueError(f"paper-k3 needs k=3, got k={config.k}")
        super().__init__(config, goal)
        self.tracker = _TwoColorTracker(config)
        self.phase = 1

    def phase1_pairs(self) -> list[tuple[int, int, int]]:
        """Queries of the anchor with consecutive pairs; for even n the last ball is left out."""
        n, x = self.config.n, 1
        rest = list(range(2, n + 1 - (n % 2 == 0)))
        return [(x, rest[i], rest[i + 1]) for i in range(0, len(rest), 2)]

    def plan(self) -> Plan:
        t, n = self.tracker, self.config.n
        for q in self.phase1_pairs():
            parts = yield q
            t.observe(q, parts)
        if n % 2 == 0:
            # y: lowest ball not known to share the anchor's color, so this query shrinks G
            y = next((b for b in range(2, n) if b not in t.same_as_anchor), 2)
            q = (1, y, n)
            parts = yield q
            t.observe(q, parts)
        self.phase = 2
        while True:
            comps = t.components()
            if len(comps) <= 1:
                break
            if len(comps) >= 3:
                q = (comps[0][0], comps[1][0], comps[2][0])
            else:
                a, b = comps
                if len(b) >= 2:
                    q = (a[0], b[0], b[1])
                elif len(a) >= 2:
                    q = (a[0], a[1], b[0])
                else:
                    q = (a[0], b[0], min(t.same_as_anchor))
            parts = yield q
            t.observe(q, parts)
        return t.declare(self.goal)


class GeneralKQuestioner(Questioner):
    """Anchor ball 1 with (k-1)-blocks, then queries joining up to k components at a time."""

    name = "paper-general-k"

    def __init__(self, config: GameConfig, goal: Goal = Goal.PLURALITY) -> None:
        super().__init__(config, goal)
        self.tracker = _TwoColorTracker(config)
        self.phase = 1

    def stage1_queries(self) -> list[tuple[int, ...]]:
        n, k, x = self.config.n, self.config.k, 1
        rest = list(range(2, n + 1))
        out = []
        for i in range(0, len(rest), k - 1):
            block = rest[i : i + k - 1]
            pad = [b for b in rest if b not in block][: k - 1 - len(block)]
            out.append(tuple(sorted([x, *block, *pad])))
        return out

    def plan(self) -> Plan:
        t, k = self.tracker, self.config.k
        for q in self.stage1_queries():
            parts = yield q
            t.observe(q, parts)
        self.phase = 2
        while True:
            comps = t.components()
            if len(comps) <= 1:
                break
            chosen = comps[:k]
            q = [c[0] for c in chosen]
            for b in sorted(t.same_as_anchor):
                if len(q) == k:
                    break
                q.append(b)
            for b in (b for c in chosen for b in c[1:]):
                if len(q) == k:
                    break
                q.append(b)
            parts = yield tuple(q)
            t.observe(q, parts)
        return t.declare(self.goal)


class RandomQuestioner(Questioner):
    """Uniformly random k-subsets from a seeded generator; never declares."""

    name = "random"

    def __init__(self, config: GameConfig, goal: Goal = Goal.PLURALITY, seed: int = 0) -> None:
        super().__init__(config, goal)
        self.seed = seed
        self.rng = random.Random(seed)

    def plan(self) -> Plan:
        balls = range(1, self.config.n + 1)
        while True:
            yield tuple(self.rng.sample(balls, self.config.k))


QUESTIONERS = ("paper-k3", "paper-general-k", "random")


def make_questioner(name: str, config: GameConfig, goal: Goal = Goal.PLURALITY, seed: int = 0) -> Questioner:
    if name == "paper-k3":
        return K3Questioner(config, goal)
    if name == "paper-general-k":
        return GeneralKQuestioner(config, goal)
    if name == "random":
        return RandomQuestioner(config, goal, seed)
    raise ValueError(f"unknown questioner {name!r}; expected one of {', '.join(QUESTIONERS)}")
