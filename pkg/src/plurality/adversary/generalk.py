"""Two-set adversary for arbitrary query size k.

Unseen balls are dealt into two sets A and B (colors 1 and 2) capped at half of
the balls; every answer is (A ∩ q, B ∩ q). For odd n the last unseen ball x
becomes the single ball of color 3 and the coloring is fixed from then on.
"""

from __future__ import annotations

from ..core import GameConfig, Partition, apply_answer, ConstraintGraph, partition_by_coloring
from .aux import BLUE, GREEN, RED, AuxGraph
from .base import CONDITIONED, POST_VIOLATION, Adversary


class GeneralKAdversary(Adversary):
    name = "generalk"

    def __init__(self, config: GameConfig) -> None:
        super().__init__(config)
        self.n = config.n
        self.k = config.k
        self.odd = config.n % 2 == 1
        self.cap = config.n // 2
        self.side = [0] * (config.n + 1)  # 0 unseen, 1 in A, 2 in B, 3 the last ball x
        self.sizes = {1: 0, 2: 0}
        self.unseen = config.n
        self.x: int | None = None
        self.aux = AuxGraph(config.n, config.k)
        self.graph = ConstraintGraph.empty(config.n)
        self.steps = 0
        self.phase_log: list[str] = []

    @property
    def phase(self) -> str:
        return CONDITIONED if self.x is None else POST_VIOLATION

    def _split(self, q: list[int], new: list[int]) -> tuple[int, int]:
        """How many of the new balls go to A and to B."""
        old_sides = {self.side[b] for b in q if b not in new}
        best = None
        for to_a in range(len(new) + 1):
            to_b = len(new) - to_a
            a, b = self.sizes[1] + to_a, self.sizes[2] + to_b
            if a > self.cap or b > self.cap:
                continue
            sides = old_sides | ({1} if to_a else set()) | ({2} if to_b else set())
            smaller = 1 if self.sizes[1] <= self.sizes[2] else 2
            extra_to_smaller = (a >= b) if smaller == 1 else (b >= a)
            key = (len(sides) < 2, abs(a - b), not extra_to_smaller)
            if best is None or key < best[0]:
                best = (key, (to_a, to_b))
        assert best is not None, "the caps leave room for every unseen ball"
        return best[1]

    def _place(self, new: list[int], to_a: int, to_b: int) -> None:
        # lowest indices go to the side that is currently smaller (A on a tie)
        first = 1 if self.sizes[1] <= self.sizes[2] else 2
        counts = {1: to_a, 2: to_b}
        order = [first] * counts[first] + [3 - first] * counts[3 - first]
        for b, s in zip(new, order):
            self.side[b] = s
            self.sizes[s] += 1
        self.unseen -= len(new)

    def _add(self, u: int, v: int, color: str) -> None:
        self.aux.add(u, v, color, self.steps, dedupe=True)

    def _blue_paths(self, groups) -> None:
        for g in groups:
            for u, v in zip(g, g[1:]):
                self._add(u, v, BLUE)

    def answer(self, query) -> Partition:
        q = sorted(query)
        if len(q) != self.k or len(set(q)) != self.k:
            raise ValueError(f"query must have {self.k} distinct balls, got {q}")
        new = [b for b in q if self.side[b] == 0]
        if self.odd and self.x is None and new and len(new) == self.unseen:
            self.x = new[-1]
            self.side[self.x] = 3
            self.unseen -= 1
            new = new[:-1]
            self._place(new, self.cap - self.sizes[1], self.cap - self.sizes[2])
        elif new:
            self._place(new, *self._split(q, new))
        in_a = [b for b in q if self.side[b] == 1]
        in_b = [b for b in q if self.side[b] == 2]
        self._blue_paths((in_a, in_b))
        if self.x is not None and self.x in q:
            for group in (in_a, in_b):
                if group:
                    self._add(group[0], self.x, GREEN)
        elif in_a and in_b:
            fresh = set(new)
            for b in q:
                if b in fresh:
                    other = in_b if self.side[b] == 1 else in_a
                    self._add(b, other[0], RED)
        parts = partition_by_coloring(q, self._coloring())
        self.graph = apply_answer(self.graph, q, parts)
        self.steps += 1
        self.phase_log.append(self.phase)
        return parts

    def _coloring(self) -> tuple[int, ...]:
        """Current sides, with unseen balls completed to the target profile."""
        out = list(self.side[1:])
        room = {1: self.cap - self.sizes[1], 2: self.cap - self.sizes[2]}
        for i, s in enumerate(out):
            if s == 0:
                if room[1]:
                    out[i], room[1] = 1, room[1] - 1
                elif room[2]:
                    out[i], room[2] = 2, room[2] - 1
                else:
                    out[i] = 3
        return tuple(out)

    def witness(self):
        return self._coloring()

    @property
    def sets(self) -> tuple[list[int], list[int]]:
        """The current sets A and B."""
        return (
            [b for b in range(1, self.n + 1) if self.side[b] == 1],
            [b for b in range(1, self.n + 1) if self.side[b] == 2],
        )
