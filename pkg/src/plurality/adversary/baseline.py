"""Baseline adversaries used as a stress pool for the questioners."""

from __future__ import annotations

import random

from ..core import Coloring, GameConfig, Partition, check_coloring, partition_by_coloring, partition_patterns
from .base import Adversary


class FixedColoringAdversary(Adversary):
    """Answers every query by one coloring chosen up front."""

    name = "fixed"

    def __init__(self, config: GameConfig, coloring: Coloring | None = None, seed: int | None = None) -> None:
        super().__init__(config)
        if coloring is None:
            rng = random.Random(seed)
            coloring = tuple(rng.randint(1, 3) for _ in range(config.n))
        self.coloring = check_coloring(tuple(coloring), config.n)

    def answer(self, query) -> Partition:
        return partition_by_coloring(sorted(query), self.coloring)

    def witness(self) -> Coloring:
        return self.coloring


class _Constraints:
    """Mutable union-find with different-color adjacency between class roots."""

    def __init__(self, n: int) -> None:
        self.n = n
        self.parent = list(range(n + 1))
        self.adj: dict[int, set[int]] = {b: set() for b in range(1, n + 1)}
        self.members: dict[int, list[int]] = {b: [b] for b in range(1, n + 1)}

    def find(self, b: int) -> int:
        while self.parent[b] != b:
            self.parent[b] = self.parent[self.parent[b]]
            b = self.parent[b]
        return b

    def _union(self, r: int, s: int) -> int:
        keep, gone = min(r, s), max(r, s)
        self.parent[gone] = keep
        self.members[keep] += self.members.pop(gone)
        for w in self.adj.pop(gone):
            self.adj[w].discard(gone)
            self.adj[w].add(keep)
            self.adj[keep].add(w)
        return keep

    def add(self, parts: Partition) -> None:
        for p in parts:
            r = self.find(p[0])
            for b in p[1:]:
                s = self.find(b)
                if s != r:
                    r = self._union(r, s)
        roots = [self.find(p[0]) for p in parts]
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                self.adj[roots[i]].add(roots[j])
                self.adj[roots[j]].add(roots[i])

    def repair(self, extra: Partition, hint: Coloring, steps: int, rng: random.Random) -> Coloring | None:
        """A coloring satisfying the constraints plus ``extra``, reached from ``hint`` by Kempe swaps.

        ``hint`` must satisfy the recorded constraints; a Kempe swap (exchanging
        two colors on a connected two-colored chain) keeps them satisfied, so only
        the new answer's equal/different constraints need fixing. Returns None if
        the answer is contradictory or not reached within ``steps`` swaps.
        """
        roots = [[self.find(b) for b in p] for p in extra]
        cons: list[tuple[int, int, bool]] = []
        for i, ri in enumerate(roots):
            for j, rj in enumerate(roots):
                if j < i:
                    continue
                for a in ri:
                    for b in rj:
                        if a == b:
                            if i != j:
                                return None
                            continue
                        if i == j and b in self.adj[a]:
                            return None
                        if a < b or i != j:
                            cons.append((a, b, i == j))
        cols = list(hint)  # only root entries are kept current during the search
        cols.insert(0, 0)
        changed: set[int] = set()
        adj = self.adj
        for _ in range(steps + 1):
            pending = [(a, b, eq) for a, b, eq in cons if (cols[a] == cols[b]) != eq]
            if not pending:
                for r in changed:
                    c = cols[r]
                    for b in self.members[r]:
                        cols[b] = c
                return tuple(cols[1:])
            a, b, eq = rng.choice(pending)
            v, other = (a, b) if rng.random() < 0.5 else (b, a)
            cur = cols[v]
            near = {cols[w] for w in adj[v]}
            if eq:
                target = cols[other]
            else:
                free = [c for c in (1, 2, 3) if c != cur and c not in near]
                target = rng.choice(free or [c for c in (1, 2, 3) if c != cur])
            if target not in near:
                # a plain recolor of v is itself a (one-vertex) Kempe swap
                cols[v] = target
                changed.add(v)
                continue
            chain, todo = {v}, [v]
            while todo:
                u = todo.pop()
                for w in adj[u]:
                    if w not in chain and (cols[w] == cur or cols[w] == target):
                        chain.add(w)
                        todo.append(w)
            for u in chain:
                cols[u] = target if cols[u] == cur else cur
            changed |= chain
        return None


class RandomConsistentAdversary(Adversary):
    """Answers with a random partition that keeps some coloring consistent.

    A candidate answer is accepted when the current witness already agrees with
    it, or when a short local search repairs the witness to agree with it. After a
    few rejected candidates the witness's own answer is given, so the answers
    always stay consistent.
    """

    name = "random"

    def __init__(self, config: GameConfig, seed: int = 0, tries: int = 2, budget: int = 6) -> None:
        super().__init__(config)
        self.rng = random.Random(seed)
        self.tries = tries
        self.budget = budget
        self.constraints = _Constraints(config.n)
        self.current = tuple(self.rng.randint(1, 3) for _ in range(config.n))

    def answer(self, query) -> Partition:
        q = sorted(query)
        patterns = partition_patterns(len(q), 3)
        parts = None
        for _ in range(self.tries):
            cand = tuple(tuple(q[i] for i in p) for p in self.rng.choice(patterns))
            if partition_by_coloring(q, self.current) == cand:
                parts = cand
                break
            repaired = self.constraints.repair(cand, self.current, self.budget, self.rng)
            if repaired is not None:
                self.current, parts = repaired, cand
                break
        if parts is None:
            parts = partition_by_coloring(q, self.current)
        self.constraints.add(parts)
        return parts

    def witness(self) -> Coloring:
        return self.current
