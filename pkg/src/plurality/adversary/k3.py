"""Adversary strategies for triplet queries (k = 3).

Both strategies keep the auxiliary graph: a 2+1 answer {i,j}|{l} draws blue ij
and red il, jl; an all-same answer draws two blue edges. While the numbered
conditions hold, every component of the graph is red-connected and bipartite,
so it is tracked by a parity union-find with per-component aggregates.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core import (
    ConstraintGraph,
    GameConfig,
    Partition,
    all_partitions,
    apply_answer,
    partition_by_coloring,
)
from ..twocolor import Item, _step, find_two_coloring
from .aux import BLUE, GREEN, RED, AuxGraph
from .base import CONDITIONED, POST_VIOLATION, Adversary, restricted_growth


class _Forest:
    """Parity union-find; per root: side counts, red-edge count, blue-degree-0 counts."""

    def __init__(self, n: int) -> None:
        self.parent = list(range(n + 1))
        self.par = [0] * (n + 1)
        self.cnt = [[1, 0] for _ in range(n + 1)]
        self.zero = [[1, 0] for _ in range(n + 1)]
        self.red = [0] * (n + 1)
        self.roots = set(range(1, n + 1))

    def find(self, b: int) -> tuple[int, int]:
        path = []
        while self.parent[b] != b:
            path.append(b)
            b = self.parent[b]
        root, acc = b, 0
        for v in reversed(path):
            acc ^= self.par[v]
            self.par[v] = acc
            self.parent[v] = root
        # each v on the path now points at root with its cumulative parity
        return (root, self.par[path[0]] if path else 0)

    def union(self, x: int, y: int, rel: int) -> int:
        """Merge root y into root x; a ball of parity p under y gets p ^ rel under x."""
        if self.cnt[x][0] + self.cnt[x][1] < self.cnt[y][0] + self.cnt[y][1]:
            x, y = y, x
        self.parent[y] = x
        self.par[y] = rel
        self.cnt[x][0] += self.cnt[y][rel]
        self.cnt[x][1] += self.cnt[y][1 - rel]
        self.zero[x][0] += self.zero[y][rel]
        self.zero[x][1] += self.zero[y][1 - rel]
        self.red[x] += self.red[y]
        self.roots.discard(y)
        return x

    def size(self, r: int) -> int:
        return self.cnt[r][0] + self.cnt[r][1]

    def imbalance(self, r: int) -> int:
        return abs(self.cnt[r][0] - self.cnt[r][1])

    def deficient(self, r: int) -> bool:
        return self.red[r] == self.size(r) - 1

    def item(self, r: int) -> Item:
        deficient = self.deficient(r)
        return Item(
            self.cnt[r][0] - self.cnt[r][1],
            deficient and self.zero[r][0] > 0,
            deficient and self.zero[r][1] > 0,
        )


def _edges_for(parts: Partition, step: int) -> list[tuple[int, int, str]]:
    """Edges drawn for an answer outside the third-color rules."""
    if len(parts) == 1:
        a, b, c = parts[0]
        return [(a, b, BLUE), (b, c, BLUE)]
    if len(parts) == 2:
        pair, single = (parts[0], parts[1]) if len(parts[0]) == 2 else (parts[1], parts[0])
        (i, j), (l,) = pair, single
        return [(i, j, BLUE), (i, l, RED), (j, l, RED)]
    (a,), (b,), (c,) = parts
    return [(a, b, RED), (a, c, RED), (b, c, RED)]


def green_at(aux: AuxGraph, z: int) -> int:
    """Turn the red edges at ``z`` into green ones, one per answer; returns the green count.

    Red edges at a ball come in pairs, one pair per answer that separated it.
    The edge to the lower other endpoint of each pair turns green and the rest
    are deleted.
    """
    by_step: dict[int, list] = {}
    for e in aux.edges:
        if e.color == RED and z in (e.u, e.v):
            by_step.setdefault(e.step, []).append(e)
    for step in sorted(by_step):
        group = sorted(by_step[step], key=lambda e: e.u + e.v - z)
        aux.recolor(group[0], GREEN)
        for e in group[1:]:
            aux.remove(e)
    return len(by_step)


@dataclass
class _Eval:
    parts: Partition
    roots: list[int]
    orient: dict[int, int]
    edges: list[tuple[int, int, str]]
    od: int
    item: Item

    @property
    def imbalance(self) -> int:
        return abs(self.od)


class _K3Adversary(Adversary):
    odd = False

    def __init__(self, config: GameConfig) -> None:
        if config.k != 3:
            raise ValueError(f"{self.name} needs k=3, got k={config.k}")
        if (config.n % 2 == 1) != self.odd:
            raise ValueError(f"{self.name} needs {'odd' if self.odd else 'even'} n, got n={config.n}")
        super().__init__(config)
        self.n = config.n
        self.aux = AuxGraph(config.n, 3)
        self.graph = ConstraintGraph.empty(config.n)
        self.forest = _Forest(config.n)
        self._phase = CONDITIONED
        self.fixed: tuple[int, ...] | None = None
        self.steps = 0
        self.violation_step: int | None = None
        self.phase_log: list[str] = []

    @property
    def phase(self) -> str:
        return self._phase

    # feasibility gate, overridden by the odd strategy
    target = 0
    need_flag = False
    # whether a one-part answer forced inside a single component still counts as conditioned
    same_component_exempt = True

    def _evaluate(self, q: list[int], parts: Partition) -> _Eval | None:
        f = self.forest
        found = {b: f.find(b) for b in q}
        part_of = {b: i for i, p in enumerate(parts) for b in p}
        roots: list[int] = []
        orient: dict[int, int] = {}
        base_color: dict[int, int] = {}
        # color (0/1 in the merged frame) of each part
        for b in q:
            r, p = found[b]
            if r not in orient:
                roots.append(r)
                if not orient:
                    orient[r] = 0
                elif part_of[b] in base_color:
                    orient[r] = base_color[part_of[b]] ^ p
                else:
                    # the other part is already colored; this part takes the opposite color
                    orient[r] = (1 - base_color[1 - part_of[b]]) ^ p
            color = p ^ orient[r]
            i = part_of[b]
            if i in base_color and base_color[i] != color:
                return None
            base_color[i] = color
        if len(parts) == 2 and base_color[0] == base_color[1]:
            return None
        edges = _edges_for(parts, self.steps)
        cnt0 = sum(f.cnt[r][orient[r]] for r in roots)
        cnt1 = sum(f.cnt[r][1 - orient[r]] for r in roots)
        zero = [sum(f.zero[r][orient[r]] for r in roots), sum(f.zero[r][1 - orient[r]] for r in roots)]
        red = sum(f.red[r] for r in roots) + sum(1 for e in edges if e[2] == RED)
        gains_blue = {b for e in edges if e[2] == BLUE for b in e[:2] if self.aux.degree(b, BLUE) == 0}
        for b in gains_blue:
            r, p = found[b]
            zero[p ^ orient[r]] -= 1
        deficient = red == cnt0 + cnt1 - 1
        item = Item(cnt0 - cnt1, deficient and zero[0] > 0, deficient and zero[1] > 0)
        return _Eval(parts, roots, orient, edges, cnt0 - cnt1, item)

    def _others(self, roots) -> tuple[int, int, int]:
        items = [self.forest.item(r) for r in self.forest.roots if r not in roots]
        offset = self.n
        m0, m1 = 1 << offset, 0
        for it in items:
            m0, m1 = _step(m0, m1, it)
        return m0, m1, offset

    def _feasible(self, others: tuple[int, int, int], ev: _Eval) -> bool:
        m0, m1, offset = others
        m0, m1 = _step(m0, m1, ev.item)
        bit = 1 << (self.target + offset)
        return bool(m1 & bit) or (not self.need_flag and bool(m0 & bit))

    def _rank(self, q: list[int], ev: _Eval, ds: list[int]) -> tuple:
        return (ev.imbalance, restricted_growth(q, ev.parts))

    def _choose(self, q: list[int]) -> _Eval | None:
        roots = list(dict.fromkeys(self.forest.find(b)[0] for b in q))
        ds = [self.forest.imbalance(r) for r in roots]
        others = self._others(roots)
        best = None
        for parts in all_partitions(q, 2):
            ev = self._evaluate(q, parts)
            if ev is None:
                continue
            cond2 = len(parts) == 2 or (self.same_component_exempt and len(roots) == 1)
            cond3 = not (len(roots) == 3 and min(ds) > 0 and ev.imbalance == sum(ds))
            if not (cond2 and cond3 and self._feasible(others, ev)):
                continue
            key = self._rank(q, ev, ds)
            if best is None or key < best[0]:
                best = (key, ev)
        return None if best is None else best[1]

    def _commit(self, ev: _Eval) -> None:
        f = self.forest
        gains_blue = {b for e in ev.edges if e[2] == BLUE for b in e[:2] if self.aux.degree(b, BLUE) == 0}
        for b in gains_blue:
            r, p = f.find(b)
            f.zero[r][p] -= 1
        first = ev.roots[0]
        for r in ev.roots[1:]:
            # orientations are relative to the first root's frame; re-express them under its current root
            root, p0 = f.find(first)
            f.union(root, r, ev.orient[r] ^ p0)
        f.red[f.find(first)[0]] += sum(1 for e in ev.edges if e[2] == RED)
        for u, v, color in ev.edges:
            self.aux.add(u, v, color, self.steps)

    def answer(self, query) -> Partition:
        q = sorted(query)
        if len(q) != 3:
            raise ValueError(f"query must have 3 balls, got {q}")
        if self._phase == CONDITIONED:
            ev = self._choose(q)
            if ev is not None:
                self._commit(ev)
                return self._finish(q, ev.parts)
            self._violate(q)
        assert self.fixed is not None
        parts = partition_by_coloring(q, self.fixed)
        for u, v, color in self._post_edges(parts):
            self.aux.add(u, v, color, self.steps)
        return self._finish(q, parts)

    def _finish(self, q: list[int], parts: Partition) -> Partition:
        self.graph = apply_answer(self.graph, q, parts)
        self.steps += 1
        self.phase_log.append(self._phase)
        return parts

    def _post_edges(self, parts: Partition) -> list[tuple[int, int, str]]:
        return _edges_for(parts, self.steps)

    def _violate(self, q: list[int]) -> None:
        raise NotImplementedError


class Even3Adversary(_K3Adversary):
    """Keeps a balanced 2-coloring consistent; avoids all-same answers and large merged imbalances."""

    name = "even3"

    def _violate(self, q: list[int]) -> None:
        s = find_two_coloring(self.graph, (self.n // 2, self.n // 2))
        if s is None:
            raise RuntimeError("balanced two-coloring lost before the violation point")
        self.fixed = s
        self._phase = POST_VIOLATION
        self.violation_step = self.steps

    def witness(self):
        if self.fixed is not None:
            return self.fixed
        return find_two_coloring(self.graph, (self.n // 2, self.n // 2))


class Odd3Adversary(_K3Adversary):
    """Odd n: keeps an almost-balanced 2-coloring with a potential-third-color ball in the larger class."""

    name = "odd3"
    odd = True
    target = 1
    need_flag = True
    # blue edges without red ones would strip p3c balls from a deficient component
    same_component_exempt = False

    def __init__(self, config: GameConfig) -> None:
        super().__init__(config)
        self.z: int | None = None

    def p3c_balls(self) -> list[int]:
        """Blue-degree-0 balls of deficient components (valid while conditioned)."""
        out = []
        for b in range(1, self.n + 1):
            if self.aux.degree(b, BLUE) == 0 and self.forest.deficient(self.forest.find(b)[0]):
                out.append(b)
        return out

    def _is_p3c(self, b: int) -> bool:
        return self.aux.degree(b, BLUE) == 0 and self.forest.deficient(self.forest.find(b)[0])

    def _rank(self, q: list[int], ev: _Eval, ds: list[int]) -> tuple:
        roots = [self.forest.find(b)[0] for b in q]
        if len(set(roots)) != 3 or not all(self._is_p3c(b) for b in q):
            return (0, *super()._rank(q, ev, ds))
        # three p3c balls from three deficient components: pick the separated ball
        larger = []
        for b in q:
            r, p = self.forest.find(b)
            larger.append(self.forest.cnt[r][p] > self.forest.cnt[r][1 - p])
        group = [b for b, big in zip(q, larger) if big]
        if len(group) < 2:
            group = [b for b, big in zip(q, larger) if not big]
        order = sorted(group, key=lambda b: (self.aux.degree(b, RED), b))
        single = next(p[0] for p in ev.parts if len(p) == 1)
        rank = order.index(single) if single in order else len(order)
        return (rank, *super()._rank(q, ev, ds))

    def _pick_third(self) -> tuple[int, tuple[int, ...]] | None:
        sizes = ((self.n + 1) // 2, (self.n - 1) // 2)
        for z in sorted(self.p3c_balls(), key=lambda b: (self.aux.degree(b, RED), b)):
            s = find_two_coloring(self.graph, sizes, candidates=(z,))
            if s is not None:
                return z, s
        return None

    def _violate(self, q: list[int]) -> None:
        picked = self._pick_third()
        if picked is None:
            raise RuntimeError("almost-balanced coloring with a p3c ball lost before the violation point")
        z, s = picked
        self.z = z
        self.fixed = tuple(3 if b == z else c for b, c in enumerate(s, start=1))
        self._phase = POST_VIOLATION
        self.violation_step = self.steps
        green_at(self.aux, z)

    def _post_edges(self, parts: Partition) -> list[tuple[int, int, str]]:
        z = self.z
        if z is None or not any(z in p for p in parts):
            return _edges_for(parts, self.steps)
        others = sorted(b for p in parts for b in p if b != z)
        u, v = others
        if self.fixed[u - 1] == self.fixed[v - 1]:
            return [(u, v, BLUE), (u, z, GREEN)]
        return [(u, z, GREEN), (v, z, GREEN)]

    def witness(self):
        if self.fixed is not None:
            return self.fixed
        picked = self._pick_third()
        if picked is None:
            return None
        z, s = picked
        return tuple(3 if b == z else c for b, c in enumerate(s, start=1))
