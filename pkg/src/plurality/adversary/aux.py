"""The Adversary's red/blue/green bookkeeping graph."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

RED, BLUE, GREEN = "red", "blue", "green"
COLORS = (RED, BLUE, GREEN)


@dataclass(frozen=True, order=True)
class Edge:
    u: int
    v: int
    color: str
    step: int

    @property
    def pair(self) -> tuple[int, int]:
        return (self.u, self.v)


def edge(u: int, v: int, color: str, step: int) -> Edge:
    return Edge(min(u, v), max(u, v), color, step)


def edge_weights(k: int) -> dict[str, Fraction]:
    return {
        BLUE: Fraction(1, k - 1),
        RED: Fraction(1, (k - 1) ** 2),
        GREEN: Fraction(1, k - 1),
    }


@dataclass
class ComponentInfo:
    vertices: tuple[int, ...]
    side_x: tuple[int, ...]
    side_y: tuple[int, ...]
    red_edges: int
    bipartite: bool = True

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def signed_imbalance(self) -> int:
        return len(self.side_x) - len(self.side_y)

    @property
    def imbalance(self) -> int:
        return abs(self.signed_imbalance)

    @property
    def deficient(self) -> bool:
        return self.red_edges == self.size - 1


@dataclass
class AuxGraph:
    """Edge-colored multigraph on balls 1..n.

    The k=3 strategies draw one edge per pair of an answer even if it is
    already present (a multigraph); the general-k strategy skips duplicates.
    """

    n: int
    k: int
    edges: list[Edge] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.weights = edge_weights(self.k)
        self._present: Counter = Counter((e.u, e.v, e.color) for e in self.edges)
        self._deg = {c: [0] * (self.n + 1) for c in COLORS}
        for e in self.edges:
            self._deg[e.color][e.u] += 1
            self._deg[e.color][e.v] += 1

    def add(self, u: int, v: int, color: str, step: int, dedupe: bool = False) -> bool:
        if u == v:
            raise ValueError(f"self-loop on ball {u}")
        e = edge(u, v, color, step)
        if dedupe and self._present[(e.u, e.v, color)]:
            return False
        self.edges.append(e)
        self._present[(e.u, e.v, color)] += 1
        self._deg[color][u] += 1
        self._deg[color][v] += 1
        return True

    def remove(self, e: Edge) -> None:
        self.edges.remove(e)
        self._present[(e.u, e.v, e.color)] -= 1
        self._deg[e.color][e.u] -= 1
        self._deg[e.color][e.v] -= 1

    def recolor(self, e: Edge, color: str) -> Edge:
        self.remove(e)
        new = Edge(e.u, e.v, color, e.step)
        self.edges.append(new)
        self._present[(new.u, new.v, color)] += 1
        self._deg[color][new.u] += 1
        self._deg[color][new.v] += 1
        return new

    def has(self, u: int, v: int, color: str) -> bool:
        return self._present[(min(u, v), max(u, v), color)] > 0

    def degree(self, ball: int, color: str) -> int:
        return self._deg[color][ball]

    def counts(self) -> dict[str, int]:
        c = Counter(e.color for e in self.edges)
        return {col: c.get(col, 0) for col in COLORS}

    def total_weight(self) -> Fraction:
        return sum((self.weights[e.color] for e in self.edges), Fraction(0))

    def weight_of(self, edges) -> Fraction:
        return sum((self.weights[e.color] for e in edges), Fraction(0))

    def snapshot(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    def copy(self) -> AuxGraph:
        return AuxGraph(self.n, self.k, list(self.edges))

    def components(self, colors=(RED, BLUE, GREEN)) -> list[tuple[int, ...]]:
        """Connected components using only edges of the given colors."""
        parent = list(range(self.n + 1))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            if e.color in colors:
                ru, rv = find(e.u), find(e.v)
                if ru != rv:
                    parent[max(ru, rv)] = min(ru, rv)
        groups: dict[int, list[int]] = defaultdict(list)
        for b in range(1, self.n + 1):
            groups[find(b)].append(b)
        return sorted(tuple(g) for g in groups.values())

    def red_components(self) -> list[ComponentInfo]:
        """Components of the red subgraph with their bipartition and red-edge count."""
        adj: dict[int, list[int]] = defaultdict(list)
        for e in self.edges:
            if e.color == RED:
                adj[e.u].append(e.v)
                adj[e.v].append(e.u)
        side: dict[int, int] = {}
        groups = []
        for start in range(1, self.n + 1):
            if start in side:
                continue
            side[start] = 0
            stack, verts, ok = [start], [], True
            while stack:
                v = stack.pop()
                verts.append(v)
                for w in adj[v]:
                    if w not in side:
                        side[w] = 1 - side[v]
                        stack.append(w)
                    elif side[w] == side[v]:
                        ok = False
            groups.append((sorted(verts), ok))
        comp_of = {v: i for i, (verts, _) in enumerate(groups) for v in verts}
        red_count: Counter = Counter(comp_of[e.u] for e in self.edges if e.color == RED)
        out = []
        for i, (verts, ok) in enumerate(groups):
            out.append(ComponentInfo(
                vertices=tuple(verts),
                side_x=tuple(v for v in verts if side[v] == 0),
                side_y=tuple(v for v in verts if side[v] == 1),
                red_edges=red_count[i],
                bipartite=ok,
            ))
        return out

    def to_dot(self, name: str = "aux") -> str:
        """Graphviz text: one cluster per component, labelled with its imbalance."""
        comps = self.red_components()
        lines = [f"graph {name} {{", "  node [shape=circle];"]
        for i, comp in enumerate(comps):
            lines.append(f"  subgraph cluster_{i} {{")
            lines.append(f'    label="d={comp.imbalance}";')
            for v in comp.vertices:
                lines.append(f"    {v};")
            lines.append("  }")
        for e in sorted(self.edges):
            lines.append(f"  {e.u} -- {e.v} [color={e.color}];")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> list[list]:
        return [[e.u, e.v, e.color, e.step] for e in sorted(self.edges)]

    @classmethod
    def from_json(cls, n: int, k: int, data) -> AuxGraph:
        return cls(n, k, [Edge(int(u), int(v), str(c), int(s)) for u, v, c, s in data])
