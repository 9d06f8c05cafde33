"""Exact game values for tiny n, and the closed-form bounds they are checked against."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product

from .core import ConstraintGraph, GameConfig, Goal, all_partitions, apply_answer
from .search import has_consistent, resolution

DEFAULT_LIMIT = 6
DEFAULT_MAX_STATES = 2_000_000


# ---------------------------------------------------------------- bounds


def _log2_at_least(n: int, m: Fraction) -> bool:
    """Exact test of log2(n) >= m."""
    if m <= 0:
        return True
    return n**m.denominator >= 2**m.numerator


@dataclass(frozen=True)
class BoundPair:
    """lower = lower_rational - lower_log * log2(n); upper is rational."""

    n: int
    k: int
    lower_rational: Fraction
    upper: Fraction
    lower_log: Fraction = Fraction(0)
    theorem: int = 1

    @property
    def lower(self) -> Fraction | float:
        if self.lower_log == 0:
            return self.lower_rational
        return float(self.lower_rational) - float(self.lower_log) * math.log2(self.n)

    def lower_at_most(self, m: int | Fraction) -> bool:
        """Exact test of lower <= m."""
        if self.lower_log == 0:
            return self.lower_rational <= m
        # a - b log2 n <= m  <=>  log2 n >= (a - m) / b
        return _log2_at_least(self.n, (self.lower_rational - Fraction(m)) / self.lower_log)

    @property
    def ceil_lower(self) -> int:
        m = math.ceil(self.lower_rational)
        while self.lower_at_most(m - 1):
            m -= 1
        return m

    @property
    def bracket(self) -> tuple[int, int]:
        return self.ceil_lower, math.floor(self.upper)

    def describe_lower(self) -> str:
        if self.lower_log == 0:
            return str(self.lower_rational)
        return f"{self.lower_rational} - {self.lower_log}*log2({self.n})"

    def to_json(self) -> dict:
        lo, hi = self.bracket
        return {
            "n": self.n,
            "k": self.k,
            "theorem": self.theorem,
            "lower": self.describe_lower(),
            "lower_value": float(self.lower),
            "upper": str(self.upper),
            "bracket": [lo, hi],
        }


def bounds(config: GameConfig, goal: Goal | str = Goal.PLURALITY, theorem: int | None = None) -> BoundPair:
    """Closed-form bounds on A_p (the same expressions bound A_c).

    ``theorem`` picks the general-k expressions (1) or the k = 3 ones (2);
    by default k = 3 uses 2 and every other k uses 1.
    """
    Goal(goal)
    n, k = config.n, config.k
    if theorem is None:
        theorem = 2 if k == 3 else 1
    if theorem == 2:
        if k != 3:
            raise ValueError(f"the k=3 bounds need k=3, got k={k}")
        upper = Fraction(3 * n, 4) - Fraction(1, 2)
        if n % 2 == 0:
            if n < 4:
                raise ValueError("the even k=3 bounds need n >= 4")
            return BoundPair(n, k, Fraction(3 * n, 4) - 2, upper, theorem=2)
        return BoundPair(n, k, Fraction(3 * n, 4) - 5, upper, lower_log=Fraction(1, 2), theorem=2)
    if theorem != 1:
        raise ValueError(f"theorem must be 1 or 2, got {theorem}")
    upper = Fraction(-(-(n - 1) // (k - 1)) + -(-(n - 1) // (k - 1) ** 2))
    if n % 2 == 0:
        lower = Fraction(n - 2, k - 1) + Fraction(n, 2 * (k - 1) ** 2)
    else:
        lower = Fraction(n - 5, k - 1) + Fraction(n - k, 2 * (k - 1) ** 2)
    return BoundPair(n, k, lower, upper, theorem=1)


def k3_strategy_bound(n: int) -> int:
    """Query count of the two-phase k = 3 strategy in the worst case."""
    return -(-(n - 1) // 2) + -(-((n - 1) // 2 - 1) // 2)


# ---------------------------------------------------------------- canonical states


def _touched_flags(g: ConstraintGraph) -> dict[int, bool]:
    return {r: any(b in g.touched for b in bs) for r, bs in g.classes().items()}


def canonical_state(g: ConstraintGraph) -> tuple:
    """Encoding of (eq-partition, uneq pairs, touched balls) up to relabeling the balls.

    Classes get an isomorphism-invariant colour by iterated refinement; the
    encoding is the smallest one over all orderings that respect those colours.
    """
    classes = g.classes()
    nodes = sorted(classes)
    touched = _touched_flags(g)
    adj = g.adjacency()
    colour = {r: (len(classes[r]), touched[r]) for r in nodes}
    while True:
        sig = {r: (colour[r], tuple(sorted(colour[s] for s in adj[r]))) for r in nodes}
        ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new = {r: ranks[sig[r]] for r in nodes}
        if len(set(new.values())) == len(set(colour.values())):
            colour = new
            break
        colour = new
    cells: dict[int, list[int]] = {}
    for r in nodes:
        cells.setdefault(colour[r], []).append(r)
    order = [cells[c] for c in sorted(cells)]
    labels = tuple((len(classes[r]), touched[r]) for cell in order for r in cell)
    best = None
    for perms in product(*(permutations(cell) for cell in order)):
        seq = [r for p in perms for r in p]
        pos = {r: i for i, r in enumerate(seq)}
        edges = tuple(sorted((min(pos[a], pos[b]), max(pos[a], pos[b])) for a, b in g.uneq))
        if best is None or edges < best:
            best = edges
    return (g.n, labels, best)


def relabel(g: ConstraintGraph, perm: dict[int, int]) -> ConstraintGraph:
    """The same state with ball b renamed perm[b]."""
    groups = [[perm[b] for b in bs] for bs in g.classes().values()]
    out = ConstraintGraph.empty(g.n)
    for grp in groups:
        if len(grp) > 1:
            out = apply_answer(out, grp, [grp])
    pairs = [(perm[a], perm[b]) for a, b in g.uneq]
    for a, b in pairs:
        out = apply_answer(out, (a, b), [(a,), (b,)])
    touched = frozenset(perm[b] for b in g.touched)
    return ConstraintGraph(out.n, out.rep, out.uneq, touched, out.contradictory)


# ---------------------------------------------------------------- solver


class StateSpaceTooLarge(ValueError):
    pass


@dataclass
class SolveResult:
    value: int
    nodes: int
    states: int
    seconds: float

    def to_json(self) -> dict:
        return {"value": self.value, "nodes": self.nodes, "states": self.states, "seconds": round(self.seconds, 3)}


def estimate_states(n: int) -> int:
    """Loose upper estimate of canonical states: set partitions times uneq graphs, over n!."""
    bell = [1]
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
        bell.append(row[0])
    return max(1, bell[n] * 2 ** (n * (n - 1) // 2) * 2**n // math.factorial(n))


class _Solver:
    def __init__(self, config: GameConfig, goal: Goal, max_states: int, memo: bool) -> None:
        self.config = config
        self.goal = goal
        self.max_states = max_states
        self.memo = memo
        self.nodes = 0
        self.lower: dict[tuple, int] = {}  # value > lower[key] - 1, i.e. value >= lower
        self.upper: dict[tuple, int] = {}
        self.resolved: dict[tuple, bool] = {}

    def _key(self, g: ConstraintGraph) -> tuple:
        return canonical_state(g)

    def _is_resolved(self, g: ConstraintGraph, key) -> bool:
        hit = self.resolved.get(key)
        if hit is None:
            hit = resolution(g, self.goal).resolved
            if self.memo:
                self.resolved[key] = hit
                if len(self.resolved) > self.max_states:
                    raise StateSpaceTooLarge(f"more than {self.max_states} states visited")
        return hit

    def queries(self, g: ConstraintGraph) -> list[tuple[int, ...]]:
        """Queries up to swapping interchangeable balls (same class, or untouched and unconstrained)."""
        adj = g.adjacency()
        groups: dict[tuple, list[int]] = {}
        for r, bs in sorted(g.classes().items()):
            free = len(bs) == 1 and not adj[r]
            key = ("free", bs[0] in g.touched) if free else ("class", r)
            groups.setdefault(key, []).extend(bs)
        pools = list(groups.values())
        k = self.config.k
        out = []

        def rec(i: int, left: int, chosen: list[int]) -> None:
            if left == 0:
                out.append(tuple(sorted(chosen)))
                return
            if i == len(pools):
                return
            for take in range(min(left, len(pools[i])), -1, -1):
                rec(i + 1, left - take, chosen + pools[i][:take])

        rec(0, k, [])
        return out

    def children(self, g: ConstraintGraph, q) -> list[ConstraintGraph]:
        out = []
        for parts in all_partitions(q, 3):
            child = apply_answer(g, q, parts)
            if not child.contradictory and has_consistent(child):
                out.append(child)
        return out

    def can_solve(self, g: ConstraintGraph, depth: int) -> bool:
        self.nodes += 1
        key = self._key(g)
        if self._is_resolved(g, key):
            return True
        if self.lower.get(key, 1) > depth:
            return False
        if self.upper.get(key, 10**9) <= depth:
            return True
        if depth == 0:
            ok = False
        else:
            ok = False
            for q in self.queries(g):
                if all(self.can_solve(c, depth - 1) for c in self.children(g, q)):
                    ok = True
                    break
        if self.memo:
            if ok:
                self.upper[key] = min(self.upper.get(key, 10**9), depth)
            else:
                self.lower[key] = max(self.lower.get(key, 1), depth + 1)
        return ok


def solve(
    config: GameConfig,
    goal: Goal | str = Goal.PLURALITY,
    limit: int = DEFAULT_LIMIT,
    max_states: int = DEFAULT_MAX_STATES,
    memo: bool = True,
) -> SolveResult:
    """Worst-case optimal number of queries (A_p for Plurality, A_c for Partition).

    Iterative deepening from 0: the first depth at which the empty state is
    solvable is the value.
    """
    goal = Goal(goal)
    if config.n > limit:
        raise StateSpaceTooLarge(
            f"n={config.n} is above the solver limit {limit}; "
            f"roughly up to {estimate_states(config.n):.3g} canonical states"
        )
    start = time.perf_counter()
    s = _Solver(config, goal, max_states, memo)
    root = ConstraintGraph.empty(config.n)
    depth = 0
    while not s.can_solve(root, depth):
        depth += 1
    states = len(set(s.resolved) | set(s.lower) | set(s.upper))
    return SolveResult(depth, s.nodes, states, time.perf_counter() - start)
