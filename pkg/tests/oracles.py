"""Brute-force reference implementations the tests compare against.

Nothing here imports the search or DP code under test; the only shared pieces
are the plain data types (ConstraintGraph fields, Resolution).
"""

from __future__ import annotations

import random
from collections import Counter
from itertools import product

from plurality.core import ConstraintGraph, Goal, Resolution, ResolutionKind


def consistent(n: int, answers) -> list[tuple[int, ...]]:
    """Every coloring in {1,2,3}^n that reproduces each (query, parts) answer."""
    out = []
    for col in product((1, 2, 3), repeat=n):
        if all(_agrees(col, q, parts) for q, parts in answers):
            out.append(col)
    return out


def _agrees(col, query, parts) -> bool:
    part_of = {b: i for i, p in enumerate(parts) for b in p}
    for a in query:
        for b in query:
            if (col[a - 1] == col[b - 1]) != (part_of[a] == part_of[b]):
                return False
    return True


def quotient_colorings(g: ConstraintGraph) -> list[tuple[int, ...]]:
    """All consistent colorings of g, by trying every color for every class representative."""
    if g.contradictory:
        return []
    reps = sorted(set(g.rep[1:]))
    out = []
    for cs in product((1, 2, 3), repeat=len(reps)):
        color = dict(zip(reps, cs))
        if any(color[a] == color[b] for a, b in g.uneq):
            continue
        out.append(tuple(color[g.rep[b]] for b in range(1, g.n + 1)))
    return out


def dpll_satisfiable(g: ConstraintGraph) -> bool:
    """Unit-propagating 3-coloring search on the quotient, written as a tiny DPLL."""
    if g.contradictory:
        return False
    reps = sorted(set(g.rep[1:]))
    adj = {r: set() for r in reps}
    for a, b in g.uneq:
        adj[a].add(b)
        adj[b].add(a)

    def solve(domains: dict[int, set[int]]) -> bool:
        domains = {r: set(d) for r, d in domains.items()}
        changed = True
        while changed:
            changed = False
            for r, d in domains.items():
                if not d:
                    return False
                if len(d) == 1:
                    (c,) = d
                    for s in adj[r]:
                        if c in domains[s]:
                            domains[s].discard(c)
                            changed = True
        if any(not d for d in domains.values()):
            return False
        open_ = [r for r, d in domains.items() if len(d) > 1]
        if not open_:
            return all(domains[a] != domains[b] for a, b in g.uneq)
        r = min(open_, key=lambda v: len(domains[v]))
        for c in sorted(domains[r]):
            trial = dict(domains)
            trial[r] = {c}
            if solve(trial):
                return True
        return False

    return solve({r: {1, 2, 3} for r in reps})


def _top(col) -> frozenset[int] | None:
    cnt = Counter(col)
    best = max(cnt.values())
    winners = [c for c, v in cnt.items() if v == best]
    if len(winners) > 1:
        return None
    return frozenset(i + 1 for i, c in enumerate(col) if c == winners[0])


def _classes(col) -> tuple:
    groups: dict[int, list[int]] = {}
    for i, c in enumerate(col, start=1):
        groups.setdefault(c, []).append(i)
    return tuple(sorted(tuple(v) for v in groups.values()))


def resolution_by_enumeration(colorings, n: int, goal: Goal) -> Resolution:
    """Resolution straight from its definition over an explicit list of colorings."""
    if not colorings:
        return Resolution(ResolutionKind.UNRESOLVED)
    if goal is Goal.PARTITION:
        shapes = {_classes(c) for c in colorings}
        if len(shapes) == 1:
            return Resolution(ResolutionKind.PARTITION, classes=shapes.pop())
        return Resolution(ResolutionKind.UNRESOLVED)
    tops = [_top(c) for c in colorings]
    if all(t is None for t in tops):
        return Resolution(ResolutionKind.NO_PLURALITY)
    if any(t is None for t in tops):
        return Resolution(ResolutionKind.UNRESOLVED)
    common = frozenset.intersection(*tops)
    if common:
        return Resolution(ResolutionKind.PLURALITY_BALL, ball=min(common))
    return Resolution(ResolutionKind.UNRESOLVED)


def two_coloring_brute(g: ConstraintGraph, sizes: tuple[int, int], forced: int | None = None) -> bool:
    """Try every 2-coloring of the classes; class 1 is the one of size max(sizes)."""
    if g.contradictory:
        return False
    big, small = max(sizes), min(sizes)
    reps = sorted(set(g.rep[1:]))
    weight = Counter(g.rep[1:])
    for cs in product((1, 2), repeat=len(reps)):
        color = dict(zip(reps, cs))
        if any(color[a] == color[b] for a, b in g.uneq):
            continue
        ones = sum(weight[r] for r in reps if color[r] == 1)
        if ones != big:
            continue
        if forced is not None and big != small and color[g.rep[forced]] != 1:
            continue
        return True
    return False


def minimax(n: int, k: int, goal: Goal, depth: int = 6) -> int | None:
    """Game value computed on knowledge states, i.e. sets of still-consistent colorings.

    The questioner's knowledge after any history is exactly the set of colorings
    that agree with it, so recursing over those sets (memoized, no symmetry
    reduction) gives the worst-case number of queries. None if above ``depth``.
    """
    from functools import lru_cache
    from itertools import combinations

    queries = list(combinations(range(1, n + 1), k))

    def answer(col, q):
        groups: dict[int, list[int]] = {}
        for b in q:
            groups.setdefault(col[b - 1], []).append(b)
        return tuple(sorted(tuple(v) for v in groups.values()))

    @lru_cache(maxsize=None)
    def value(state: frozenset, d: int) -> int | None:
        if resolution_by_enumeration(sorted(state), n, goal).resolved:
            return 0
        if d == 0:
            return None
        best = None
        for q in queries:
            split: dict[tuple, list] = {}
            for col in state:
                split.setdefault(answer(col, q), []).append(col)
            if len(split) == 1:
                continue
            worst = 0
            for group in split.values():
                v = value(frozenset(group), d - 1)
                if v is None:
                    worst = None
                    break
                worst = max(worst, v + 1)
            if worst is not None and (best is None or worst < best):
                best = worst
        return best

    for d in range(depth + 1):
        v = value(frozenset(product((1, 2, 3), repeat=n)), d)
        if v is not None:
            return v
    return None


def random_answers(n: int, k: int, steps: int, rng: random.Random):
    """A hidden coloring and the honest answers to ``steps`` random queries."""
    col = tuple(rng.randint(1, 3) for _ in range(n))
    hist = []
    for _ in range(steps):
        q = tuple(sorted(rng.sample(range(1, n + 1), k)))
        groups: dict[int, list[int]] = {}
        for b in q:
            groups.setdefault(col[b - 1], []).append(b)
        hist.append((q, tuple(sorted(tuple(v) for v in groups.values()))))
    return col, hist
