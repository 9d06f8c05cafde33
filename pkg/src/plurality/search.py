"""Searches over the colorings consistent with a constraint graph."""

from __future__ import annotations

from collections import deque
from itertools import permutations

from .core import (
    UNRESOLVED,
    ConstraintGraph,
    Coloring,
    Goal,
    Resolution,
    ResolutionKind,
    classes_of,
)

Triple = tuple[int, int, int]
_PERMS = list(permutations(range(3)))


def enumerate_consistent(g: ConstraintGraph, limit: int | None = None) -> list[Coloring]:
    """Consistent colorings in lexicographic order of the representatives' colors."""
    if g.contradictory or (limit is not None and limit <= 0):
        return []
    adj = g.adjacency()
    nodes = sorted(adj)
    earlier = [[nodes.index(m) for m in adj[v] if m < v] for v in nodes]
    colors = [0] * len(nodes)
    found: list[list[int]] = []

    def rec(i: int) -> bool:
        if i == len(nodes):
            found.append(colors.copy())
            return limit is not None and len(found) >= limit
        taken = {colors[j] for j in earlier[i]}
        for c in (1, 2, 3):
            if c not in taken:
                colors[i] = c
                if rec(i + 1):
                    return True
        return False

    rec(0)
    index = {v: i for i, v in enumerate(nodes)}
    return [tuple(cs[index[g.rep[b]]] for b in range(1, g.n + 1)) for cs in found]


def has_consistent(g: ConstraintGraph) -> bool:
    return bool(enumerate_consistent(g, 1))


def _quotient_components(g: ConstraintGraph) -> list[list[int]]:
    adj = g.adjacency()
    seen: set[int] = set()
    out = []
    for r in sorted(adj):
        if r in seen:
            continue
        seen.add(r)
        comp, todo = [], deque([r])
        while todo:
            v = todo.popleft()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        out.append(comp)
    return out


def _component_triples(g: ConstraintGraph, comp: list[int], sizes: dict[int, int], start: int) -> set[Triple]:
    """Class-size triples of this component's colorings that give ``start`` color 1.

    Dynamic programming along a BFS order; the state keeps only the colors of
    nodes that still have uncolored neighbours.
    """
    adj = g.adjacency()
    order, seen, todo = [], {start}, deque([start])
    while todo:
        v = todo.popleft()
        order.append(v)
        for w in sorted(adj[v]):
            if w not in seen:
                seen.add(w)
                todo.append(w)
    pos = {v: i for i, v in enumerate(order)}
    last = {v: max([pos[v]] + [pos[w] for w in adj[v]]) for v in order}

    active: list[int] = []
    states: set[tuple] = {((), 0, 0, 0)}
    for i, v in enumerate(order):
        nbr_idx = [j for j, u in enumerate(active) if u in adj[v]]
        keep = [j for j, u in enumerate(active) if last[u] > i]
        push = last[v] > i
        choices = (0,) if i == 0 else (0, 1, 2)
        sz = sizes[v]
        nxt = set()
        for cols, a, b, c in states:
            taken = {cols[j] for j in nbr_idx}
            for col in choices:
                if col in taken:
                    continue
                new_cols = tuple(cols[j] for j in keep) + ((col,) if push else ())
                if col == 0:
                    nxt.add((new_cols, a + sz, b, c))
                elif col == 1:
                    nxt.add((new_cols, a, b + sz, c))
                else:
                    nxt.add((new_cols, a, b, c + sz))
        states = nxt
        active = [active[j] for j in keep] + ([v] if push else [])
    return {(a, b, c) for _, a, b, c in states}


def _all_perms(triples: set[Triple]) -> set[Triple]:
    return {tuple(t[p] for p in perm) for t in triples for perm in _PERMS}  # type: ignore[misc]


def _combine(left: set[Triple], right: set[Triple]) -> set[Triple]:
    return {(a[0] + b[0], a[1] + b[1], a[2] + b[2]) for a in left for b in right}


def _unique_max(t: Triple) -> bool:
    m = max(t)
    return t.count(m) == 1


def size_profiles(g: ConstraintGraph) -> set[Triple]:
    """All (|C1|, |C2|, |C3|) realised by consistent colorings."""
    if g.contradictory:
        return set()
    sizes = {r: len(bs) for r, bs in g.classes().items()}
    total: set[Triple] = {(0, 0, 0)}
    for comp in _quotient_components(g):
        total = _combine(total, _all_perms(_component_triples(g, comp, sizes, comp[0])))
        if not total:
            break
    return total


def resolution(g: ConstraintGraph, goal: Goal = Goal.PLURALITY) -> Resolution:
    """What a Questioner can correctly output now, if anything."""
    if g.contradictory:
        raise ValueError("resolution is undefined on a contradictory constraint graph")
    if Goal(goal) is Goal.PARTITION:
        return _partition_resolution(g)

    sizes = {r: len(bs) for r, bs in g.classes().items()}
    comps = _quotient_components(g)
    full = [_all_perms(_component_triples(g, comp, sizes, comp[0])) for comp in comps]
    total: set[Triple] = {(0, 0, 0)}
    for t in full:
        total = _combine(total, t)
    if not total:
        raise ValueError("no coloring is consistent with the constraint graph")
    with_plurality = any(_unique_max(t) for t in total)
    if not with_plurality:
        return Resolution(ResolutionKind.NO_PLURALITY)
    if not all(_unique_max(t) for t in total):
        return UNRESOLVED

    checked: set[int] = set()
    for ball in range(1, g.n + 1):
        r = g.rep[ball]
        if r in checked:
            continue
        checked.add(r)
        if _always_top(g, comps, full, sizes, r):
            return Resolution(ResolutionKind.PLURALITY_BALL, ball=ball)
    return UNRESOLVED


def _always_top(g: ConstraintGraph, comps, full, sizes, r: int) -> bool:
    ci = next(i for i, comp in enumerate(comps) if r in comp)
    own = _component_triples(g, comps[ci], sizes, r)
    prof: set[Triple] = own | {(a, c, b) for a, b, c in own}
    for j, t in enumerate(full):
        if j != ci:
            prof = _combine(prof, t)
    # the ball's class is color 1 in every triple of prof
    return all(t[0] > t[1] and t[0] > t[2] for t in prof)


def always_plurality(g: ConstraintGraph, ball: int) -> bool:
    """Is ``ball`` a plurality ball in every consistent coloring (and is there one)?"""
    if g.contradictory:
        return False
    sizes = {r: len(bs) for r, bs in g.classes().items()}
    comps = _quotient_components(g)
    full = [_all_perms(_component_triples(g, comp, sizes, comp[0])) for comp in comps]
    if not all(full):
        return False
    return _always_top(g, comps, full, sizes, g.rep[ball])


def _partition_resolution(g: ConstraintGraph) -> Resolution:
    first = enumerate_consistent(g, 1)
    if not first:
        raise ValueError("no coloring is consistent with the constraint graph")
    used = len(set(first[0]))
    labelings = 3 if used == 1 else 6
    if len(enumerate_consistent(g, labelings + 1)) == labelings:
        return Resolution(ResolutionKind.PARTITION, classes=classes_of(first[0]))
    return UNRESOLVED
