"""Two-colorings with prescribed class sizes.

Every constraint component that is bipartite has exactly two 2-colorings, so a
2-coloring of all balls is a choice of orientation per component. Class sizes
then become a signed subset sum over the component imbalances, which is decided
with a bitset DP. An optional flag tracks whether some marked ball (a "forced"
ball) ends up in the larger class.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .core import ConstraintGraph


@dataclass(frozen=True)
class Item:
    """One component seen through its two orientations.

    In orientation ``+1`` the parity-0 side goes to the larger class X and the
    component contributes ``od`` to |X| - |Y|; orientation ``-1`` contributes ``-od``.
    ``flag_plus``/``flag_minus`` say whether a marked ball lands in X.
    """

    od: int
    flag_plus: bool = False
    flag_minus: bool = False


@dataclass
class Component:
    side0: list[int]
    side1: list[int]

    @property
    def od(self) -> int:
        return len(self.side0) - len(self.side1)

    @property
    def first(self) -> int:
        return min(min(self.side0, default=10**9), min(self.side1, default=10**9))


def components(g: ConstraintGraph) -> list[Component] | None:
    """Bipartition each constraint component; None if some component is not bipartite."""
    adj = g.adjacency()
    classes = g.classes()
    parity: dict[int, int] = {}
    out = []
    for root in sorted(adj):
        if root in parity:
            continue
        parity[root] = 0
        comp = Component([], [])
        todo = deque([root])
        while todo:
            r = todo.popleft()
            (comp.side0 if parity[r] == 0 else comp.side1).extend(classes[r])
            for s in adj[r]:
                if s not in parity:
                    parity[s] = 1 - parity[r]
                    todo.append(s)
                elif parity[s] == parity[r]:
                    return None
        comp.side0.sort()
        comp.side1.sort()
        out.append(comp)
    return out


def _step(m0: int, m1: int, item: Item) -> tuple[int, int]:
    d = item.od
    if d >= 0:
        up0, up1, down0, down1 = m0 << d, m1 << d, m0 >> d, m1 >> d
    else:
        up0, up1, down0, down1 = m0 >> -d, m1 >> -d, m0 << -d, m1 << -d
    new0 = (0 if item.flag_plus else up0) | (0 if item.flag_minus else down0)
    new1 = up1 | down1 | (up0 if item.flag_plus else 0) | (down0 if item.flag_minus else 0)
    return new0, new1


def feasible(items: list[Item], target: int, need_flag: bool = False) -> bool:
    """Is there an orientation with signed sum ``target`` (and a flagged ball in X if asked)?"""
    offset = sum(abs(it.od) for it in items)
    if abs(target) > offset:
        return False
    m0, m1 = 1 << offset, 0
    for it in items:
        m0, m1 = _step(m0, m1, it)
    bit = 1 << (target + offset)
    return bool(m1 & bit) or (not need_flag and bool(m0 & bit))


def choose_orientations(items: list[Item], target: int, need_flag: bool = False) -> list[int] | None:
    """Orientations (+1/-1) reaching ``target``, preferring +1 earliest; None if impossible."""
    offset = sum(abs(it.od) for it in items)
    if abs(target) > offset:
        return None
    # suffix[i] = reachable (no-flag, flag) masks using items[i:], starting from 0
    suffix = [(1 << offset, 0)]
    for it in reversed(items):
        suffix.append(_step(*suffix[-1], it))
    suffix.reverse()
    total, flagged = 0, False
    out = []
    for i, it in enumerate(items):
        rest0, rest1 = suffix[i + 1]
        for sign in (1, -1):
            s = total + sign * it.od
            f = flagged or (it.flag_plus if sign == 1 else it.flag_minus)
            rem = target - s + offset
            if not 0 <= rem <= 2 * offset:
                continue
            bit = 1 << rem
            ok = bool(rest1 & bit) or ((f or not need_flag) and bool(rest0 & bit))
            if ok:
                total, flagged = s, f
                out.append(sign)
                break
        else:
            return None
    return out


def _items(comps: list[Component], marked: frozenset[int]) -> list[Item]:
    return [
        Item(c.od, bool(marked.intersection(c.side0)), bool(marked.intersection(c.side1)))
        for c in comps
    ]


def _target(n: int, sizes: tuple[int, int]) -> int:
    s1, s2 = sizes
    if s1 < 0 or s2 < 0 or s1 + s2 != n:
        raise ValueError(f"class sizes {sizes} do not add up to n={n}")
    return abs(s1 - s2)


def exists_two_coloring(
    g: ConstraintGraph,
    sizes: tuple[int, int],
    forced: int | None = None,
) -> bool:
    """Does some 2-coloring with class sizes ``sizes`` satisfy every constraint?

    If ``forced`` is a ball, it must lie in the class of size max(sizes).
    """
    return exists_two_coloring_any(g, sizes, () if forced is None else (forced,), forced is not None)


def exists_two_coloring_any(
    g: ConstraintGraph,
    sizes: tuple[int, int],
    candidates,
    need: bool = True,
) -> bool:
    """Like :func:`exists_two_coloring`, with at least one of ``candidates`` in the larger class."""
    target = _target(g.n, sizes)
    if g.contradictory:
        return False
    comps = components(g)
    if comps is None:
        return False
    marked = frozenset(candidates)
    if need and not marked:
        return False
    if need and target == 0:
        # both classes are "larger"; any marked ball qualifies
        need = False
    return feasible(_items(comps, marked), target, need)


def find_two_coloring(
    g: ConstraintGraph,
    sizes: tuple[int, int],
    candidates=(),
) -> tuple[int, ...] | None:
    """Lexicographically smallest witness: color 1 = larger class (contains a candidate if given)."""
    target = _target(g.n, sizes)
    if g.contradictory:
        return None
    comps = components(g)
    if comps is None:
        return None
    comps.sort(key=lambda c: c.first)
    marked = frozenset(candidates)
    need = bool(marked) and target != 0
    items = []
    for c in comps:
        # flip so that orientation +1 puts the component's smallest ball in X
        if c.side0 and (not c.side1 or c.side0[0] < c.side1[0]):
            items.append((c, Item(c.od, bool(marked & set(c.side0)), bool(marked & set(c.side1))), False))
        else:
            items.append((c, Item(-c.od, bool(marked & set(c.side1)), bool(marked & set(c.side0))), True))
    signs = choose_orientations([it for _, it, _ in items], target, need)
    if signs is None:
        return None
    colors = [0] * g.n
    for (c, _, flipped), sign in zip(items, signs):
        x_side, y_side = (c.side0, c.side1) if (sign == 1) != flipped else (c.side1, c.side0)
        for b in x_side:
            colors[b - 1] = 1
        for b in y_side:
            colors[b - 1] = 2
    return tuple(colors)
