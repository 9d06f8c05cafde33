"""Exit criteria. Each test prints one PASS/FAIL line (collected in the terminal summary).

Every bound is compared in exact integer or rational arithmetic; the tolerance
is zero throughout. Runtime targets are reported next to the measured time
but are not asserted.
"""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction

import pytest

from oracles import minimax, two_coloring_brute, resolution_by_enumeration
from plurality.adversary import Odd3Adversary, audit, make_adversary, variant_for
from plurality.adversary.aux import BLUE, RED
from plurality.adversary.base import CONDITIONED
from plurality.core import ConstraintGraph, GameConfig, Goal, apply_answer, partition_by_coloring
from plurality.engine import GameMode, play, run_game, verify_transcript
from plurality.oracle import bounds, canonical_state, relabel, solve
from plurality.questioner import make_questioner
from plurality.search import resolution
from plurality.twocolor import exists_two_coloring

pytestmark = pytest.mark.acceptance

RANDOM_ADVERSARIES = 200
FIXED_ADVERSARIES = 20
RANDOM_QUESTIONERS = 500


def verdict(report_line, name: str, ok: bool, detail: str, seconds: float, target: float | None = None) -> None:
    timing = f"{seconds:.1f}s" + (f" (target < {target:.0f}s)" if target is not None else "")
    report_line(f"{'PASS' if ok else 'FAIL'} {name}: {detail}; {timing}")


def ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def strategy_bound(n: int) -> int:
    """ceil((n-1)/2) + ceil((floor((n-1)/2) - 1)/2), in integers."""
    return ceil_frac(Fraction(n - 1, 2)) + ceil_frac(Fraction((n - 1) // 2 - 1, 2))


def odd_lower_ceiling(n: int) -> int:
    """ceil(3n/4 - log2(n)/2 - 5), found without floating point.

    m >= 3n/4 - 5 - log2(n)/2  <=>  2(3n/4 - 5 - m) <= log2 n  <=>  n**q >= 2**p for p/q = 2(3n/4-5-m).
    """

    def at_least(m: int) -> bool:
        x = 2 * (Fraction(3 * n, 4) - 5 - m)
        return x <= 0 or n**x.denominator >= 2**x.numerator

    m = ceil_frac(Fraction(3 * n, 4) - 5)
    while at_least(m - 1):
        m -= 1
    return m


def theorem1_bracket(n: int, k: int) -> tuple[int, int]:
    if n % 2 == 0:
        lower = Fraction(n - 2, k - 1) + Fraction(n, 2 * (k - 1) ** 2)
    else:
        lower = Fraction(n - 5, k - 1) + Fraction(n - k, 2 * (k - 1) ** 2)
    upper = ceil_frac(Fraction(n - 1, k - 1)) + ceil_frac(Fraction(n - 1, (k - 1) ** 2))
    return ceil_frac(lower), upper


# ------------------------------------------------------------ shared games of criteria 2-4


@pytest.fixture(scope="module")
def lower_bound_games():
    """Transcripts (with the adversary that produced them) for criteria 2, 3 and 4."""
    start = time.perf_counter()
    games: dict[str, list] = {"even": [], "even_exact": [], "odd": [], "general": []}
    for n in range(4, 129, 2):
        cfg = GameConfig(n, 3)
        adv = make_adversary("even3", cfg)
        games["even"].append((play(make_questioner("paper-k3", cfg), adv, cfg), adv))
    for n in range(4, 15, 2):
        cfg = GameConfig(n, 3)
        pool = [("paper-k3", 0)] + [("random", s) for s in range(RANDOM_QUESTIONERS)]
        for name, seed in pool:
            adv = make_adversary("even3", cfg)
            t = play(make_questioner(name, cfg, seed=seed), adv, cfg, mode=GameMode.EXACT, seed=seed)
            games["even_exact"].append((t, adv))
    for n in range(3, 130, 2):
        cfg = GameConfig(n, 3)
        adv = make_adversary("odd3", cfg)
        games["odd"].append((play(make_questioner("paper-k3", cfg), adv, cfg), adv))
    for k in range(2, 7):
        for n in range(k, 101):
            cfg = GameConfig(n, k)
            adv = make_adversary("generalk", cfg)
            games["general"].append((play(make_questioner("paper-general-k", cfg), adv, cfg), adv))
    games["seconds"] = time.perf_counter() - start
    return games


# ------------------------------------------------------------ criterion 1


def test_c1_k3_upper_bound(report_line):
    start = time.perf_counter()
    failures, games, tightest = [], 0, 0
    for n in range(3, 201):
        paper = "odd3" if n % 2 else "even3"
        pool = [(paper, 0)] + [("random", s) for s in range(RANDOM_ADVERSARIES)] + [("fixed", s) for s in range(FIXED_ADVERSARIES)]
        limit = strategy_bound(n)
        for adversary, seed in pool:
            row, t = run_game(n, 3, "paper-k3", adversary, seed=seed, check_audit=False)
            games += 1
            c = row.count
            ok = row.passed and c <= limit and 4 * c <= 3 * n - 2
            tightest = max(tightest, c - limit)
            if not ok:
                failures.append((n, adversary, seed, c, limit, row.findings[:2]))
    elapsed = time.perf_counter() - start
    detail = f"{games} games, n=3..200, every declaration correct and count <= strategy bound and <= 3n/4-1/2"
    if failures:
        detail += f"; {len(failures)} failures, first {failures[0]}"
    verdict(report_line, "C1 k=3 upper bound", not failures, detail + f" (max count - bound = {tightest})", elapsed, 120)
    assert not failures


# ------------------------------------------------------------ criterion 2


def test_c2_even_lower_bound(report_line, lower_bound_games):
    start = time.perf_counter()
    failures = []
    for t, _ in lower_bound_games["even"]:
        n = t.config.n
        need = ceil_frac(Fraction(3 * n, 4) - 2)
        if t.count < need or not verify_transcript(t).ok:
            failures.append(("certified", n, t.count, need))
    exact_games = lower_bound_games["even_exact"]
    for t, _ in exact_games:
        n = t.config.n
        need = ceil_frac(Fraction(3 * n, 4) - 2)
        rep = verify_transcript(t)
        if t.count < need or not rep.ok:
            failures.append(("exact", t.questioner, t.seed, n, t.count, need, rep.findings[:1]))
    elapsed = time.perf_counter() - start + lower_bound_games["seconds"]
    detail = (
        f"paper-k3 vs even3 for even n=4..128 ({len(lower_bound_games['even'])} games) and "
        f"Exact mode n=4..14 with paper-k3 + {RANDOM_QUESTIONERS} random questioners ({len(exact_games)} games): "
        f"count >= ceil(3n/4-2)"
    )
    if failures:
        detail += f"; {len(failures)} failures, first {failures[0]}"
    verdict(report_line, "C2 even lower bound", not failures, detail, elapsed, 300)
    assert not failures


# ------------------------------------------------------------ criterion 3


def test_c3_odd_lower_bound(report_line, lower_bound_games):
    start = time.perf_counter()
    failures = []
    for t, _ in lower_bound_games["odd"]:
        n = t.config.n
        need = odd_lower_ceiling(n)
        assert need == bounds(GameConfig(n, 3)).ceil_lower
        assert need - 1 < 3 * n / 4 - math.log2(n) / 2 - 5 <= need
        if t.count < need or not verify_transcript(t).ok:
            failures.append((n, t.count, need))
    elapsed = time.perf_counter() - start
    detail = f"paper-k3 vs odd3 for odd n=3..129 ({len(lower_bound_games['odd'])} games): count >= ceil(3n/4 - log2(n)/2 - 5)"
    if failures:
        detail += f"; {len(failures)} failures, first {failures[0]}"
    verdict(report_line, "C3 odd lower bound", not failures, detail, elapsed, 120)
    assert not failures


# ------------------------------------------------------------ criterion 4


def test_c4_general_k_sandwich(report_line, lower_bound_games):
    start = time.perf_counter()
    failures = []
    for t, _ in lower_bound_games["general"]:
        n, k = t.config.n, t.config.k
        lo, hi = theorem1_bracket(n, k)
        assert (lo, hi) == bounds(t.config, theorem=1).bracket
        if not (lo <= t.count <= hi) or not verify_transcript(t).ok:
            failures.append((n, k, lo, t.count, hi))
    elapsed = time.perf_counter() - start
    detail = f"paper-general-k vs generalk, k=2..6, n=k..100 ({len(lower_bound_games['general'])} games): ceil(lower) <= count <= upper"
    if failures:
        detail += f"; {len(failures)} failures, first {failures[0]}"
    verdict(report_line, "C4 general-k sandwich", not failures, detail, elapsed, 300)
    assert not failures


# ------------------------------------------------------------ criterion 5


def test_c5_audits(report_line, lower_bound_games):
    start = time.perf_counter()
    failures, audited, checks = [], 0, set()
    for group in ("even", "even_exact", "odd", "general"):
        for t, adv in lower_bound_games[group]:
            variant = variant_for(adv.name, t.config.n)
            rep = audit(t, adv.aux, variant)
            audited += 1
            checks.update(name for name, v in rep.checks.items() if v is not None)
            if not rep.ok:
                failures.append((group, t.config.n, t.config.k, t.questioner, t.seed, rep.failures[:2]))
    expected = {
        "answer_weight", "components_match", "red_bipartite", "component_red_edges",
        "deficient_has_p3c", "p3c_red_degree", "end_blue", "end_red", "end_blue_green", "end_weight",
    }
    missing = expected - checks
    elapsed = time.perf_counter() - start
    detail = f"{audited} games replayed through their adversary; checks exercised: {', '.join(sorted(checks))}"
    if missing:
        detail += f"; never exercised: {sorted(missing)}"
    if failures:
        detail += f"; {len(failures)} failures, first {failures[0]}"
    ok = not failures and not missing
    verdict(report_line, "C5 audit inequalities", ok, detail, elapsed)
    assert ok


# ------------------------------------------------------------ criterion 6


def test_c6_oracle_values(report_line):
    start = time.perf_counter()
    values, problems = {}, []
    for n in (3, 4, 5, 6):
        for goal in Goal:
            values[n, goal] = solve(GameConfig(n, 3), goal).value
    for goal in Goal:
        if values[3, goal] != 1:
            problems.append(f"solve(3,3,{goal.value}) = {values[3, goal]}")
    for n in (4, 5, 6):
        lo, hi = bounds(GameConfig(n, 3)).bracket
        for goal in Goal:
            if not lo <= values[n, goal] <= hi:
                problems.append(f"n={n} {goal.value}: {values[n, goal]} outside [{lo},{hi}]")
        if values[n, Goal.PARTITION] < values[n, Goal.PLURALITY]:
            problems.append(f"n={n}: A_c < A_p")
    # independent ground truth on knowledge states (no canonicalization)
    for n in (3, 4, 5, 6):
        for goal in Goal:
            ref = minimax(n, 3, goal, depth=6)
            if ref != values[n, goal]:
                problems.append(f"n={n} {goal.value}: solver {values[n, goal]} vs reference {ref}")
    elapsed = time.perf_counter() - start
    table = ", ".join(f"n={n}: A_p={values[n, Goal.PLURALITY]} A_c={values[n, Goal.PARTITION]}" for n in (3, 4, 5, 6))
    detail = table + ("; " + "; ".join(problems) if problems else "; brackets hold, A_c >= A_p, matches reference minimax")
    verdict(report_line, "C6 oracle values", not problems, detail, elapsed, 600)
    assert not problems


# ------------------------------------------------------------ criterion 7


def _reachable_states(rng: random.Random, n_max: int, want: int, min_n: int = 3):
    """Distinct constraint graphs seen along random questioner / random adversary games."""
    seen: dict = {}
    while len(seen) < want:
        n = rng.randint(min_n, n_max)
        cfg = GameConfig(n, 3)
        adv = make_adversary("random", cfg, seed=rng.randrange(10**9))
        g = ConstraintGraph.empty(n)
        for _ in range(2 * n):
            q = tuple(sorted(rng.sample(range(1, n + 1), 3)))
            g = apply_answer(g, q, adv.answer(q))
            seen.setdefault((n, g.rep, g.uneq), g)
            if len(seen) >= want or resolution(g, Goal.PARTITION).resolved:
                break
    return list(seen.values())


def _lemma_violations(adv: Odd3Adversary, where) -> list:
    out = []
    for c in adv.aux.red_components():
        if not c.deficient:
            continue
        p3c = [v for v in c.vertices if adv.aux.degree(v, BLUE) == 0]
        low = min((adv.aux.degree(v, RED) for v in p3c), default=None)
        # red-degree <= 2 log2 |V|  <=>  2**deg <= |V|**2
        if low is None or 2**low > c.size**2:
            out.append((*where, c.size, low))
    return out


def test_c7_property_suites(report_line):
    start = time.perf_counter()
    rng = random.Random(2024)
    problems = []

    # (a) two-coloring feasibility vs brute force, 10,000 reachable states with n <= 10
    states = _reachable_states(rng, 10, 10_000)
    comparisons = 0
    for g in states:
        n = g.n
        # the balanced split the adversaries rely on, plus one random split
        for big in {n - n // 2, rng.randint(n - n // 2, n)}:
            sizes = (big, n - big)
            for f in (None, rng.randint(1, n)):
                comparisons += 1
                if exists_two_coloring(g, sizes, f) != two_coloring_brute(g, sizes, f):
                    problems.append(("two-coloring", n, sizes, f))
    a_detail = f"two-coloring: {len(states)} states, {comparisons} comparisons"

    # (b) resolution vs full enumeration on every state of 1,000 random games, n <= 8
    from itertools import product

    res_states = 0
    for _ in range(1000):
        n = rng.randint(3, 8)
        cfg = GameConfig(n, 3)
        adv = make_adversary("random", cfg, seed=rng.randrange(10**9))
        cols = list(product((1, 2, 3), repeat=n))
        g = ConstraintGraph.empty(n)
        for _ in range(4 * n):
            res_states += 1
            for goal in Goal:
                if resolution(g, goal) != resolution_by_enumeration(cols, n, goal):
                    problems.append(("resolution", n, goal.value, g.rep, sorted(g.uneq)))
            if resolution(g, Goal.PARTITION).resolved:
                break
            q = tuple(sorted(rng.sample(range(1, n + 1), 3)))
            parts = adv.answer(q)
            g = apply_answer(g, q, parts)
            cols = [c for c in cols if partition_by_coloring(q, c) == parts]
    b_detail = f"resolution: {res_states} states x 2 goals"

    # (c) canonicalization invariance under 1,000 random relabelings
    pool = _reachable_states(rng, 8, 1000)
    for g in pool:
        perm = list(range(1, g.n + 1))
        rng.shuffle(perm)
        h = relabel(g, dict(zip(range(1, g.n + 1), perm)))
        if canonical_state(h) != canonical_state(g):
            problems.append(("canonical", g.n, g.rep, sorted(g.uneq), perm))
    c_detail = f"canonical: {len(pool)} relabelings"

    # (d) p3c red-degree bound at every conditioned step of odd3 runs
    steps = 0
    for n in range(3, 130, 2):
        cfg = GameConfig(n, 3)
        runs = [("paper-k3", 0)] + ([("random", s) for s in range(10)] if n <= 51 else [])
        for name, seed in runs:
            adv = Odd3Adversary(cfg)
            q = make_questioner(name, cfg, seed=seed)
            move = q.next(None)
            for _ in range(10 * n):
                if not isinstance(move, tuple):
                    break
                parts = adv.answer(move)
                if adv.phase != CONDITIONED:
                    break
                steps += 1
                problems += _lemma_violations(adv, (n, name, seed, adv.steps))
                move = q.next(parts)
    d_detail = f"p3c red-degree: {steps} conditioned odd3 steps"

    elapsed = time.perf_counter() - start
    detail = "; ".join([a_detail, b_detail, c_detail, d_detail])
    if problems:
        detail += f"; {len(problems)} violations, first {problems[0]}"
    verdict(report_line, "C7 property suites", not problems, detail, elapsed)
    assert not problems
