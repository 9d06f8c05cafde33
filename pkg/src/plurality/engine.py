"""Runs games between a questioner and an adversary, and checks the results."""

from __future__ import annotations

import csv
import enum
import io
import json
import os
from dataclasses import dataclass, field
from functools import lru_cache

from .adversary import Adversary, AuditMismatch, AuxGraph, audit, make_adversary, variant_for
from .core import (
    Coloring,
    ConstraintGraph,
    GameConfig,
    Goal,
    InvalidMove,
    Partition,
    Resolution,
    ResolutionKind,
    apply_answer,
    check_coloring,
    check_partition,
    make_query,
    normalize_partition,
    partition_by_coloring,
)
from .questioner import Questioner, make_questioner
from .search import always_plurality, resolution

DEFAULT_EXACT_THRESHOLD = 14
THRESHOLD_ENV = "PLURALITY_EXACT_THRESHOLD"


class GameMode(str, enum.Enum):
    EXACT = "exact"
    CERTIFIED = "certified"


def exact_threshold() -> int:
    raw = os.environ.get(THRESHOLD_ENV)
    if raw is None or raw == "":
        return DEFAULT_EXACT_THRESHOLD
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{THRESHOLD_ENV} must be an integer, got {raw!r}") from None


class GameAborted(RuntimeError):
    """A strategy broke the rules; ``transcript`` holds the game up to that point."""

    def __init__(self, reason: str, transcript: Transcript) -> None:
        super().__init__(reason)
        self.reason = reason
        self.transcript = transcript


@dataclass
class Transcript:
    config: GameConfig
    goal: Goal = Goal.PLURALITY
    mode: GameMode = GameMode.CERTIFIED
    questioner: str = ""
    adversary: str = ""
    seed: int = 0
    steps: list[tuple[tuple[int, ...], Partition]] = field(default_factory=list)
    declaration: Resolution | None = None
    declared_by: str | None = None  # "questioner" or "resolution"
    witness: Coloring | None = None
    aux: list | None = None
    aux_snapshots: list[list] | None = None

    @property
    def count(self) -> int:
        return len(self.steps)

    def to_json(self) -> dict:
        return {
            "n": self.config.n,
            "k": self.config.k,
            "goal": self.goal.value,
            "mode": self.mode.value,
            "questioner": self.questioner,
            "adversary": self.adversary,
            "seed": self.seed,
            "queries": [{"balls": list(q), "parts": [list(p) for p in parts]} for q, parts in self.steps],
            "declaration": None if self.declaration is None else self.declaration.to_json(),
            "declared_by": self.declared_by,
            "witness": None if self.witness is None else list(self.witness),
            "aux": self.aux,
            "aux_snapshots": self.aux_snapshots,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict) -> Transcript:
        config = GameConfig(int(data["n"]), int(data["k"]))
        decl = data.get("declaration")
        witness = data.get("witness")
        return cls(
            config=config,
            goal=Goal(data.get("goal", "plurality")),
            mode=GameMode(data.get("mode", "certified")),
            questioner=data.get("questioner", ""),
            adversary=data.get("adversary", ""),
            seed=int(data.get("seed", 0)),
            steps=[(tuple(sorted(s["balls"])), normalize_partition(s["parts"])) for s in data["queries"]],
            declaration=None if decl is None else Resolution.from_json(decl),
            declared_by=data.get("declared_by"),
            witness=None if witness is None else check_coloring(tuple(witness), config.n),
            aux=data.get("aux"),
            aux_snapshots=data.get("aux_snapshots"),
        )

    @classmethod
    def loads(cls, text: str) -> Transcript:
        return cls.from_json(json.loads(text))

    def aux_graph(self, step: int | None = None) -> AuxGraph:
        """The adversary's aux graph after ``step`` answers (the final one if None)."""
        if step is None:
            if self.aux is None:
                raise ValueError("transcript has no aux graph")
            return AuxGraph.from_json(self.config.n, self.config.k, self.aux)
        if self.aux_snapshots is None:
            raise ValueError("transcript has no aux snapshots")
        if not 0 <= step < len(self.aux_snapshots):
            raise ValueError(f"step {step} out of range 0..{len(self.aux_snapshots) - 1}")
        return AuxGraph.from_json(self.config.n, self.config.k, self.aux_snapshots[step])


@lru_cache(maxsize=100_000)
def cached_resolution(g: ConstraintGraph, goal: Goal) -> Resolution:
    return resolution(g, goal)


def declaration_correct(g: ConstraintGraph, decl: Resolution, goal: Goal) -> bool:
    """Is ``decl`` a correct output in every coloring consistent with ``g``?"""
    if decl.kind is ResolutionKind.PLURALITY_BALL:
        return decl.ball is not None and always_plurality(g, decl.ball)
    res = cached_resolution(g, goal)
    if decl.kind is ResolutionKind.NO_PLURALITY:
        return res.kind is ResolutionKind.NO_PLURALITY
    if decl.kind is ResolutionKind.PARTITION:
        return res.kind is ResolutionKind.PARTITION and res.classes == decl.classes
    return False


def play(
    questioner: Questioner,
    adversary: Adversary,
    config: GameConfig | None = None,
    mode: GameMode | str = GameMode.CERTIFIED,
    seed: int = 0,
    goal: Goal | str | None = None,
    budget: int | None = None,
    snapshots: bool = False,
    threshold: int | None = None,
) -> Transcript:
    """Play one game.

    Exact mode stops at the first state the resolution checker calls solved
    (and refuses n above the exact threshold); Certified mode stops when the
    questioner declares. Raises :class:`GameAborted` on malformed moves,
    contradictory answers or a blown query budget.
    """
    config = config or questioner.config
    mode = GameMode(mode)
    goal = Goal(goal) if goal is not None else questioner.goal
    budget = 10 * config.n if budget is None else budget
    if mode is GameMode.EXACT:
        limit = exact_threshold() if threshold is None else threshold
        if config.n > limit:
            raise ValueError(f"exact mode is limited to n <= {limit}, got n={config.n}")
    t = Transcript(
        config=config,
        goal=goal,
        mode=mode,
        questioner=questioner.name,
        adversary=adversary.name,
        seed=seed,
        aux_snapshots=[] if snapshots and adversary.aux is not None else None,
    )
    g = ConstraintGraph.empty(config.n) if mode is GameMode.EXACT else None
    last: Partition | None = None
    while True:
        move = questioner.next(last)
        if isinstance(move, Resolution):
            t.declaration, t.declared_by = move, "questioner"
            break
        if t.count >= budget:
            raise GameAborted(f"questioner exceeded the query budget of {budget}", _finish(t, adversary))
        try:
            query = make_query(move, config)
        except (InvalidMove, ValueError) as exc:
            raise GameAborted(f"questioner asked an invalid query {move}: {exc}", _finish(t, adversary)) from exc
        raw = adversary.answer(query)
        try:
            parts = check_partition(query, raw)
        except (InvalidMove, ValueError) as exc:
            raise GameAborted(f"adversary gave a malformed answer {raw} to {sorted(query)}: {exc}", _finish(t, adversary)) from exc
        t.steps.append((tuple(sorted(query)), parts))
        if t.aux_snapshots is not None:
            t.aux_snapshots.append(adversary.aux.to_json())
        last = parts
        if g is not None:
            g = apply_answer(g, query, parts)
            if g.contradictory:
                raise GameAborted(f"answer {parts} to {sorted(query)} contradicts earlier answers", _finish(t, adversary))
            res = cached_resolution(g, goal)
            if res.resolved:
                reply = questioner.next(parts)
                if isinstance(reply, Resolution):
                    t.declaration, t.declared_by = reply, "questioner"
                else:
                    t.declaration, t.declared_by = res, "resolution"
                break
    return _finish(t, adversary)


def _finish(t: Transcript, adversary: Adversary) -> Transcript:
    t.witness = adversary.witness()
    if adversary.aux is not None:
        t.aux = adversary.aux.to_json()
    return t


@dataclass
class VerifyReport:
    findings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.findings


def verify_transcript(t: Transcript, mode: GameMode | str | None = None, threshold: int | None = None) -> VerifyReport:
    """Replay and check a transcript; every failed check becomes a finding."""
    mode = GameMode(mode) if mode is not None else t.mode
    limit = exact_threshold() if threshold is None else threshold
    report = VerifyReport()
    n = t.config.n
    need_graph = mode is GameMode.EXACT or n <= limit
    g = ConstraintGraph.empty(n)
    prev = g
    for i, (query, parts) in enumerate(t.steps):
        try:
            q = make_query(query, t.config)
            parts = check_partition(q, parts)
        except (InvalidMove, ValueError) as exc:
            report.findings.append(f"step {i}: malformed step: {exc}")
            return report
        if need_graph:
            prev, g = g, apply_answer(g, q, parts)
            if g.contradictory:
                report.findings.append(f"step {i}: answer contradicts earlier answers")
                return report
    if mode is GameMode.EXACT:
        final = cached_resolution(g, t.goal)
        if not final.resolved:
            report.findings.append("final state is unresolved")
        if t.count and cached_resolution(prev, t.goal).resolved:
            report.findings.append("game continued past a resolved state")
        if t.declaration is None:
            report.findings.append("no declaration")
        elif t.declared_by == "resolution":
            if t.declaration != final:
                report.findings.append(f"recorded resolution {t.declaration} differs from {final}")
        elif final.resolved and not declaration_correct(g, t.declaration, t.goal):
            report.findings.append(f"declaration {t.declaration.to_json()} is not correct")
        return report

    if t.declaration is None:
        report.findings.append("no declaration")
        return report
    if t.witness is None:
        report.findings.append("no witness coloring to check the declaration against")
        return report
    for i, (query, parts) in enumerate(t.steps):
        if partition_by_coloring(query, t.witness) != normalize_partition(parts):
            report.findings.append(f"step {i}: witness coloring disagrees with the answer")
            return report
    if not t.declaration.holds_for(t.witness):
        report.findings.append(f"declaration {t.declaration.to_json()} is wrong for the witness coloring")
    if need_graph and not declaration_correct(g, t.declaration, t.goal):
        report.findings.append(f"declaration {t.declaration.to_json()} is not forced by the answers")
    return report


# ---------------------------------------------------------------- arena

CSV_COLUMNS = ("n", "k", "questioner", "adversary", "mode", "seed", "count", "lower_bound", "upper_bound", "pass")
PAPER_QUESTIONERS = ("paper-k3", "paper-general-k")
PAPER_ADVERSARIES = ("paper", "even3", "odd3", "generalk")


@dataclass
class ArenaRow:
    n: int
    k: int
    questioner: str
    adversary: str
    mode: str
    seed: int
    count: int
    lower_bound: int
    upper_bound: int
    passed: bool
    findings: list[str] = field(default_factory=list)

    def as_csv(self) -> list:
        return [self.n, self.k, self.questioner, self.adversary, self.mode, self.seed,
                self.count, self.lower_bound, self.upper_bound, "true" if self.passed else "false"]


def game_bracket(config: GameConfig, questioner: str, adversary: str, goal: Goal = Goal.PLURALITY) -> tuple[int, int]:
    """Integer bracket a game's count is judged against."""
    from .oracle import bounds

    theorem = 1 if "general" in questioner or adversary == "generalk" or config.k != 3 else 2
    b = bounds(config, goal, theorem=theorem)
    return b.bracket


def run_game(
    n: int,
    k: int,
    questioner: str,
    adversary: str,
    mode: GameMode | str = GameMode.CERTIFIED,
    seed: int = 0,
    goal: Goal | str = Goal.PLURALITY,
    check_audit: bool = True,
) -> tuple[ArenaRow, Transcript | None]:
    """Play, verify and (for the paper adversaries) audit one game."""
    config = GameConfig(n, k)
    goal = Goal(goal)
    mode = GameMode(mode)
    q = make_questioner(questioner, config, goal, seed=seed)
    a = make_adversary(adversary, config, seed=seed)
    lower, upper = game_bracket(config, questioner, adversary, goal)
    findings: list[str] = []
    t: Transcript | None
    try:
        t = play(q, a, config, mode=mode, seed=seed, goal=goal)
    except GameAborted as exc:
        t = exc.transcript
        findings.append(exc.reason)
    else:
        findings += verify_transcript(t, mode).findings
        if adversary in PAPER_ADVERSARIES and t.count < lower:
            findings.append(f"count {t.count} below lower bound {lower}")
        if questioner in PAPER_QUESTIONERS and t.count > upper:
            findings.append(f"count {t.count} above upper bound {upper}")
        variant = variant_for(a.name, n)
        if check_audit and variant is not None:
            try:
                rep = audit(t, a.aux, variant, solved=not findings)
                findings += rep.failures
            except AuditMismatch as exc:
                findings.append(f"audit mismatch: {exc}")
    row = ArenaRow(n, k, questioner, adversary, mode.value, seed, t.count if t else 0, lower, upper, not findings, findings)
    return row, t


def _run_game_args(args) -> ArenaRow:
    return run_game(*args)[0]


def run_arena(
    ns,
    k: int,
    questioner: str,
    adversary: str,
    mode: GameMode | str = GameMode.CERTIFIED,
    seeds=(0,),
    goal: Goal | str = Goal.PLURALITY,
    jobs: int = 1,
) -> list[ArenaRow]:
    """Every (n, seed) combination; rows come back in input order."""
    tasks = [(n, k, questioner, adversary, GameMode(mode), s, Goal(goal)) for n in ns for s in seeds]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_game_args, tasks, chunksize=4))
    return [_run_game_args(task) for task in tasks]


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.as_csv())
    return buf.getvalue()
