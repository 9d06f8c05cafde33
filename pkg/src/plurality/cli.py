"""Command-line front end.

Subcommands: ``play``, ``arena``, ``solve``, ``bounds``, ``audit`` and ``export``.
Exit status is 0 on success, 1 on a validation problem (bad arguments, unknown
strategy, unwritable path) and 2 when a game, bound or audit check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Callable

from .adversary import ADVERSARIES, AuditMismatch, AuxGraph, audit, make_adversary, variant_for
from .adversary.audit import VARIANTS
from .core import ConstraintGraph, GameConfig, Goal, Resolution, ResolutionKind, apply_answer
from .engine import (
    GameAborted,
    GameMode,
    Transcript,
    exact_threshold,
    play,
    rows_to_csv,
    run_arena,
    verify_transcript,
)
from .oracle import StateSpaceTooLarge, bounds, solve
from .questioner import QUESTIONERS, Plan, Questioner, make_questioner
from .search import resolution

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 1, 2


class UsageError(ValueError):
    """Bad input from the command line; reported with exit status 1."""


class HumanQuit(Exception):
    pass


# ---------------------------------------------------------------- human REPL


class HumanQuestioner(Questioner):
    """Reads queries from a text stream.

    Each line is either k ball numbers, ``declare <ball>``, ``declare none``,
    ``declare partition`` (the classes forced by the answers so far) or ``quit``.
    """

    name = "human"

    def __init__(
        self,
        config: GameConfig,
        goal: Goal = Goal.PLURALITY,
        read: Callable[[str], str] = input,
        write: Callable[[str], None] = print,
    ) -> None:
        super().__init__(config, goal)
        self.read = read
        self.write = write
        self.graph = ConstraintGraph.empty(config.n)

    def _summary(self) -> str:
        g = self.graph
        classes = [bs for bs in g.classes().values() if len(bs) > 1]
        pairs = sorted(g.uneq)
        res = resolution(g, self.goal)
        return (
            f"  equal classes: {classes or 'none'}\n"
            f"  known different (class reps): {pairs or 'none'}\n"
            f"  status: {res.kind.value}"
        )

    def _declaration(self, arg: str) -> Resolution | None:
        if arg == "none":
            return Resolution(ResolutionKind.NO_PLURALITY)
        if arg == "partition":
            res = resolution(self.graph, Goal.PARTITION)
            if not res.resolved:
                self.write("the partition is not determined yet")
                return None
            return res
        try:
            ball = int(arg)
        except ValueError:
            self.write("declare takes a ball number, 'none' or 'partition'")
            return None
        if not 1 <= ball <= self.config.n:
            self.write(f"ball must be in 1..{self.config.n}")
            return None
        return Resolution(ResolutionKind.PLURALITY_BALL, ball=ball)

    def plan(self) -> Plan:
        k, n = self.config.k, self.config.n
        self.write(f"n={n} balls, queries of {k}; type {k} ball numbers, 'declare <ball|none|partition>' or 'quit'")
        while True:
            try:
                line = self.read("query> ").strip()
            except EOFError:
                line = "quit"
            if not line:
                continue
            words = line.replace(",", " ").split()
            if words[0] == "quit":
                raise HumanQuit
            if words[0] == "declare":
                decl = self._declaration(words[1] if len(words) > 1 else "")
                if decl is not None:
                    return decl
                continue
            try:
                balls = tuple(sorted({int(w) for w in words}))
            except ValueError:
                self.write("could not read ball numbers")
                continue
            if len(balls) != k or not all(1 <= b <= n for b in balls):
                self.write(f"need {k} distinct balls in 1..{n}")
                continue
            parts = yield balls
            self.graph = apply_answer(self.graph, balls, parts)
            self.write(f"answer: {' | '.join(' '.join(map(str, p)) for p in parts)}")
            self.write(self._summary())


# ---------------------------------------------------------------- helpers


def _config(n: int, k: int) -> GameConfig:
    try:
        return GameConfig(n, k)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _check_name(name: str, known, what: str) -> None:
    if name not in known:
        raise UsageError(f"unknown {what} {name!r}; expected one of {', '.join(known)}")


def _n_range(text: str) -> range:
    try:
        bits = [int(x) for x in text.split(":")]
    except ValueError as exc:
        raise UsageError(f"--n-range must look like a:b or a:b:step, got {text!r}") from exc
    if len(bits) not in (2, 3) or (len(bits) == 3 and bits[2] <= 0):
        raise UsageError(f"--n-range must look like a:b or a:b:step, got {text!r}")
    start, stop = bits[0], bits[1]
    step = bits[2] if len(bits) == 3 else 1
    return range(start, stop + 1, step)


def _seeds(text: str) -> list[int]:
    try:
        if ":" in text:
            a, b = (int(x) for x in text.split(":"))
            return list(range(a, b))
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"--seeds must be a comma list or a:b range, got {text!r}") from exc


def _strategies(config: GameConfig, goal: Goal, questioner: str | None, adversary: str | None, seed: int):
    """Build the named strategies, turning incompatibilities with (n, k) into usage errors."""
    try:
        q = None if questioner is None else make_questioner(questioner, config, goal, seed=seed)
        a = None if adversary is None else make_adversary(adversary, config, seed=seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return q, a


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from exc


def _load_transcript(path: str) -> Transcript:
    try:
        with open(path, encoding="utf-8") as fh:
            return Transcript.loads(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{path} is not a transcript: {exc}") from exc


# ---------------------------------------------------------------- subcommands


def cmd_play(args) -> int:
    config = _config(args.n, args.k)
    goal = Goal(args.goal)
    if args.questioner == "human":
        q: Questioner = HumanQuestioner(config, goal)
    else:
        _check_name(args.questioner, QUESTIONERS, "questioner")
        q = _strategies(config, goal, args.questioner, None, args.seed)[0]
    _check_name(args.adversary, ADVERSARIES, "adversary")
    a = _strategies(config, goal, None, args.adversary, args.seed)[1]
    mode = GameMode(args.mode)
    if mode is GameMode.EXACT and config.n > exact_threshold():
        raise UsageError(f"exact mode is limited to n <= {exact_threshold()}, got n={config.n}")
    try:
        t = play(q, a, config, mode=mode, seed=args.seed, goal=goal, snapshots=args.snapshots)
    except HumanQuit:
        print("quit", file=sys.stderr)
        return EXIT_OK
    except GameAborted as exc:
        print(f"game aborted: {exc.reason}", file=sys.stderr)
        return EXIT_FAILED
    _emit(json.dumps(t.to_json(), indent=2) + "\n", args.out)
    report = verify_transcript(t, mode)
    for f in report.findings:
        print(f"verify: {f}", file=sys.stderr)
    print(f"{t.count} queries; declaration {t.declaration.to_json() if t.declaration else None}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_arena(args) -> int:
    ns = _n_range(args.n_range)
    _check_name(args.questioner, QUESTIONERS, "questioner")
    _check_name(args.adversary, ADVERSARIES, "adversary")
    for n in ns:
        _strategies(_config(n, args.k), Goal(args.goal), args.questioner, args.adversary, 0)
    mode = GameMode(args.mode)
    if mode is GameMode.EXACT and ns and max(ns) > exact_threshold():
        raise UsageError(f"exact mode is limited to n <= {exact_threshold()}")
    rows = run_arena(ns, args.k, args.questioner, args.adversary, mode, _seeds(args.seeds), args.goal, jobs=args.jobs)
    _emit(rows_to_csv(rows), args.out)
    bad = [r for r in rows if not r.passed]
    for r in bad:
        print(f"n={r.n} seed={r.seed}: {'; '.join(r.findings)}", file=sys.stderr)
    return EXIT_FAILED if bad else EXIT_OK


def cmd_solve(args) -> int:
    config = _config(args.n, args.k)
    try:
        result = solve(config, args.goal, limit=args.limit, max_states=args.max_states)
    except StateSpaceTooLarge as exc:
        raise UsageError(str(exc)) from exc
    _emit(json.dumps(result.to_json()) + "\n", args.out)
    return EXIT_OK


def cmd_bounds(args) -> int:
    config = _config(args.n, args.k)
    try:
        b = bounds(config, args.goal, theorem=args.theorem)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(json.dumps(b.to_json()) + "\n", args.out)
    return EXIT_OK


def cmd_audit(args) -> int:
    t = _load_transcript(args.transcript)
    variant = args.variant or variant_for(t.adversary, t.config.n)
    if variant is None:
        raise UsageError(f"adversary {t.adversary!r} has no audit variant; pass --variant")
    _check_name(variant, VARIANTS, "audit variant")
    aux = None if t.aux is None else AuxGraph.from_json(t.config.n, t.config.k, t.aux)
    try:
        report = audit(t, aux, variant)
    except AuditMismatch as exc:
        print(f"audit mismatch: {exc}", file=sys.stderr)
        return EXIT_FAILED
    _emit(json.dumps(report.to_json(), indent=2) + "\n", args.out)
    for f in report.failures:
        print(f"audit: {f}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAILED


def export_dot(t: Transcript, step: int | None = None) -> str:
    """DOT text for the aux graph after ``step`` answers (0 is the empty graph; None is the end)."""
    n, k = t.config.n, t.config.k
    if step is None:
        if t.aux is None:
            raise UsageError("transcript has no aux graph")
        return AuxGraph.from_json(n, k, t.aux).to_dot()
    if t.aux_snapshots is None:
        raise UsageError("transcript has no aux snapshots; play it again with --snapshots")
    if not 0 <= step <= len(t.aux_snapshots):
        raise UsageError(f"step {step} out of range 0..{len(t.aux_snapshots)}")
    if step == 0:
        return AuxGraph(n, k).to_dot()
    return AuxGraph.from_json(n, k, t.aux_snapshots[step - 1]).to_dot()


def cmd_export(args) -> int:
    t = _load_transcript(args.transcript)
    if args.format == "dot":
        text = export_dot(t, args.step)
    else:
        text = json.dumps(t.to_json(), indent=2) + "\n"
    _emit(text, args.out)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="plurality", description="Plurality and partition query games with three colors.")
    sub = p.add_subparsers(dest="command", required=True)

    def game_args(sp, need_n: bool = True) -> None:
        if need_n:
            sp.add_argument("--n", type=int, required=True, help="number of balls")
        sp.add_argument("--k", type=int, required=True, help="balls per query")
        sp.add_argument("--goal", choices=[g.value for g in Goal], default=Goal.PLURALITY.value)
        sp.add_argument("--out", help="output file (default: stdout)")

    sp = sub.add_parser("play", help="play one game and print its transcript JSON")
    game_args(sp)
    sp.add_argument("--questioner", default="paper-k3", help=f"one of {', '.join(QUESTIONERS)} or human")
    sp.add_argument("--adversary", default="paper", help=f"one of {', '.join(ADVERSARIES)}")
    sp.add_argument("--mode", choices=[m.value for m in GameMode], default=GameMode.CERTIFIED.value)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--snapshots", action="store_true", help="record the aux graph after every answer")
    sp.set_defaults(func=cmd_play)

    sp = sub.add_parser("arena", help="sweep n and seeds, print one CSV row per game")
    game_args(sp, need_n=False)
    sp.add_argument("--n-range", required=True, help="a:b or a:b:step, inclusive of b")
    sp.add_argument("--questioner", default="paper-k3")
    sp.add_argument("--adversary", default="paper")
    sp.add_argument("--mode", choices=[m.value for m in GameMode], default=GameMode.CERTIFIED.value)
    sp.add_argument("--seeds", default="0", help="comma list, or a:b for range(a, b)")
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    sp.set_defaults(func=cmd_arena)

    sp = sub.add_parser("solve", help="exact game value for small n")
    game_args(sp)
    sp.add_argument("--limit", type=int, default=6, help="largest n the solver accepts")
    sp.add_argument("--max-states", type=int, default=2_000_000)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("bounds", help="closed-form lower and upper bounds")
    game_args(sp)
    sp.add_argument("--theorem", type=int, choices=(1, 2), help="1: any k; 2: the k=3 bounds (default for k=3)")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("audit", help="replay a transcript through its adversary and check the weight inequalities")
    sp.add_argument("transcript")
    sp.add_argument("--variant", help=f"one of {', '.join(VARIANTS)} (default: from the transcript)")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_audit)

    sp = sub.add_parser("export", help="aux graph as DOT, or the transcript as JSON")
    sp.add_argument("transcript")
    sp.add_argument("--format", choices=("dot", "json"), default="dot")
    sp.add_argument("--step", type=int, help="answers applied (0 = empty graph); default: final graph")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_export)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
