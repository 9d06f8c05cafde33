import csv
import io
import json

import pytest

from plurality.cli import HumanQuestioner, main
from plurality.core import GameConfig, ResolutionKind
from plurality.adversary import FixedColoringAdversary
from plurality.engine import play


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_arena_even3_rows_in_bracket(capsys):
    code, out, _ = run(capsys, "arena", "--k", "3", "--n-range", "4:128:2", "--questioner", "paper-k3", "--adversary", "even3")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 63
    assert all(int(r["lower_bound"]) <= int(r["count"]) <= int(r["upper_bound"]) for r in rows)
    assert all(r["pass"] == "true" for r in rows)


def test_solve_three(capsys):
    code, out, _ = run(capsys, "solve", "--n", "3", "--k", "3", "--goal", "plurality")
    assert code == 0
    data = json.loads(out)
    assert data["value"] == 1
    assert set(data) == {"value", "nodes", "states", "seconds"}


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "10", "--k", "4")
    data = json.loads(out)
    assert code == 0
    assert data["lower"] == "29/9" and data["upper"] == "4"


@pytest.mark.parametrize(
    "argv",
    [
        ["bounds", "--n", "2", "--k", "3"],
        ["play", "--n", "8", "--k", "3", "--questioner", "nobody"],
        ["play", "--n", "8", "--k", "3", "--adversary", "odd3"],
        ["arena", "--k", "3", "--n-range", "4:x"],
        ["solve", "--n", "12", "--k", "3"],
        ["play", "--n", "20", "--k", "3", "--mode", "exact"],
        ["bounds", "--n", "10"],
    ],
)
def test_validation_errors_exit_one(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 1


def test_unwritable_output_exits_one(capsys, tmp_path):
    code, _, err = run(capsys, "bounds", "--n", "8", "--k", "3", "--out", str(tmp_path / "missing" / "b.json"))
    assert code == 1 and "cannot write" in err


def test_play_audit_export(capsys, tmp_path):
    path = tmp_path / "t.json"
    code, _, _ = run(capsys, "play", "--n", "8", "--k", "3", "--adversary", "even3", "--snapshots", "--out", str(path))
    assert code == 0
    code, out, _ = run(capsys, "audit", str(path))
    assert code == 0 and json.loads(out)["failures"] == []

    code, empty, _ = run(capsys, "export", str(path), "--step", "0")
    assert code == 0
    assert empty.count("--") == 0
    assert all(f"    {b};" in empty for b in range(1, 9))

    code, first, _ = run(capsys, "export", str(path), "--step", "1")
    assert first.count("color=blue") == 1 and first.count("color=red") == 2

    _, again, _ = run(capsys, "export", str(path), "--step", "1")
    assert again == first

    code, js, _ = run(capsys, "export", str(path), "--format", "json")
    assert code == 0 and json.loads(js)["n"] == 8


def test_export_without_snapshots_exits_one(capsys, tmp_path):
    path = tmp_path / "t.json"
    run(capsys, "play", "--n", "8", "--k", "3", "--adversary", "random", "--out", str(path))
    code, _, err = run(capsys, "export", str(path), "--step", "1")
    assert code == 1 and "snapshots" in err


def test_audit_tampered_exits_two(capsys, tmp_path):
    path = tmp_path / "t.json"
    run(capsys, "play", "--n", "8", "--k", "3", "--adversary", "even3", "--out", str(path))
    data = json.loads(path.read_text())
    q = data["queries"][0]["balls"]
    data["queries"][0]["parts"] = [[b] for b in q]
    path.write_text(json.dumps(data))
    code, _, err = run(capsys, "audit", str(path))
    assert code == 2 and "mismatch" in err


def test_arena_failure_exits_two(capsys, monkeypatch):
    import plurality.cli as cli
    from plurality.engine import ArenaRow

    def failing(*args, **kwargs):
        return [ArenaRow(4, 3, "paper-k3", "even3", "certified", 0, 1, 2, 2, False, ["count 1 below lower bound 2"])]

    monkeypatch.setattr(cli, "run_arena", failing)
    code, _, err = run(capsys, "arena", "--k", "3", "--n-range", "4:4", "--adversary", "even3")
    assert code == 2 and "below lower bound" in err


def test_human_questioner_script():
    cfg = GameConfig(5, 3)
    lines = iter(["1 2 3", "oops", "1 2", "3 4 5", "declare 1"])
    shown = []
    q = HumanQuestioner(cfg, read=lambda _: next(lines), write=shown.append)
    t = play(q, FixedColoringAdversary(cfg, coloring=(1, 1, 2, 2, 1)), cfg)
    assert t.count == 2
    assert t.declaration.kind is ResolutionKind.PLURALITY_BALL and t.declaration.ball == 1
    assert any(s.startswith("answer: 1 2 | 3") for s in shown)
    assert any("need 3 distinct balls" in s for s in shown)
