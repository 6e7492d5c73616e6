import csv

import pytest

from atomroute.cli import main, run_bench
from atomroute.core import GridShape, Model, identity, random_permutation, reversal
from atomroute.formats import read_schedule, write_permutation, write_schedule


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = main([str(a) for a in argv])
        out = capsys.readouterr()
        return code, out.out, out.err
    return _run


def test_route_identity(tmp_path, run):
    perm, out = tmp_path / "p.json", tmp_path / "s.json"
    write_permutation(perm, identity(6))
    code, text, _ = run("route", "--model", "swap1d", "--perm", perm, "--out", out)
    assert code == 0 and "steps: 0" in text
    assert len(read_schedule(out)) == 0


def test_route_riffle_reversal_and_verify(tmp_path, run):
    perm, out = tmp_path / "p.json", tmp_path / "s.json"
    write_permutation(perm, reversal(16))
    code, text, _ = run("route", "--model", "riffle", "--perm", perm, "--out", out)
    assert code == 0 and "steps: 4" in text
    assert run("verify", "--perm", perm, "--schedule", out)[0] == 0
    code, text, _ = run("audit", "--perm", perm, "--schedule", out)
    assert code == 0 and "trace: 16 8 4 2 1" in text and "PASS" in text


def test_route_selective_256(tmp_path, run):
    perm, out = tmp_path / "p.json", tmp_path / "s.json"
    write_permutation(perm, random_permutation(256, 9), GridShape(16, 16))
    code, text, _ = run("route", "--model", "selective", "--perm", perm, "--out", out)
    assert code == 0
    assert int(text.split()[1]) <= 15
    assert run("verify", "--perm", perm, "--schedule", out)[0] == 0


@pytest.mark.parametrize("extra", [[], ["--sparse-threshold", "3"], ["--lowering", "greedy"]])
def test_route_grid_roundtrip(tmp_path, run, extra):
    perm, out = tmp_path / "p.json", tmp_path / "s.json"
    write_permutation(perm, random_permutation(64, 3), GridShape(8, 8))
    assert run("route", "--model", "grid", "--perm", perm, "--out", out, *extra)[0] == 0
    assert read_schedule(out).model is Model.GRID
    assert run("verify", "--perm", perm, "--schedule", out)[0] == 0


def test_route_pad(tmp_path, run):
    perm, out = tmp_path / "p.json", tmp_path / "s.json"
    write_permutation(perm, random_permutation(15, 1), GridShape(3, 5))
    code, _, err = run("route", "--model", "selective", "--perm", perm, "--out", out)
    assert code == 2 and "--pad" in err
    code, text, _ = run("route", "--model", "selective", "--pad", "--perm", perm, "--out", out)
    assert code == 0 and "padded grid 8x8" in text
    assert run("verify", "--perm", perm, "--schedule", out)[0] == 0


def test_route_shape_mismatch(tmp_path, run):
    perm = tmp_path / "p.json"
    write_permutation(perm, identity(4))
    assert run("route", "--model", "grid", "--perm", perm, "--out", tmp_path / "s")[0] == 2
    write_permutation(perm, identity(4), GridShape(2, 2))
    assert run("route", "--model", "riffle", "--perm", perm, "--out", tmp_path / "s")[0] == 2


def test_verify_detects_deleted_step(tmp_path, run):
    from atomroute.route1d import route_swap1d
    perm, out = tmp_path / "p.json", tmp_path / "s.json"
    sigma = random_permutation(16, 4)
    write_permutation(perm, sigma)
    sched = route_swap1d(sigma)
    write_schedule(out, sched.__class__(sched.model, sched.shape, sched.steps[1:]))
    code, text, _ = run("verify", "--perm", perm, "--schedule", out)
    assert code == 1 and text.startswith("site ")


def test_verify_reports_bad_step(tmp_path, run):
    perm, out = tmp_path / "p.json", tmp_path / "s.json"
    write_permutation(perm, identity(6))
    ok = {"kind": "swap1d", "a": [0], "b": [1]}
    steps = [ok, ok, ok, {"kind": "swap1d", "a": [2, 0], "b": [3, 4]}]
    import json
    out.write_text(json.dumps({"model": "swap1d", "shape": {"n": 6}, "steps": steps}))
    code, text, _ = run("verify", "--perm", perm, "--schedule", out)
    assert code == 1 and text.strip() == "step 3: a not ascending"


def test_parse_errors_exit_2(tmp_path, run):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run("verify", "--perm", bad, "--schedule", bad)[0] == 2
    assert run("bounds", "--perm", tmp_path / "missing", "--model", "riffle")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["route"])
    assert exc.value.code == 2


def test_bounds(tmp_path, run):
    perm = tmp_path / "p.json"
    write_permutation(perm, reversal(8))
    code, text, _ = run("bounds", "--perm", perm, "--model", "riffle")
    assert code == 0 and "monotone bound: 3" in text and "counting bound: 0" in text


def test_oracle_csv(tmp_path, run):
    out = tmp_path / "o.csv"
    code, text, _ = run("oracle", "--model", "riffle", "--n", 4, "--csv", out)
    assert code == 0 and "max distance: 2" in text
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["permutation", "distance"]
    assert rows[1] == ["0,1,2,3", "0"] and len(rows) == 25
    assert run("oracle", "--model", "grid", "--rows", 2, "--cols", 3)[0] == 0
    assert run("oracle", "--model", "riffle", "--n", 9)[0] == 2
    assert run("oracle", "--model", "grid", "--n", 4)[0] == 2


def test_bench_csv_deterministic(tmp_path, run):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["bench", "--model", "riffle", "--sizes", "4,8,16", "--samples", 5, "--seed", 3]
    assert run(*args, "--out", a)[0] == 0
    assert run(*args, "--out", b, "--jobs", 2)[0] == 0
    assert a.read_text() == b.read_text()
    rows = list(csv.DictReader(a.open()))
    assert list(rows[0]) == ["model", "N", "seed", "steps", "countingBound",
                             "monotoneBound", "verified", "auditPass"]
    assert [int(r["seed"]) for r in rows[:5]] == [3, 4, 5, 6, 7]


def test_bench_2d_needs_power_of_two(run, tmp_path):
    assert run("bench", "--model", "grid", "--sizes", "12", "--out", tmp_path / "x")[0] == 2


def test_bench_selective_rows():
    rows = run_bench(Model.SELECTIVE, [16, 64], 3, 0)
    assert all(r["verified"] == "true" and r["auditPass"] == "true" for r in rows)
    assert all(r["steps"] <= 11 for r in rows)
