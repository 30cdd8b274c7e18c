import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from conftest import random_graph, random_matroid
from supdense.cli import run
from supdense.core import parse_rational

DATA = Path(__file__).parent / "data"


def cli(capsys, *args):
    code = run(["densest", *map(str, args)])
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *args):
    code, out, err = cli(capsys, *args, "--json")
    assert code == 0, err
    return json.loads(out)


def test_k3(capsys):
    r = report(capsys, DATA / "k3.graph")
    assert r["best_density"]["exact"] == "1/1"
    assert r["best_set"]["ids"] == [0, 1, 2]
    assert r["variant"] == "unconstrained" and r["engine"] == "flow"


def test_matroid_verify(capsys):
    r = report(capsys, DATA / "k3iso.graph", "--matroid", DATA / "card0.json", "--verify")
    assert r["best_density"]["exact"] == "3/4"
    assert r["factor_certificate"]["ratio"] == "1/1"
    assert r["factor_certificate"]["within_guarantee"]


def test_knapsack_infeasible_exit_2(capsys):
    code, _, err = cli(capsys, DATA / "k3.graph", "--knapsack", DATA / "w.txt", "--k", 999)
    assert code == 2 and "infeasible" in err


def test_knapsack(capsys):
    r = report(capsys, DATA / "k3iso.graph", "--knapsack", DATA / "w4.txt", "--k", 5, "--verify")
    assert r["variant"] == "knapsack" and r["best_density"]["exact"] == "3/4"
    assert r["factor_certificate"]["guarantee"] == 3


def test_closure_and_subset(capsys):
    a = report(capsys, DATA / "k3pendant.graph", "--closure", DATA / "arcs.txt", "--verify")
    b = report(capsys, DATA / "k3pendant.graph", "--require", "3", "--verify")
    assert a["variant"] == "closure" and b["variant"] == "subset"
    assert a["best_density"]["exact"] == b["best_density"]["exact"] == "1/1"
    assert a["factor_certificate"]["ratio"] == "1/1"


def test_table(capsys):
    r = report(capsys, DATA / "and2.tbl", "--table", "--trace")
    assert r["engine"] == "brute" and r["best_density"]["exact"] == "1/2"
    assert r["trace"]["iterations"] >= 1


def test_table_with_flow_engine_is_usage_error(capsys):
    code, _, err = cli(capsys, DATA / "and2.tbl", "--table", "--engine", "flow")
    assert code == 1 and "flow" in err


def test_brute_override_warns(capsys):
    code, out, err = cli(capsys, DATA / "k3.graph", "--engine", "brute")
    assert code == 0 and "warning" in err and "1/1" in out


def test_format_error_names_file_and_line(capsys, tmp_path):
    bad = tmp_path / "bad.graph"
    bad.write_text("3 2\n0 1\n0 1\n")
    code, _, err = cli(capsys, bad)
    assert code == 3 and f"{bad}:3" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = cli(capsys, tmp_path / "nope.graph")
    assert code == 3


def test_cap_exceeded(capsys, tmp_path):
    big = tmp_path / "big.graph"
    big.write_text("22 1\n0 1\n")
    code, _, err = cli(capsys, big, "--verify")
    assert code == 4 and "cap" in err


def test_usage_errors(capsys):
    assert cli(capsys, DATA / "k3.graph", "--knapsack", DATA / "w.txt")[0] == 1
    assert cli(capsys, DATA / "k3.graph", "--matroid", DATA / "card0.json", "--closure", DATA / "arcs.txt")[0] == 1
    assert cli(capsys, DATA / "k3.graph", "--require", "9")[0] == 3
    assert run(["bogus"]) == 1


def test_text_trace(capsys):
    code, out, _ = cli(capsys, DATA / "k3iso.graph", "--matroid", DATA / "card0.json", "--trace", "--verify")
    assert code == 0
    assert "H1 = [0, 1, 2]" in out and "D'1" in out and "ratio 1/1" in out


def test_golden_report(capsys):
    r = report(capsys, DATA / "k3pendant.graph", "--matroid", DATA / "part.json", "--require", "3",
               "--verify", "--trace")
    assert isinstance(r.pop("wall_time"), float)
    golden = json.loads((DATA / "golden_combo.json").read_text())
    assert r == golden


def test_json_stable_modulo_wall_time(capsys):
    args = (DATA / "k3iso.graph", "--matroid", DATA / "card0.json", "--verify", "--trace")
    a, b = report(capsys, *args), report(capsys, *args)
    a.pop("wall_time"), b.pop("wall_time")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_density_string_roundtrip(capsys):
    r = report(capsys, DATA / "k3iso.graph", "--matroid", DATA / "card0.json")
    assert parse_rational(r["best_density"]["exact"]) == Fraction(3, 4)


def test_verify_ratio_within_guarantee(capsys, rng, tmp_path):
    for i in range(15):
        g = random_graph(rng, rng.randint(2, 8), 0.5, wmax=3)
        gp = tmp_path / f"g{i}.graph"
        gp.write_text(f"{g.n} {len(g.edges)}\n" + "".join(f"{u} {v} {w}\n" for u, v, w in g.edges))
        m = random_matroid(rng, g.n)
        from supdense.matroid import matroid_to_spec

        mp = tmp_path / f"m{i}.json"
        mp.write_text(json.dumps(matroid_to_spec(m)))
        r = report(capsys, gp, "--matroid", mp, "--verify")
        cert = r["factor_certificate"]
        assert cert["within_guarantee"] and parse_rational(cert["ratio"]) <= 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "supdense", "densest", str(DATA / "k3.graph"), "--json"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["best_density"]["exact"] == "1/1"
