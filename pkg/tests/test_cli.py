from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings

from ehrhart_lab.cli import main, scott_map_csv
from ehrhart_lab.constructions import pip_b2_polygon
from ehrhart_lab.ehrhart import ehrhart_qp, scott_admissible
from ehrhart_lab.geometry import make_polygon
from ehrhart_lab.io import (
    FormatError,
    polygon_from_json,
    polygon_to_json,
    qp_from_json,
    qp_to_json,
    word_from_json,
)
from ehrhart_lab.lattice import count_lattice_points

from helpers import random_suite, rational_polygons

F = Fraction
PSEUDO = make_polygon([(0, -1), (F(1, 3), F(1, 3)), (F(-1, 3), F(2, 3))])


def write_polygon(tmp_path, P, name="poly.json"):
    path = tmp_path / name
    path.write_text(json.dumps(polygon_to_json(P)))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_periods_of_two_point_pip(tmp_path, capsys):
    path = write_polygon(tmp_path, pip_b2_polygon(1))
    code, out, _ = run(capsys, "periods", path)
    assert code == 0
    assert out.strip() == '{"s":[1,1,1],"quasi_period":1,"j":[2,1,1]}'


def test_count_matches_library(tmp_path, capsys):
    for i, P in enumerate(random_suite(25, seed=11)):
        path = write_polygon(tmp_path, P, f"p{i}.json")
        for n in (1, 4):
            code, out, _ = run(capsys, "count", path, "--n", str(n))
            assert code == 0 and json.loads(out) == {"n": n, "count": count_lattice_points(P, n)}
            code, out, _ = run(capsys, "oracle-count", path, "-n", str(n))
            assert json.loads(out)["count"] == count_lattice_points(P, n)


def test_ehrhart_output_round_trips(tmp_path, capsys):
    path = write_polygon(tmp_path, PSEUDO)
    code, out, _ = run(capsys, "ehrhart", path)
    assert code == 0 and qp_from_json(json.loads(out)) == ehrhart_qp(PSEUDO)


def test_construct_period(capsys):
    code, out, _ = run(capsys, "construct", "period", "--r", "2", "--s", "3")
    data = json.loads(out)
    assert code == 0
    assert data["certificate"] == {"claim": {"period_sequence": [2, 3, 1]}, "verified": True}
    assert len(data["vertices"]) == 7


@pytest.mark.parametrize(
    "argv",
    [
        ("construct", "scott", "--I", "2", "--b", "10"),
        ("construct", "pip-b1", "--I", "4"),
        ("construct", "pip-b2", "--I", "4"),
        ("construct", "heptagon", "--s", "4"),
        ("construct", "triangle-q", "--r", "4", "--anchor", "2,-1"),
    ],
)
def test_constructions_verify(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and json.loads(out)["certificate"]["verified"] is True


def test_pip_report_dual_and_reflexive(tmp_path, capsys):
    path = write_polygon(tmp_path, PSEUDO)
    _, out, _ = run(capsys, "pip-report", path)
    assert json.loads(out) == {
        "is_pip": True,
        "pick_defect": "0",
        "boundary_scaling_ok": True,
        "interior": 1,
        "boundary": 1,
        "s": [1, 1, 1],
    }
    _, out, _ = run(capsys, "dual", path)
    assert polygon_from_json(json.loads(out)) == make_polygon([(4, -1), (1, 2), (-5, -1)])
    _, out, _ = run(capsys, "reflexive", path)
    assert json.loads(out)["pseudo_reflexive"] is True
    _, out, _ = run(capsys, "indices", path)
    assert json.loads(out) == {"j": [3, 1, 1]}


def test_word_subcommands(tmp_path, capsys):
    path = write_polygon(tmp_path, PSEUDO)
    code, out, _ = run(capsys, "word", "extract", path)
    word = json.loads(out)
    assert code == 0 and word["letters"] == [{"a": "1/3", "b": 9}] * 3
    wpath = tmp_path / "word.json"
    wpath.write_text(out)
    _, out, _ = run(capsys, "word", "product", str(wpath))
    assert json.loads(out)["matrix"] == [["1", "0"], ["0", "1"]]
    _, out, _ = run(capsys, "word", "reconstruct", str(wpath))
    data = json.loads(out)
    assert data["winding"] == 1 and data["closes"] is True and len(data["vertices"]) == 3


def test_scott_map_rows(capsys):
    code, out, _ = run(capsys, "scott-map", "--max-I", "6", "--max-b", "18", "--pips")
    lines = out.strip().split("\n")
    assert code == 0 and lines[0] == "I,b,realizable_integral,realizable_pip_known"
    rows = {tuple(map(int, line.split(","))) for line in lines[1:]}
    assert len(rows) == 7 * 19
    for I, b, integral, pip in rows:
        assert integral == scott_admissible(I, b)
        assert pip == scott_admissible(I, b, allow_pip_extension=True)
    assert {(1, 9, 1, 1), (1, 10, 0, 0), (3, 1, 0, 1), (0, 2, 0, 0), (6, 18, 1, 1)} <= rows
    assert scott_map_csv(1, 3, False).split("\n")[0] == "I,b,realizable_integral"


def test_pip_scan_csv(capsys, tmp_path):
    code, out, _ = run(capsys, "pip-scan", "--max-den", "0", "--bound", "0")
    assert code == 0 and out == "I,b,vertices\n"
    target = tmp_path / "scan.csv"
    run(capsys, "--output", str(target), "pip-scan", "--max-den", "2", "--bound", "1")
    first = target.read_bytes()
    run(capsys, "--output", str(target), "pip-scan", "--max-den", "2", "--bound", "1")
    assert target.read_bytes() == first and first.startswith(b"I,b,vertices\n")


def test_thread_variable_is_validated(capsys, monkeypatch):
    monkeypatch.setenv("EHRHART_LAB_THREADS", "zero")
    code, _, err = run(capsys, "pip-scan", "--max-den", "1", "--bound", "1")
    assert code == 2 and "EHRHART_LAB_THREADS" in err
    monkeypatch.setenv("EHRHART_LAB_THREADS", "4")
    assert run(capsys, "pip-scan", "--max-den", "1", "--bound", "1")[0] == 0


def test_validation_errors_exit_two(tmp_path, capsys):
    assert run(capsys, "count", str(tmp_path / "missing.json"), "--n", "1")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "count", str(bad), "--n", "1")[0] == 2
    flat = tmp_path / "flat.json"
    flat.write_text('{"vertices": [["0","0"],["1","1"],["2","2"]]}')
    assert run(capsys, "ehrhart", str(flat))[0] == 2
    corner = write_polygon(tmp_path, make_polygon([(0, 0), (1, 0), (0, 1)]))
    assert run(capsys, "dual", corner)[0] == 2
    assert run(capsys, "construct", "scott", "--I", "1", "--b", "10")[0] == 2


def test_usage_errors_name_the_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["count", "x.json", "--n", "0"])
    assert exc.value.code == 2
    assert "--n" in capsys.readouterr().err
    with pytest.raises(SystemExit) as exc:
        main(["scott-map", "--max-I", "two", "--max-b", "3"])
    assert exc.value.code == 2 and "--max-I" in capsys.readouterr().err


def test_internal_failures_exit_one(capsys):
    # A search grid far too small for the pair is a failed computation, not bad input.
    code, _, err = run(capsys, "construct", "scott", "--I", "4", "--b", "14", "--bound", "1")
    assert code == 1 and "SearchExhausted" in err


def test_console_script_entry_point(tmp_path):
    path = write_polygon(tmp_path, pip_b2_polygon(1))
    proc = subprocess.run(
        [sys.executable, "-m", "ehrhart_lab.cli", "count", path, "--n", "3"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert json.loads(proc.stdout) == {"n": 3, "count": 13}


def test_polygon_json_parsing():
    P = polygon_from_json({"vertices": [["0", "-2/2"], ["2/6", 0], ["-1/3", "4/6"], [0, 0]]})
    assert polygon_to_json(P) == {"vertices": [["-1/3", "2/3"], ["0", "-1"], ["1/3", "0"]]}
    for bad in ({}, {"vertices": [["1"]]}, {"vertices": [[1.5, 0]]}, {"vertices": [["a", "b"]]}):
        with pytest.raises(FormatError):
            polygon_from_json(bad)


def test_word_json_rejects_malformed_letters():
    with pytest.raises(FormatError):
        word_from_json({"letters": [{"a": "1/3"}]})
    with pytest.raises(FormatError):
        word_from_json({"order": "paper-right-to-left"})


@settings(max_examples=60, deadline=None)
@given(rational_polygons())
def test_polygon_json_round_trip(P):
    assert polygon_from_json(json.loads(json.dumps(polygon_to_json(P)))) == P


@settings(max_examples=20, deadline=None)
@given(rational_polygons(max_den=3, max_coord=3))
def test_qp_json_round_trip(P):
    qp = ehrhart_qp(P)
    assert qp_from_json(json.loads(json.dumps(qp_to_json(qp)))) == qp
