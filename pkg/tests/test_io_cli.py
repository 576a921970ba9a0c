import csv
import json
import math

import numpy as np
import pytest

from abssum.cli import main
from abssum.errors import NonFinite
from abssum.io import MatrixFileError, loads_matrix, read_matrix, read_tuple, write_matrix, write_tuple
from abssum.matlin import abs_value

from conftest import cgauss


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def exit_code(argv):
    # argparse errors raise SystemExit; runtime errors are returned
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code


def test_matrix_file_round_trip_is_exact(tmp_path, rng):
    a = cgauss(rng, 3, 5) * 1e-7 + np.pi
    write_matrix(tmp_path / "a.json", a)
    np.testing.assert_array_equal(read_matrix(tmp_path / "a.json"), a)


def test_tuple_round_trip(tmp_path, rng):
    stack = cgauss(rng, 3, 2, 2)
    paths = write_tuple(tmp_path, stack)
    assert [p.rsplit("/", 1)[1] for p in paths] == ["A01.json", "A02.json", "A03.json"]
    np.testing.assert_array_equal(np.stack(read_tuple(paths)), stack)


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        '{"rows": 2, "cols": 2}',
        '{"rows": 2, "cols": 2, "data": [[1, 0]]}',
        '{"rows": 0, "cols": 1, "data": []}',
        '{"rows": 1, "cols": 1, "data": [1]}',
    ],
)
def test_malformed_matrix_files(text):
    with pytest.raises(MatrixFileError):
        loads_matrix(text)


def test_nonfinite_entries_rejected():
    with pytest.raises(NonFinite):
        loads_matrix('{"rows": 1, "cols": 1, "data": [[NaN, 0]]}')


def test_cli_abs(tmp_path, capsys, rng):
    a = cgauss(rng, 3, 3)
    write_matrix(tmp_path / "a.json", a)
    code, rep = run(capsys, "abs", str(tmp_path / "a.json"), "-o", str(tmp_path / "b.json"))
    assert code == 0 and rep["command"] == "abs"
    np.testing.assert_allclose(read_matrix(tmp_path / "b.json"), abs_value(a), atol=1e-14)


def test_cli_ratio_identity(tmp_path, capsys):
    paths = write_tuple(tmp_path, np.stack([np.eye(2), np.eye(2)]))
    code, rep = run(capsys, "ratio", *paths, "--p", "inf")
    assert code == 0
    assert rep["results"]["ratio"] == pytest.approx(1.0)
    assert rep["results"]["p"] == "inf"


def test_cli_extremal_emits_loadable_witness(tmp_path, capsys):
    code, rep = run(capsys, "extremal", "--m", "9", "--optimal", "--emit-tuple", str(tmp_path / "w"))
    assert code == 0
    assert rep["results"]["ratio"] == pytest.approx(math.sqrt(2), abs=1e-8)
    code, again = run(capsys, "ratio", *rep["results"]["files"])
    assert code == 0
    assert again["results"]["ratio"] == pytest.approx(math.sqrt(2), abs=1e-10)


def test_cli_extremal_optimal_p3(capsys):
    code, rep = run(capsys, "extremal", "--m", "3", "--optimal", "--p", "3")
    assert code == 0
    assert rep["results"]["ratio"] == pytest.approx(rep["results"]["conjectured"], rel=1e-8)
    assert all(c["passed"] for c in rep["checks"])


def test_cli_conjecture_table_csv(tmp_path, capsys):
    out = tmp_path / "t.csv"
    code, rep = run(capsys, "conjecture", "--p", "2", "3", "--m", "2", "4", "--table", "--csv", str(out))
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 4 == len(rep["results"]["rows"])
    assert list(rows[0]) == ["p", "m", "x", "log_x", "c", "residual", "universal"]
    assert float(rows[0]["c"]) == pytest.approx(math.sqrt((1 + math.sqrt(2)) / 2), abs=1e-15)


def test_cli_conjecture_limit(capsys):
    code, rep = run(capsys, "conjecture", "--limit", "--m", "2", "4", "9")
    assert code == 0
    for m in ("2", "4", "9"):
        assert rep["results"][m]["gap_near_one"] <= 0.01
        assert rep["results"][m]["gap_large_p"] <= 0.01


@pytest.mark.parametrize(
    "argv",
    [
        ["conjecture", "--p", "1"],
        ["conjecture", "--p", "inf"],
        ["conjecture", "--p", "1.0000001"],
        ["conjecture", "--p", "2", "3"],
        ["ratio", "missing.json"],
        ["extremal", "--m", "3"],
        ["extremal", "--m", "3", "--s", "1.5"],
        ["search", "--p", "0.5"],
        ["nonsense"],
    ],
)
def test_cli_usage_errors(capsys, argv):
    assert exit_code(argv) == 1
    capsys.readouterr()


def test_cli_ratio_violating_conjecture_is_not_a_theorem_failure(tmp_path, capsys):
    # a plain identity pair passes every check
    paths = write_tuple(tmp_path, np.stack([np.eye(2)] * 2))
    code, rep = run(capsys, "ratio", *paths, "--p", "3")
    assert code == 0
    kinds = {c["name"]: c["kind"] for c in rep["checks"]}
    assert kinds["conjectured_constant"] == "conjecture"
    assert kinds["universal_bound"] == "theorem"


def test_cli_check_suite(capsys):
    code, rep = run(capsys, "check", "--suite", "lemma", "--samples", "50")
    assert code == 0
    assert rep["results"]["lemma"]["failures"] == 0


def test_cli_search_and_replay(tmp_path, capsys):
    report = tmp_path / "r.json"
    wdir = tmp_path / "w"
    argv = ["search", "--m", "2", "--n", "2", "--restarts", "2", "--iters", "200", "--threads", "2"]
    code = main([*argv, "--witness-dir", str(wdir), "--report", str(report)])
    assert code == 0
    rep = json.loads(report.read_text())
    assert len(rep["results"]["witness_files"]) == 2
    _, again = run(capsys, "ratio", *rep["results"]["witness_files"])
    assert again["results"]["ratio"] == pytest.approx(rep["results"]["best_ratio"], abs=1e-10)
    code, replayed = run(capsys, "replay", str(report), "--threads", "1")
    assert code == 0
    assert replayed["differences"] == []
