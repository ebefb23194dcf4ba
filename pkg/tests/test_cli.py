import csv
import io
import json
import math
import subprocess
import sys

import pytest

from confined_atom import cli
from confined_atom.bound_state import solve_bound_state
from confined_atom.core import AtomConfig


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _rows(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_bound_csv(capsys):
    code, out, _ = _run(capsys, "bound", "--Z", "1", "--a", "1")
    assert code == 0
    assert out.startswith("# confined_atom ")
    (row,) = _rows(out)
    assert float(row["k_b"]) == pytest.approx(solve_bound_state(AtomConfig(1.0, 1.0)).k_b, rel=1e-12)
    assert row["bound"] == "1"


def test_bound_isolated_json(capsys):
    code, out, _ = _run(capsys, "bound", "--Z", "2", "--isolated", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "bound"
    assert doc["rows"][0]["k_b"] == 2.0
    assert doc["rows"][0]["a"] == "inf"


def test_bound_rejects_unbound(capsys):
    code, out, err = _run(capsys, "bound", "--Z", "0.25", "--a", "2")
    assert code == cli.EXIT_NO_BOUND_STATE
    assert out == "" and "no bound state" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["bound", "--Z", "1"],
        ["bound", "--Z", "-1", "--a", "2"],
        ["bound", "--a", "2"],
        ["nonsense"],
        ["static-sweep", "--Z", "1", "--a-min", "5", "--a-max", "1"],
        ["dynamic", "--Z", "1", "--a", "3", "--eta", "0"],
    ],
)
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc_info:
        code = cli.main(argv)
        raise SystemExit(code)
    assert exc_info.value.code == cli.EXIT_USAGE


def test_static_sweep_skips_unbound_and_compares(capsys):
    code, out, err = _run(
        capsys, "static-sweep", "--Z", "0.5", "--a-min", "0.5", "--a-max", "20", "--points", "6", "--compare-isolated"
    )
    assert code == 0
    rows = _rows(out)
    assert len(rows) == 5 and "skipped" in err
    assert all(float(r["alpha_isolated"]) == pytest.approx(20.0) for r in rows)
    assert all(math.isnan(float(r["alpha_asymptotic"])) for r in rows)
    alphas = [float(r["alpha"]) for r in rows]
    assert alphas[-1] == pytest.approx(20.0, rel=0.01)


def test_static_sweep_writes_file(tmp_path, capsys):
    path = tmp_path / "sweep.csv"
    code, out, _ = _run(capsys, "static-sweep", "--Z", "1", "--a-min", "1", "--a-max", "4", "--points", "3", "--out", str(path))
    assert code == 0 and out == ""
    assert len(_rows(path.read_text())) == 3


def test_unwritable_output(tmp_path, capsys):
    code, _, err = _run(
        capsys, "static-sweep", "--Z", "1", "--a-min", "1", "--a-max", "2", "--out", str(tmp_path / "no" / "x.csv")
    )
    assert code == cli.EXIT_IO and "cannot write" in err


def test_resonance(capsys):
    code, out, _ = _run(capsys, "resonance", "--Z", "1", "--isolated", "--F", "0.05", "--F", "0.1")
    assert code == 0
    rows = _rows(out)
    assert [float(r["F"]) for r in rows] == [0.05, 0.1]
    assert float(rows[0]["gamma"]) == pytest.approx(1.4766533972744975e-06, rel=1e-7)
    assert all(r["converged"] == "1" for r in rows)


def test_dynamic_multiple_distances(capsys):
    code, out, _ = _run(
        capsys, "dynamic", "--Z", "0.25", "--a", "10", "--isolated", "--omega-max", "0.5", "--omega-points", "3", "--json"
    )
    assert code == 0
    doc = json.loads(out)
    assert len(doc["rows"]) == 6
    assert doc["rows"][0]["a"] == 10.0 and doc["rows"][-1]["a"] == "inf"


def test_oracle(capsys):
    code, out, _ = _run(capsys, "oracle", "--Z", "1", "--a", "3", "--N", "2000", "--omega", "0.3")
    assert code == 0
    (row,) = _rows(out)
    assert float(row["alpha_oracle"]) == pytest.approx(float(row["alpha"]), rel=0.01)
    assert float(row["trk"]) == pytest.approx(1.0, rel=0.02)


def test_output_independent_of_threads(capsys, monkeypatch):
    argv = ["dynamic", "--Z", "0.5", "--a", "5", "--omega-points", "7"]
    monkeypatch.setenv(cli.THREADS_ENV, "1")
    _, one, _ = _run(capsys, *argv)
    monkeypatch.setenv(cli.THREADS_ENV, "3")
    _, three, _ = _run(capsys, *argv)
    assert one == three


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "confined_atom", "bound", "--Z", "1", "--a", "0.4"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == cli.EXIT_NO_BOUND_STATE


def test_dynamic_zero_frequency_matches_static_sweep(capsys):
    _, dyn, _ = _run(capsys, "dynamic", "--Z", "0.25", "--a", "10", "--omega-max", "0", "--omega-points", "1")
    _, sweep, _ = _run(capsys, "static-sweep", "--Z", "0.25", "--a-min", "10", "--a-max", "11", "--points", "1")
    assert float(_rows(dyn)[0]["re_alpha"]) == pytest.approx(float(_rows(sweep)[0]["alpha"]), rel=0.01)
