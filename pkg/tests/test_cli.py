import csv
import io
import json
import subprocess
import sys

import pytest

from quatcat import cli
from quatcat.suites import SuiteResult


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def test_cells_n1(capsys):
    code, out = run(capsys, "cells", "--n", "1")
    assert code == 0
    assert out == "(1): dim 3\ncells 2; P(t)=1+t³\n"


def test_cells_n2(capsys):
    _, out = run(capsys, "cells", "--n", "2")
    lines = out.splitlines()
    assert lines[:3] == ["(1): dim 3", "(2): dim 7", "(2,1): dim 10"]
    assert lines[3] == "cells 4; P(t)=1+t³+t⁷+t¹⁰"


def test_cells_json(capsys):
    _, out = run(capsys, "cells", "--n", "5", "--json")
    payload = json.loads(out)
    assert payload["count"] == 32 and len(payload["cells"]) == 32
    assert max(c["dimension"] for c in payload["cells"]) == 55


def test_polynomial_with_repeated_degree():
    # n = 4: 3 + 15 = 7 + 11
    assert "2t¹⁸" in cli.format_polynomial(cli.poincare_polynomial(4))


def test_cells_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["cells", "--n", "0"])
    assert exc.value.code == 2


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["t", "sympl_residual", "dist_to_I", "in_qn"]
    return [(float(t), float(r), float(d), int(q)) for t, r, d, q in rows[1:]]


@pytest.mark.parametrize("which", ["O1", "O2", "O3"])
def test_path_trace(capsys, which):
    code, out = run(capsys, "path", "--n", "2", "--set", which, "--steps", "17", "--seed", "3")
    assert code == 0
    rows = parse_csv(out)
    assert len(rows) == 17
    assert rows[0][0] == 0.0 and rows[-1][0] == 1.0
    assert rows[-1][2] <= 1e-12
    assert all(r[1] <= 1e-10 for r in rows)


def test_path_first_row_distance(capsys):
    from quatcat.cover import CoverClass, sample_class
    from quatcat.hmat import fro_norm, identity

    _, out = run(capsys, "path", "--n", "3", "--set", "O1", "--steps", "5", "--seed", "8")
    p = sample_class(3, CoverClass.O1, 8, cli.PATH_SAMPLE_INDEX)
    assert parse_csv(out)[0][2] == pytest.approx(fro_norm(p.matrix - identity(3)), rel=1e-12)


def test_path_o2_in_qn_column(capsys):
    _, out = run(capsys, "path", "--n", "2", "--set", "O2", "--steps", "64")
    flags = {r[3] for r in parse_csv(out)}
    assert flags <= {0, 1}


def test_path_to_file(tmp_path, capsys):
    target = tmp_path / "trace.csv"
    code, out = run(capsys, "path", "--set", "O1", "--steps", "4", "--out", str(target))
    assert code == 0 and out == ""
    assert len(target.read_text().splitlines()) == 5


def test_verify_n1(capsys):
    code, out = run(capsys, "verify", "--n", "1", "--samples", "50")
    report = json.loads(out)
    assert code == 0 and report["verdict"] == "pass"
    o2 = next(s for s in report["suites"] if s["name"] == "cover_O2")
    assert o2["details"]["stays_in_qn"] is True


def test_verify_schema(capsys):
    _, out = run(capsys, "verify", "--n", "2", "--samples", "10", "--steps", "8")
    report = json.loads(out)
    assert set(report) == {"config", "suites", "verdict", "version"}
    assert report["config"] == {"n": 2, "samples": 10, "time_steps": 8, "tol": 1e-9, "seed": 42}
    for suite in report["suites"]:
        assert {"name", "expectation", "samples", "failures", "max_endpoint_residual", "max_symplectic_residual", "witness"} <= set(suite)
        assert suite["expectation"] in ("pass", "witness")
        if suite["witness"] is not None:
            assert set(suite["witness"]) == {"sample", "t"}


def test_verify_deterministic_across_threads(tmp_path, monkeypatch, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    cli.main(["verify", "--n", "2", "--samples", "8", "--steps", "6", "--out", str(a)])
    monkeypatch.setenv("QUATCAT_THREADS", "0")
    cli.main(["verify", "--n", "2", "--samples", "8", "--steps", "6", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--n", "0"],
        ["verify", "--samples", "0"],
        ["verify", "--steps", "1"],
        ["verify", "--tol", "-1"],
        ["verify", "--seed", "-3"],
        ["verify", "--bogus"],
        ["path", "--set", "O4"],
        ["path", "--steps", "1"],
        [],
    ],
)
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


def test_failing_suite_exits_one(monkeypatch, capsys):
    def broken(*args, **kwargs):
        return [SuiteResult("broken", 1, 1)]

    monkeypatch.setattr(cli, "run_all", broken)
    code, out = run(capsys, "verify", "--n", "1", "--samples", "1")
    assert code == 1 and json.loads(out)["verdict"] == "fail"


def test_missing_witness_fails():
    assert not SuiteResult("w", 3, 0, expectation="witness").passed
    assert SuiteResult("w", 3, 0, expectation="witness", witness={"sample": 0, "t": 0.0}).passed
    assert not SuiteResult("p", 3, 0, witness={"sample": 0, "t": 0.5}).passed


def test_worker_count(monkeypatch):
    monkeypatch.delenv("QUATCAT_THREADS", raising=False)
    assert cli.worker_count() == 1
    monkeypatch.setenv("QUATCAT_THREADS", "3")
    assert cli.worker_count() == 3
    monkeypatch.setenv("QUATCAT_THREADS", "0")
    assert cli.worker_count() >= 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "quatcat", "cells", "--n", "1"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("(1): dim 3")
