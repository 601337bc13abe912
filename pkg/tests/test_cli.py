import csv
import json
import math

import pytest

from selftrap import cli


def run(tmp_path, *args):
    return cli.main([*args, "--out", str(tmp_path)])


def read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_solve_newton_schroedinger(tmp_path):
    assert run(tmp_path, "solve", "--c", "0", "--g", "0") == cli.EXIT_OK
    prof = read_csv(tmp_path / "profile.csv")
    assert list(prof[0]) == ["r", "psi", "V_g"]
    (obs,) = read_csv(tmp_path / "observables.csv")
    assert obs["certified"] == "true"
    assert float(obs["chemical_potential"]) == pytest.approx(-0.3255384, abs=1e-6)
    assert json.loads((tmp_path / "status.json").read_text())["status"] == "ok"


def test_solve_past_fold(tmp_path):
    assert run(tmp_path, "solve", "--c", "-2", "--g", "0") == cli.EXIT_NO_SOLUTION
    status = json.loads((tmp_path / "status.json").read_text())
    assert status["status"] == "no_solution"
    assert status["evidence"]["c_fold"] == pytest.approx(-1.0251, abs=2e-3)


def test_physical_inputs_match_scaled(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["solve", "--N", "1000", "--a-over-au", "1e-6", "--gamma", "0", "--out", str(a)]) == 0
    assert cli.main(["solve", "--c", "1", "--g", "0", "--out", str(b)]) == 0
    (ra,) = read_csv(a / "observables.csv")
    (rb,) = read_csv(b / "observables.csv")
    for k, v in rb.items():
        assert ra[k] == v
    assert float(ra["energy_N"]) == pytest.approx(1e9 * float(rb["energy"]), rel=1e-11)
    assert float(ra["rms_radius_N"]) == pytest.approx(float(rb["rms_radius"]) / 1000, rel=1e-11)
    assert (a / "profile.csv").read_bytes() == (b / "profile.csv").read_bytes()


@pytest.mark.parametrize(
    "args",
    [
        ["solve", "--c", "1", "--N", "10"],
        ["solve", "--g", "1"],
        ["solve", "--N", "10"],
        ["solve", "--c", "-0.5", "--branch", "upper", "--solver", "scf"],
        ["solve", "--c", "1", "--g", "-1"],
        ["branch", "--psi0-min", "0"],
        ["foldcurve", "--g-values", "-1"],
        ["solve", "--c", "1", "--solver", "scf", "--mixing", "0"],
    ],
)
def test_usage_errors(tmp_path, args):
    assert run(tmp_path, *args) == cli.EXIT_USAGE


def test_argparse_errors_exit_2(tmp_path):
    with pytest.raises(SystemExit) as e:
        cli.main(["solve", "--branch", "middle", "--c", "1"])
    assert e.value.code == 2


def test_solve_with_scf_and_si_inputs(tmp_path):
    assert run(tmp_path, "solve", "--c", "1", "--g", "1", "--solver", "scf", "--format", "json") == 0
    doc = json.loads((tmp_path / "observables.json").read_text())
    assert doc["rows"][0]["solver"] == "scf"
    si = tmp_path / "si"
    code = cli.main(
        ["solve", "--N", "100", "--mass", "1.443e-25", "--u", "1e-40", "--scattering-length", "0",
         "--out", str(si)]
    )
    assert code == 0
    (row,) = read_csv(si / "observables.csv")
    assert float(row["a_u"]) > 0


def test_solver_failure_exit_code(tmp_path):
    parser_args = ["solve", "--c", "1", "--solver", "scf", "--max-iter", "3"]
    assert run(tmp_path, *parser_args) == cli.EXIT_FAILURE
    assert json.loads((tmp_path / "status.json").read_text())["status"] == "solver_failure"


def test_fold_command(tmp_path):
    assert run(tmp_path, "fold", "--g", "0") == 0
    (row,) = read_csv(tmp_path / "fold.csv")
    assert float(row["c_star"]) == pytest.approx(-1.0251, abs=2e-3)
    assert float(row["c_star_variational"]) == pytest.approx(-3 * math.pi / 8, abs=1e-9)


def test_variational_near_degenerate_pair(tmp_path):
    assert run(tmp_path, "variational", "--g", "0", "--c", "-1.178") == 0
    rows = read_csv(tmp_path / "variational.csv")
    assert [r["kind"] for r in rows] == ["max", "min"]
    s = [float(r["sigma"]) for r in rows]
    assert abs(s[1] - s[0]) / s[0] < 0.05


def test_compare_columns(tmp_path):
    assert run(tmp_path, "compare", "--g", "0", "--c", "10") == 0
    (row,) = read_csv(tmp_path / "compare.csv")
    for q in ("E", "eps", "rms", "peak"):
        num, var, dev = (float(row[f"{q}_{s}"]) for s in ("num", "var", "rel_dev"))
        assert dev == pytest.approx((var - num) / abs(num), rel=1e-6)


def test_branch_command_and_gaps(tmp_path):
    assert run(tmp_path, "branch", "--g", "0", "--psi0-min", "0.05", "--psi0-max", "1", "--steps", "5") == 0
    rows = read_csv(tmp_path / "branch.csv")
    assert len(rows) == 5
    assert {r["branch"] for r in rows} == {"lower", "upper"}


def test_foldcurve_command(tmp_path):
    assert run(tmp_path, "foldcurve", "--g-values", "0", "0.1", "--format", "json") == 0
    doc = json.loads((tmp_path / "foldcurve.json").read_text())
    assert [r["g"] for r in doc["rows"]] == [0.0, 0.1]


def test_json_round_trip(tmp_path):
    assert run(tmp_path, "solve", "--c", "0.5", "--format", "json") == 0
    text = (tmp_path / "observables.json").read_text()
    doc = json.loads(text)
    assert json.dumps(doc, indent=2, allow_nan=False) + "\n" == text
    assert doc["columns"] == list(doc["rows"][0])


def test_output_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_ENV, str(tmp_path / "env"))
    assert cli.main(["variational", "--c", "1"]) == 0
    assert (tmp_path / "env" / "variational.csv").exists()


def test_twelve_significant_digits():
    assert cli._cell(cli._round(math.pi)) == "3.14159265359"
    assert cli._round(math.nan) is None
    assert cli._cell(None) == "nan"
