import json

import pytest

from hapsris.cli import EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_OK, main
from hapsris.harness import CSV_HEADER

SMALL = {
    "ues": {"count": 3, "seed": 5},
    "ris": {"n_total": 90000, "scheme": "II"},
}


@pytest.fixture()
def small_config(tmp_path):
    path = tmp_path / "small.json"
    path.write_text(json.dumps(SMALL))
    return str(path)


def test_solve_default_scheme(small_config, capsys):
    assert main(["solve", small_config]) == EXIT_OK
    out = capsys.readouterr().out
    assert "sum rate" in out
    assert "feasible        true" in out


def test_solve_infeasible_exit_code(tmp_path):
    cfg = {"ues": {"count": 3, "seed": 5}, "ris": {"n_total": 6000, "scheme": "passive"}}
    path = tmp_path / "tiny.json"
    path.write_text(json.dumps(cfg))
    assert main(["solve", str(path)]) == EXIT_INFEASIBLE


def test_solve_config_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"nope": 1}')
    assert main(["solve", str(path)]) == EXIT_CONFIG


def test_validate_good_and_bad(small_config, tmp_path):
    assert main(["validate", small_config]) == EXIT_OK
    bad = tmp_path / "broken.json"
    bad.write_text("{")
    assert main(["validate", str(bad)]) == EXIT_CONFIG


def test_sweep_writes_csv(small_config, tmp_path):
    out = tmp_path / "results.csv"
    code = main(
        [
            "sweep",
            small_config,
            "--var", "elements",
            "--values", "80000:100000:10000",
            "--schemes", "II,passive",
            "--out", str(out),
            "--seed", "5",
        ]
    )
    assert code == EXIT_OK
    lines = out.read_text().strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + 3 * 2


def test_sweep_pa_power_values(small_config, tmp_path):
    out = tmp_path / "pa.csv"
    code = main(
        [
            "sweep",
            small_config,
            "--var", "pa-power",
            "--values", "30,33",
            "--schemes", "II",
            "--out", str(out),
        ]
    )
    assert code == EXIT_OK
    rows = out.read_text().strip().split("\n")[1:]
    assert [r.split(",")[4] for r in rows] == ["30.0", "33.0"]


def test_gen_scenario_roundtrip(small_config, tmp_path):
    resolved = tmp_path / "scenario.json"
    assert main(["gen-scenario", small_config, "--out", str(resolved)]) == EXIT_OK
    data = json.loads(resolved.read_text())
    assert len(data["ues"]["positions"]) == 3
    assert main(["validate", str(resolved)]) == EXIT_OK


def test_sweep_rejects_bad_values(small_config, tmp_path):
    code = main(
        ["sweep", small_config, "--values", "1:2", "--out", str(tmp_path / "x.csv")]
    )
    assert code == EXIT_CONFIG
