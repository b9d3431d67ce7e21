import json
import os

import pandas as pd
import pytest

from qcoexist import cli
from qcoexist.constants import CHARACTERIZE_COLUMNS, PLACEMENT_COLUMNS, SWEEP_COLUMNS
from qcoexist.utils.errors import NoCrossover

SHORT_SWEEP = {"powers_dbm": [-24.0, -12.0, 0.0]}


def _invoke(runner, *args):
    return runner.invoke(args=list(args))


def _read_meta(path):
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def test_sweep_writes_table_and_metadata(runner, write_config, tmp_path):
    path = write_config({"fibre": "smf", "sweep": SHORT_SWEEP})
    out = tmp_path / "out"
    result = _invoke(runner, "sweep", "--config", path, "--out", str(out))
    assert result.exit_code == 0, result.output

    with open(out / "sweep.csv", "r", encoding="utf-8") as f:
        assert f.readline().strip() == ",".join(SWEEP_COLUMNS)
    table = pd.read_csv(out / "sweep.csv")
    assert list(table["power_dBm"]) == [-24.0, -12.0, 0.0]
    assert table["skr_bps"].is_monotonic_decreasing

    meta = _read_meta(out / "sweep.meta.json")
    assert meta["command"] == "sweep"
    assert "created_at" in meta
    assert meta["config"]["fibre"]["name"] == "smf"
    assert meta["calibration"]["target_qber"] == 0.03
    assert meta["sweep"]["spacing_ghz"] == pytest.approx(200.0)


def test_sweep_is_byte_identical_across_runs(runner, write_config, tmp_path):
    path = write_config({"fibre": "hcnanf", "scenario": 2, "sweep": SHORT_SWEEP})
    first, second = tmp_path / "a", tmp_path / "b"
    assert _invoke(runner, "sweep", "--config", path, "--out", str(first)).exit_code == 0
    assert _invoke(runner, "sweep", "--config", path, "--out", str(second)).exit_code == 0
    assert (first / "sweep.csv").read_bytes() == (second / "sweep.csv").read_bytes()


def test_preset_option_overrides_fibre(runner, write_config, tmp_path):
    path = write_config({"fibre": "smf", "sweep": SHORT_SWEEP})
    result = _invoke(runner, "sweep", "--config", path, "--out", str(tmp_path), "--preset", "hcnanf")
    assert result.exit_code == 0, result.output
    assert _read_meta(tmp_path / "sweep.meta.json")["config"]["fibre"]["name"] == "hcnanf"


def test_output_prefix_and_directory_from_config(runner, write_config, tmp_path):
    out = tmp_path / "from_config"
    path = write_config({"fibre": "smf", "sweep": SHORT_SWEEP, "output": {"directory": str(out), "prefix": "run1_"}})
    result = _invoke(runner, "sweep", "--config", path)
    assert result.exit_code == 0, result.output
    assert os.path.exists(out / "run1_sweep.csv")
    assert os.path.exists(out / "run1_sweep.meta.json")


def test_characterize_stays_near_baseline(runner, write_config, tmp_path):
    path = write_config({"fibre": "smf", "sweep": {"powers_dbm": [-12.0], "channel_counts": [4, 8]}})
    result = _invoke(runner, "characterize", "--config", path, "--out", str(tmp_path))
    assert result.exit_code == 0, result.output

    table = pd.read_csv(tmp_path / "characterize.csv")
    assert list(table.columns) == CHARACTERIZE_COLUMNS
    assert list(table["channels"]) == [4, 8]
    assert (table["raman_cps"] == 0).all()
    assert table["skr_bps"].between(2100.0, 2300.0 * 1.001).all()
    assert _read_meta(tmp_path / "characterize.meta.json")["characterize"]["fibre"] is None


def test_placement_reports_extrema(runner, write_config, tmp_path):
    path = write_config({"fibre": "smf", "sweep": {"spacing_max_ghz": 1500.0, "spacing_step_ghz": 100.0}})
    result = _invoke(runner, "placement", "--config", path, "--out", str(tmp_path))
    assert result.exit_code == 0, result.output

    table = pd.read_csv(tmp_path / "placement.csv")
    assert list(table.columns) == PLACEMENT_COLUMNS
    assert len(table) == 15
    placement = _read_meta(tmp_path / "placement.meta.json")["placement"]
    assert placement["best_spacing_ghz"] == 100.0
    assert 1000.0 <= placement["worst_spacing_ghz"] <= 1400.0
    assert placement["objective"] == "qber"


def test_crossover_writes_single_row(runner, write_config, tmp_path):
    path = write_config({"fibre": "smf"})
    result = _invoke(runner, "crossover", "--config", path, "--out", str(tmp_path))
    assert result.exit_code == 0, result.output

    table = pd.read_csv(tmp_path / "crossover.csv")
    assert list(table.columns) == ["spacing_ghz", "crossover_dBm"]
    assert table["spacing_ghz"][0] == pytest.approx(200.0)
    assert -10.0 <= table["crossover_dBm"][0] <= -4.0


def test_model_failure_exits_with_three(runner, write_config, tmp_path, mocker):
    mocker.patch("qcoexist.cli.planner.crossover_power", side_effect=NoCrossover("fwm never reaches raman"))
    path = write_config({"fibre": "smf"})
    result = _invoke(runner, "crossover", "--config", path, "--out", str(tmp_path))
    assert result.exit_code == 3
    assert "fwm never reaches raman" in result.output
    assert not os.path.exists(tmp_path / "crossover.csv")


@pytest.mark.parametrize(
    "document, message",
    [
        ({"scenario": 1}, "fibre: Field required"),
        ({"fibre": "copper"}, "unknown fibre preset 'copper'"),
        ('{"fibre": "smf",', "invalid JSON"),
    ],
)
def test_invalid_config_exits_with_two(runner, write_config, tmp_path, document, message):
    path = write_config(document)
    result = _invoke(runner, "sweep", "--config", path, "--out", str(tmp_path))
    assert result.exit_code == 2
    assert message in result.output


def test_missing_config_file_exits_with_two(runner, tmp_path):
    result = _invoke(runner, "sweep", "--config", str(tmp_path / "absent.json"))
    assert result.exit_code == 2
    assert "cannot read config" in result.output


def test_unknown_preset_option_exits_with_two(runner, write_config):
    result = _invoke(runner, "sweep", "--config", write_config({"fibre": "smf"}), "--preset", "nope")
    assert result.exit_code == 2
    assert "unknown preset 'nope'" in result.output


def test_validate_accepts_good_document(runner, write_config):
    path = write_config({"fibre": "hcnanf", "scenario": "s2_1THz"})
    result = _invoke(runner, "validate", "--config", path)
    assert result.exit_code == 0, result.output
    assert json.loads(result.output.strip().splitlines()[-1]) == {"valid": True, "config": path}


def test_validate_lists_every_problem(runner, write_config):
    path = write_config({"fibre": "copper", "detector": {"efficiency": 2.0}})
    result = _invoke(runner, "validate", "--config", path)
    assert result.exit_code == 2
    assert "fibre:" in result.output
    assert "detector.efficiency:" in result.output


def test_validate_unreadable_file(runner, tmp_path):
    result = _invoke(runner, "validate", "--config", str(tmp_path / "absent.json"))
    assert result.exit_code == 2


def test_validate_function_returns_json_errors_as_diagnostics(write_config):
    assert cli.validate(write_config("not json"))[0].startswith("(document): invalid JSON")


def test_run_rejects_unknown_command(write_config):
    assert cli.run("spectrum", write_config({"fibre": "smf"})) == 2


def test_seed_is_accepted(runner, write_config, tmp_path):
    path = write_config({"fibre": "smf", "sweep": {"powers_dbm": [-20.0]}})
    result = _invoke(runner, "sweep", "--config", path, "--out", str(tmp_path), "--seed", "7")
    assert result.exit_code == 0, result.output


@pytest.mark.parametrize("text", ["[1, 2]", "5", "null", '[["fibre", "smf"]]'])
def test_non_object_document_exits_with_two(runner, write_config, tmp_path, text):
    path = write_config(text)
    result = _invoke(runner, "sweep", "--config", path, "--out", str(tmp_path))
    assert result.exit_code == 2
    assert "top level must be a JSON object" in result.output


def test_validate_rejects_list_of_pairs(write_config):
    assert cli.validate(write_config('[["fibre", "smf"]]')) == ["(document): top level must be a JSON object"]
    assert cli.validate(write_config("[1, 2]")) == ["(document): top level must be a JSON object"]


def test_malformed_raman_table_exits_with_two(runner, write_config, tmp_path):
    table = tmp_path / "raman.txt"
    table.write_text("0, abc\n100, 1e-13\n", encoding="utf-8")
    path = write_config({"fibre": "smf", "sweep": SHORT_SWEEP, "raman": {"table_path": str(table)}})
    result = _invoke(runner, "sweep", "--config", path, "--out", str(tmp_path / "out"))
    assert result.exit_code == 2
    assert "raman.table_path:" in result.output


def test_unwritable_output_exits_with_two(runner, write_config, tmp_path):
    blocker = tmp_path / "taken"
    blocker.write_text("", encoding="utf-8")
    path = write_config({"fibre": "smf", "sweep": SHORT_SWEEP})
    result = _invoke(runner, "sweep", "--config", path, "--out", str(blocker / "sub"))
    assert result.exit_code == 2
    assert "output.directory:" in result.output
    assert cli.run("sweep", path, str(blocker)) == 2
