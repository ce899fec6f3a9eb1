import json

import pytest

import dastc.experiment as experiment
from dastc.channel import ScenarioConfig
from dastc.cli import main, parse_grid, read_config_file
from dastc.exceptions import ConvergenceError, ParameterError
from dastc.experiment import (
    CSV_COLUMNS,
    ExperimentResult,
    emit_csv,
    emit_plotdata,
    parse_methods,
    read_csv,
    read_plotdata,
    run_experiment,
)

SMALL = dict(snr_grid_db=(0.0, 10.0, 20.0), trials=4000, seed=17)


@pytest.fixture(scope="module")
def result():
    return run_experiment(ScenarioConfig.symmetric(**SMALL))


def test_rows_ordered_and_gain_consistent(result):
    assert [r.snr_db for r in result.rows] == [0.0, 10.0, 20.0]
    for r in result.rows:
        assert r.gain == r.mc_mean - r.oneway_mean
        assert r.tags["closed_form"] == "closed" and r.tags["quadrature"] == "quadrature"
    assert result.complete


def test_csv_header_and_format(result, tmp_path):
    path = tmp_path / "out.csv"
    emit_csv(result, path)
    raw = path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode("utf-8").splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 4
    for cell in lines[1].split(","):
        digits = cell.lstrip("-").split("e")[0].replace(".", "").lstrip("0")
        assert len(digits) <= 9


def test_csv_round_trip(result, tmp_path):
    path = tmp_path / "out.csv"
    emit_csv(result, path)
    back = read_csv(path)
    assert back == result.rounded()
    again = tmp_path / "again.csv"
    emit_csv(back, again)
    assert again.read_bytes() == path.read_bytes()


def test_empty_grid_is_header_only(tmp_path):
    res = run_experiment(ScenarioConfig(snr_grid_db=(), trials=10), "mc")
    emit_csv(res, tmp_path / "e.csv")
    assert (tmp_path / "e.csv").read_text() == ",".join(CSV_COLUMNS) + "\n"
    emit_plotdata(res, tmp_path / "p.csv")
    assert (tmp_path / "p.csv").read_text() == "series,snr_db,value\n"


def test_rerun_is_byte_identical(tmp_path):
    cfg = ScenarioConfig.colinear(**SMALL)
    emit_csv(run_experiment(cfg), tmp_path / "a.csv")
    emit_csv(run_experiment(cfg, n_jobs=3), tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_plotdata_long_format(result, tmp_path):
    emit_plotdata(result, tmp_path / "p.csv")
    data = read_plotdata(tmp_path / "p.csv")
    assert set(data) == {"mc_twoway", "analytic_twoway", "quadrature_twoway", "mc_oneway", "gain"}
    assert [s for s, _ in data["gain"]] == [0.0, 10.0, 20.0]
    assert data["mc_twoway"][1][1] == pytest.approx(result.rows[1].mc_mean, rel=1e-8)


def test_unavailable_cells_are_recorded_not_fatal(monkeypatch):
    def refuse(config, rho):
        if rho > 50:
            raise ConvergenceError("no luck", (0.0, 1.0))
        return experiment.rsum_quadrature(config, rho)

    monkeypatch.setattr(experiment, "rsum_closed", refuse)
    res = run_experiment(ScenarioConfig.symmetric(**SMALL), "closed")
    assert [r.closed_form is None for r in res.rows] == [False, False, True]
    assert res.missing_cells() == [(20.0, "closed_form")]
    assert res.errors[0][:2] == (20.0, "closed_form")


def test_method_subset():
    res = run_experiment(ScenarioConfig.symmetric(**SMALL), "mc")
    assert res.rows[0].closed_form is None and res.rows[0].gain is None
    assert res.complete


@pytest.mark.parametrize("bad", ["", "mc,foo", []])
def test_parse_methods_rejects(bad):
    with pytest.raises(ParameterError):
        parse_methods(bad)


def test_mc_nondecreasing_within_noise(result):
    rows = result.rows
    for a, b in zip(rows, rows[1:]):
        assert b.mc_mean >= a.mc_mean - 2 * max(a.mc_stderr, b.mc_stderr)


def test_write_error_names_path(result, tmp_path):
    target = tmp_path / "missing" / "out.csv"
    with pytest.raises(OSError, match="missing"):
        emit_csv(result, target)


def test_parse_grid():
    assert parse_grid("0:5:30") == (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
    assert parse_grid("0:0.1:0.3") == (0.0, 0.1, 0.2, 0.3)
    assert parse_grid("12") == (12.0,)
    for bad in ("a:b:c", "0:0:10", "10:1:0", "1:2"):
        with pytest.raises(Exception):
            parse_grid(bad)


def test_cli_full_run(tmp_path, capsys):
    out, plot = tmp_path / "r.csv", tmp_path / "p.csv"
    code = main(["--scenario", "colinear", "--snr-db", "0:10:20", "--trials", "2000",
                 "--out", str(out), "--plot-data", str(plot)])
    captured = capsys.readouterr()
    assert code == 0
    summary = json.loads(captured.out)
    assert summary["omegas"] == [1.0, 16.0, 16.0] and summary["missing"] == []
    assert "[3/3]" in captured.err
    assert out.read_text().startswith("snr_db,")
    assert plot.exists()


def test_cli_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep\nscenario = custom\nomega0=1\nomega1=4\nomega2 = 1\n"
                   "snr-db=10:10:20\ntrials=1000\nmethods=mc,oneway\nseed=5\n")
    assert read_config_file(cfg)["snr_db"] == "10:10:20"
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["--config", str(cfg), "--out", str(out1), "-q"]) == 0
    assert main(["--config", str(cfg), "--seed", "6", "--out", str(out2), "-q"]) == 0
    a, b = read_csv(out1), read_csv(out2)
    assert [r.snr_db for r in a.rows] == [10.0, 20.0]
    assert a.rows[0].mc_mean != b.rows[0].mc_mean
    assert capsys.readouterr().err == ""


def test_cli_partial_exit_code(monkeypatch, tmp_path, capsys):
    def refuse(config, rho):
        raise ConvergenceError("refused", (0.0, 0.0))

    monkeypatch.setattr(experiment, "rsum_quadrature", refuse)
    code = main(["--snr-db", "10", "--trials", "500", "--methods", "mc,quadrature", "-q"])
    assert code == 2
    assert json.loads(capsys.readouterr().out)["missing"] == [[10.0, "quadrature"]]


@pytest.mark.parametrize("argv", [
    ["--scenario", "custom", "--omega0", "1"],
    ["--omega1", "3"],
    ["--methods", "bogus"],
    ["--scenario", "custom", "--omega0", "1", "--omega1", "-1", "--omega2", "1"],
])
def test_cli_failure_exit_code(argv, capsys):
    assert main(argv + ["--trials", "100", "-q"]) == 1
    assert "error" in capsys.readouterr().err


def test_cli_bad_config_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour=blue\n")
    with pytest.raises(ParameterError):
        read_config_file(cfg)


def test_row_equality_ignores_tags(result):
    row = result.rounded().rows[0]
    row.tags.clear()
    assert row == result.rounded().rows[0]
