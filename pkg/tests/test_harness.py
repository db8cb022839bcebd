import pytest

from nocgf import cli, experiments
from nocgf.config import (
    ConfigError,
    config_from_dict,
    default_config,
    load_config,
)


def test_default_config_roundtrip():
    cfg = default_config()
    again = config_from_dict(cfg.to_dict())
    assert again.to_dict() == cfg.to_dict()
    assert cfg.gates == ("not", "hadamard", "pi8", "phase", "cphase")
    assert cfg.steps == {"one_qubit": 160000, "two_qubit": 120000}
    assert cfg.t_phys_us == {"one_qubit": 1.0, "two_qubit": 5.0}
    assert cfg.noise["power"] == 0.001
    assert cfg.noise["f_clock_hz"] == 1.0e9


def test_empty_file_gives_defaults(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text("")
    assert load_config(path).to_dict() == default_config().to_dict()


def test_parse_error_carries_line_info(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "gates": [}\n')
    with pytest.raises(ConfigError, match="line 2"):
        load_config(path)


def test_unknown_keys_rejected():
    with pytest.raises(ConfigError, match="unknown key"):
        config_from_dict({"gatez": []})
    with pytest.raises(ConfigError, match="unknown key"):
        config_from_dict({"noise": {"powerr": 1.0}})
    with pytest.raises(ConfigError):
        config_from_dict({"sweep_overrides": {"hadamard": {"d9": 1.0}}})


def test_range_validation():
    with pytest.raises(ConfigError, match="noise.power"):
        config_from_dict({"noise": {"power": -1.0}})
    with pytest.raises(ConfigError, match="steps"):
        config_from_dict({"steps": {"one_qubit": 0}})
    with pytest.raises(ConfigError):
        config_from_dict({"gates": ["toffoli"]})


def test_sweep_override_changes_params():
    cfg = config_from_dict({"sweep_overrides": {"hadamard": {"lam": 7.821}}})
    assert cfg.params_for("hadamard").lam == 7.821
    assert cfg.params_for("not").lam == 6.965


def test_format_value():
    assert experiments.format_value(0.000123456789) == "1.23457e-04"
    assert experiments.format_value(1.23456789) == "1.23457"
    assert experiments.format_value(0.0) == "0"
    assert experiments.format_value(5) == "5"


def _coarse_cfg(**kw):
    raw = {"steps": {"one_qubit": 40000, "two_qubit": 60000}}
    raw.update(kw)
    return config_from_dict(raw)


def test_ideal_table_rows_and_gate_filter():
    cfg = _coarse_cfg(gates=["hadamard"])
    rows = experiments.run_ideal_table(cfg)
    assert len(rows) == 1
    assert rows[0][0] == "hadamard"
    full = experiments.run_ideal_table(_coarse_cfg(gates=["not", "hadamard"]))
    row_h = [r for r in full if r[0] == "hadamard"][0]
    assert row_h == rows[0]   # filtered run equals the matching row of a full run


def test_csv_determinism_excluding_timestamp():
    cfg = _coarse_cfg(gates=["not"])
    rows1 = experiments.run_ideal_table(cfg)
    rows2 = experiments.run_ideal_table(cfg)
    t1 = experiments.render_csv(experiments.IDEAL_HEADER, rows1)
    t2 = experiments.render_csv(experiments.IDEAL_HEADER, rows2)
    assert t1.splitlines()[1:] == t2.splitlines()[1:]


def test_bandwidth_mhz_halves_when_gate_time_doubles():
    cfg1 = _coarse_cfg(gates=["hadamard"])
    res = {"hadamard": experiments.improve_for(cfg1, "hadamard")}
    rows1 = experiments.run_bandwidth_table(cfg1, results=res)
    cfg2 = config_from_dict({
        "steps": {"one_qubit": 40000, "two_qubit": 60000},
        "gates": ["hadamard"],
        "t_phys_us": {"one_qubit": 2.0, "two_qubit": 5.0},
    })
    rows2 = experiments.run_bandwidth_table(cfg2, results=res)
    assert rows1[0][1] == pytest.approx(rows2[0][1])          # omega01 unchanged
    assert rows2[0][2] == pytest.approx(rows1[0][2] / 2.0)    # MHz halves


def test_jitter_zero_power_rows():
    cfg = config_from_dict({
        "steps": {"one_qubit": 40000, "two_qubit": 60000},
        "gates": ["hadamard"],
        "noise": {"realizations": 3},
    })
    rows = experiments.run_jitter_sweep(cfg, [0.0])
    _, power, sigma_t, mean, std, nreal, *_ = rows[0]
    res = experiments.improve_for(cfg, "hadamard")
    assert power == 0.0 and sigma_t == 0.0
    assert mean == pytest.approx(res.improved_report.trace_p, rel=1e-12)
    assert std == 0.0


def test_worker_count_env(monkeypatch):
    monkeypatch.delenv("NOCGF_THREADS", raising=False)
    assert experiments.worker_count() == 1
    monkeypatch.setenv("NOCGF_THREADS", "3")
    assert experiments.worker_count() == 3
    monkeypatch.setenv("NOCGF_THREADS", "0")
    assert experiments.worker_count() >= 1
    monkeypatch.setenv("NOCGF_THREADS", "x")
    with pytest.raises(ValueError):
        experiments.worker_count()


def test_cli_improve_and_tables(tmp_path, capsys):
    rc = cli.main(["improve", "--gate", "hadamard", "--steps", "40000"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "improved: TrP" in out

    out_csv = tmp_path / "ideal.csv"
    rc = cli.main(["table", "ideal", "--gate", "not", "--steps", "40000",
                   "--out", str(out_csv)])
    assert rc == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0].startswith("# nocgf")
    assert lines[1].split(",")[0] == "gate"
    assert lines[2].split(",")[0] == "not"


def test_cli_sweep_and_spectrum(tmp_path):
    sweep_csv = tmp_path / "sweep.csv"
    rc = cli.main(["sweep", "--param", "lam", "--gate", "hadamard",
                   "--steps", "40000", "--out", str(sweep_csv)])
    assert rc == 0
    lines = sweep_csv.read_text().splitlines()
    assert lines[1] == "parameter,value,trp_with_noc,trp_without_noc"
    assert len(lines) == 5

    spec_csv = tmp_path / "spec.csv"
    rc = cli.main(["spectrum", "--gate", "hadamard", "--steps", "40000",
                   "--out", str(spec_csv)])
    assert rc == 0
    assert spec_csv.read_text().splitlines()[0] == "omega,magnitude"


def test_cli_jitter(tmp_path):
    out_csv = tmp_path / "jitter.csv"
    rc = cli.main(["jitter", "--powers", "0", "--gate", "hadamard",
                   "--steps", "40000", "--realizations", "2",
                   "--out", str(out_csv)])
    assert rc == 0
    lines = out_csv.read_text().splitlines()
    assert lines[1].split(",")[0] == "gate"
    assert len(lines) == 3
