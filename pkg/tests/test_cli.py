import argparse
import csv
import json

import pytest

from aircomp_relay.cli import EXIT_CONFIG, EXIT_OK, EXIT_ORACLE, EXIT_USAGE, _value_list, main
from aircomp_relay.evaluation import METRICS, POLICIES


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def test_run_writes_cdf_files(tmp_path):
    assert main(["run", "--trials", "12", "--seed", "3", "--out", str(tmp_path)]) == EXIT_OK
    for m in METRICS:
        rows = read_csv(tmp_path / f"run_seed3_{m}.csv")
        assert list(rows[0]) == ["policy", "trial_index", m, "cdf"]
        for p in POLICIES:
            mine = [r for r in rows if r["policy"] == str(p)]
            assert len(mine) == 12
            vals = [float(r[m]) for r in mine]
            assert vals == sorted(vals)
            assert float(mine[-1]["cdf"]) == 1.0
    summary = json.loads((tmp_path / "run_seed3_summary.json").read_text())
    assert summary["trial_count"] == 12


def test_run_single_trial(tmp_path):
    assert main(["run", "--trials", "1", "--out", str(tmp_path)]) == EXIT_OK
    rows = read_csv(tmp_path / "run_seed1_mse_total.csv")
    assert len(rows) == len(POLICIES)


def test_run_is_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["run", "--trials", "8", "--out", str(a)]) == EXIT_OK
    assert main(["run", "--trials", "8", "--out", str(b), "--workers", "2"]) == EXIT_OK
    for f in a.iterdir():
        assert f.read_bytes() == (b / f.name).read_bytes()


def test_numbers_have_twelve_significant_digits(tmp_path):
    main(["run", "--trials", "3", "--out", str(tmp_path)])
    rows = read_csv(tmp_path / "run_seed1_mse_total.csv")
    for r in rows:
        assert float(r["mse_total"]) == float(format(float(r["mse_total"]), ".12g"))
        digits = r["mse_total"].split("e")[0].replace(".", "").replace("-", "").lstrip("0")
        assert len(digits) <= 12


def test_sweep_relay_fraction_shape(tmp_path):
    code = main(["sweep", "--axis", "relay_fraction", "--values", "0.1:0.5:0.1",
                 "--trials", "4", "--out", str(tmp_path)])
    assert code == EXIT_OK
    rows = read_csv(tmp_path / "run_relay_fraction_seed1.csv")
    assert len(rows) == 5 * 5
    assert sorted({r["axis_value"] for r in rows}) == ["0.1", "0.2", "0.3", "0.4", "0.5"]
    assert (tmp_path / "run_relay_fraction_seed1_relay_power.csv").exists()


def test_sweep_gamma_one_matches_run(tmp_path):
    main(["run", "--trials", "6", "--out", str(tmp_path)])
    main(["sweep", "--axis", "gamma", "--values", "1.0", "--trials", "6", "--out",
          str(tmp_path)])
    run = json.loads((tmp_path / "run_seed1_summary.json").read_text())
    sweep = json.loads((tmp_path / "run_gamma_seed1_summary.json").read_text())
    assert sweep["points"][0]["policies"] == run["policies"]


def test_value_list_forms():
    assert _value_list("0.1,0.3") == [0.1, 0.3]
    assert _value_list("0.1:0.5:0.1") == [0.1, 0.2, 0.3, 0.4, 0.5]
    assert _value_list("2:1:-0.5") == [2.0, 1.5, 1.0]
    for bad in ("1:2:0", "1:2:-0.5", "a,b", ""):
        with pytest.raises(argparse.ArgumentTypeError):
            _value_list(bad)


def test_sweep_invalid_axis():
    assert main(["sweep", "--axis", "theta", "--values", "0.5"]) == EXIT_USAGE


def test_sweep_out_of_range_value(tmp_path):
    code = main(["sweep", "--axis", "relay_fraction", "--values", "1.5", "--trials", "1",
                 "--out", str(tmp_path)])
    assert code != EXIT_OK


def test_config_error_exit(tmp_path):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[policy]\nrelay_fraction = 1.3\n")
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_CONFIG


def test_missing_config_file_exit(tmp_path):
    assert main(["run", "--config", str(tmp_path / "nope.ini")]) == EXIT_CONFIG


@pytest.mark.parametrize("check", ["baseline", "simrelay", "split", "oneiter"])
def test_oracle_checks_pass(check, capsys):
    assert main(["oracle", "--check", check, "--instances", "20"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("PASS") and "max deviation" in out


def test_oracle_zero_instances_is_usage_error():
    assert main(["oracle", "--check", "split", "--instances", "0"]) == EXIT_USAGE


def test_oracle_failure_exit(monkeypatch):
    import aircomp_relay.cli as cli
    from aircomp_relay.oracles import OracleReport

    def broken(n, seed=0):
        return OracleReport("baseline", n, 1.0, 1e-6, failures=[(0, 1.0)])

    monkeypatch.setitem(cli.CHECKS, "baseline", broken)
    assert main(["oracle", "--check", "baseline", "--instances", "1"]) == EXIT_ORACLE
