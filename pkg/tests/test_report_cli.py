import csv
import io
import json
import math
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from rmpkit import __version__
from rmpkit import report as rpt
from rmpkit.cli import main, read_config_file
from rmpkit.errors import ConfigError
from rmpkit.verify import CHECK_IDS, RunConfig, run_verify
from rmpkit.wave_sim import SimConfig, longitudinal_mode, simulate, ModeSpec

FAST = ["p_contraction_null", "dual_involution", "kg_shell"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _strip_timestamp(text):
    d = json.loads(text)
    d.pop("timestamp")
    return json.dumps(d, sort_keys=True)


# ---------------------------------------------------------------- report


def test_encode_rules():
    enc = rpt.encode({"z": 1 + 2j, "a": np.array([1.0, np.inf]), "b": np.bool_(True), "i": np.int64(3)})
    assert enc == {"z": [1.0, 2.0], "a": [1.0, None], "b": True, "i": 3}
    assert rpt.decode_complex([1.0, -2.0]) == 1 - 2j


def test_check_result_pass_logic():
    assert rpt.CheckResult("x", "d", 1, 0.5, 1.0).passed
    assert not rpt.CheckResult("x", "d", 1, 1.0, 1.0).passed
    assert not rpt.CheckResult("x", "d", 1, math.nan, 1.0).passed
    assert not rpt.CheckResult("x", "d", 1, math.inf, 1.0).passed


def test_verify_report_round_trip_and_schema():
    rep = run_verify(RunConfig(samples=5), __version__, timestamp="T", only=FAST)
    d = rep.to_dict()
    rpt.validate(d)
    back = rpt.VerifyReport.from_dict(json.loads(rpt.dumps(d)))
    assert back.to_dict() == json.loads(rpt.dumps(d))
    assert back.passed == rep.passed and [c.check_id for c in back.checks] == [c for c in CHECK_IDS if c in FAST]
    names = set(d["checks"][0])
    assert {"check_id", "max_residual", "tolerance", "pass"} <= names


def test_overall_pass_is_conjunction():
    good = rpt.CheckResult("a", "d", 1, 0.0, 1.0)
    bad = rpt.CheckResult("b", "d", 1, 2.0, 1.0)
    assert rpt.VerifyReport("s", 0, 1, "v", [good]).passed
    rep = rpt.VerifyReport("s", 0, 1, "v", [good, bad])
    assert not rep.passed and rep.failing() == ["b"]


def test_schema_rejects_malformed_reports():
    d = rpt.VerifyReport("s", 0, 1, "v", [rpt.CheckResult("a", "d", 1, 0.0, 1.0)], "T").to_dict()
    for mutate in (lambda r: r.pop("pass"),
                   lambda r: r.update(schema="other/1"),
                   lambda r: r["checks"][0].update(extra=1),
                   lambda r: r["checks"][0].update(tolerance=0)):
        bad = json.loads(rpt.dumps(d))
        mutate(bad)
        with pytest.raises(jsonschema.ValidationError):
            rpt.validate(bad)


def test_time_series_csv_columns():
    cfg = SimConfig(N=8, steps=6, modes=[ModeSpec((1, 0, 0), [0, 1, 0]), longitudinal_mode((0, 1, 0), 2.0)])
    rows = list(csv.reader(io.StringIO(rpt.time_series_csv(simulate(cfg)))))
    assert rows[0] == rpt.CSV_COLUMNS
    assert len(rows) == 1 + 7 * 2
    first_long = rows[2]
    assert first_long[:3] == ["0", "0.0", "1"]
    assert float(first_long[5]) == pytest.approx(2.0)


# ------------------------------------------------------------------- cli


def test_verify_default_suite_exits_zero(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    d = json.loads(out)
    rpt.validate(d)
    assert d["pass"] and [c["check_id"] for c in d["checks"]] == CHECK_IDS
    assert d["seed"] == 0 and d["samples"] == 100


def test_verify_is_deterministic_per_seed(capsys):
    a = run(capsys, "verify", "--seed", "7", "--samples", "10")[1]
    b = run(capsys, "verify", "--seed", "7", "--samples", "10")[1]
    c = run(capsys, "verify", "--seed", "8", "--samples", "10")[1]
    assert _strip_timestamp(a) == _strip_timestamp(b)
    assert _strip_timestamp(a) != _strip_timestamp(c)


def test_unattainable_tolerance_exits_one(capsys):
    code, out, err = run(capsys, "verify", "--tolerance", "1e-30", "--only", *FAST)
    assert code == 1 and "failing checks:" in err
    assert not json.loads(out)["pass"]


def test_per_check_tolerance(capsys):
    code, _, err = run(capsys, "verify", "--only", "kg_shell", "--check-tolerance", "kg_shell=1e-300")
    assert code == 1 and "kg_shell" in err
    assert run(capsys, "verify", "--only", "kg_shell", "--check-tolerance", "nope=1")[0] == 2


@pytest.mark.parametrize("argv", [["verify", "--samples", "0"], ["verify", "--tolerance", "-1"],
                                  ["verify", "--only", "bogus"], ["verify", "--format", "csv"],
                                  ["frobnicate"], ["wave", "classify", "--n", "1,2,3,4"]])
def test_usage_errors_exit_two(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 2
    capsys.readouterr()


def test_output_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert run(capsys, "verify", "--only", "dual_involution", "-o", str(out))[1] == ""
    rpt.validate(json.loads(out.read_text()))


def test_seed_precedence(tmp_path, capsys, monkeypatch):
    def seed(*extra):
        return json.loads(run(capsys, "verify", "--only", "dual_involution", "--samples", "2", *extra)[1])["seed"]

    assert seed() == 0
    monkeypatch.setenv("RMPKIT_SEED", "11")
    assert seed() == 11
    cfgfile = tmp_path / "rmpkit.cfg"
    cfgfile.write_text("# defaults\nseed = 22\nsamples = 3\n")
    assert seed("--config", str(cfgfile)) == 22
    assert seed("--config", str(cfgfile), "--seed", "33") == 33
    monkeypatch.setenv("RMPKIT_SEED", "x")
    assert run(capsys, "verify", "--only", "dual_involution")[0] == 2


def test_config_file_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    with pytest.raises(ConfigError):
        read_config_file(str(bad))
    bad.write_text("samples = many\n")
    with pytest.raises(ConfigError):
        read_config_file(str(bad))
    with pytest.raises(ConfigError):
        read_config_file(str(tmp_path / "missing.cfg"))


def test_eigen_commands(capsys):
    code, out, _ = run(capsys, "eigen", "--n", "1,2,3,4")
    assert code == 0
    rec = json.loads(out)["result"]["records"][0]
    assert rec["multiplicities"] == {"0": 9, "1": 6, "2": 1}
    code, out, err = run(capsys, "eigen", "--n", "1,0,0,0")
    assert code == 2 and "NonRegularWavevector" in err
    assert json.loads(out)["error"]["type"] == "NonRegularWavevector"
    code, out, _ = run(capsys, "eigen", "--random", "--samples", "25")
    recs = json.loads(out)["result"]["records"]
    assert code == 0 and len(recs) == 25
    assert all(r["multiplicities"] == recs[0]["multiplicities"] for r in recs)
    assert run(capsys, "eigen", "--n", "1,2,x,4")[0] == 2


def test_wave_classify(capsys):
    code, out, _ = run(capsys, "wave", "classify", "--a", "4,-3,0", "--n", "3,4,0,5i")
    d = json.loads(out)
    rpt.validate(d)
    assert code == 0 and d["result"]["kind"] == "Transverse"
    out = run(capsys, "wave", "classify", "--a", "1,0,0", "--n", "1,2,3,4")[1]
    res = json.loads(out)["result"]
    assert res["kind"] == "NonSolution" and res["vacuum_residual"][0] == [29.0, 0.0]
    assert res["j4"][0] == pytest.approx(-1 / np.pi)


def test_wave_simulate_longitudinal(capsys, tmp_path):
    csv_path = tmp_path / "ts.csv"
    code, out, _ = run(capsys, "wave", "simulate", "--mode", "longitudinal", "--steps", "1000",
                       "--N", "16", "--csv", str(csv_path))
    d = json.loads(out)
    rpt.validate(d)
    assert code == 0 and d["result"]["modes"][0]["amplitude_drift"] < 1e-10
    with open(csv_path) as fh:
        assert next(csv.reader(fh)) == rpt.CSV_COLUMNS


def test_wave_simulate_csv_format(capsys):
    code, out, _ = run(capsys, "wave", "simulate", "--steps", "20", "--N", "8", "--dt", "0.2",
                       "--format", "csv")
    assert code == 0 and out.splitlines()[0] == ",".join(rpt.CSV_COLUMNS)


def test_wave_simulate_bad_config(capsys):
    assert run(capsys, "wave", "simulate", "--N", "12")[0] == 2
    assert run(capsys, "wave", "simulate", "--index", "1,2")[0] == 2
    assert run(capsys, "wave", "simulate", "--amplitude", "1,0,0", "--index", "1,0,0")[0] == 2


def test_transform_commands(capsys):
    code, out, _ = run(capsys, "transform", "--rotate", "3,0", "--a", "1,2,3", "--n", "1,2,3,4i")
    res = json.loads(out)["result"]
    assert code == 0 and res["round_trip_residual"] == 0 and res["commutation_residual"] == 0
    assert res["A_hat"] == [[1, 0], [2, 0], [3, 0]]
    code, out, _ = run(capsys, "transform", "--boost", "1,0.3", "--a", "1,2,3", "--n", "1,2,3,4i")
    assert code == 0 and json.loads(out)["result"]["round_trip_residual"] < 1e-10
    # n4' = cosh(x) n4 - i sinh(x) n1 vanishes when n4 = i tanh(x) n1
    x = 0.5
    code, _, err = run(capsys, "transform", "--boost", f"1,{x}", "--a", "1,0,0",
                       "--n", f"1,2,3,{float(np.tanh(x))!r}i")
    assert code == 2 and "ZeroTemporalComponent" in err
    assert run(capsys, "transform", "--a", "1,2,3", "--n", "1,2,3,4")[0] == 2
    assert run(capsys, "transform", "--boost", "5,1", "--a", "1,2,3", "--n", "1,2,3,4")[0] == 2


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "rmpkit", "--version"], capture_output=True, text=True)
    assert p.returncode == 0 and __version__ in p.stdout
