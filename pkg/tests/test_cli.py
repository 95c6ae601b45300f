import json
import os

import pytest
from hypothesis import given, strategies as st

from ostab import cli
from ostab.cli import CSV_COLUMNS, ConfigError, fmt, main, parse_args, parse_list


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_parse_list():
    assert parse_list("1e4,1e5") == [1e4, 1e5]
    vals = parse_list("0:0.6:50")
    assert len(vals) == 50 and vals[0] == 0 and vals[-1] == 0.6
    with pytest.raises(ConfigError):
        parse_list("0:1")
    with pytest.raises(ConfigError):
        parse_list("a,b")
    with pytest.raises(ConfigError):
        parse_list("0:1:0")


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_fmt_round_trips(x):
    assert float(fmt(x)) == x


def test_fmt_non_finite():
    assert fmt(float("inf")) == "inf" and fmt(float("-inf")) == "-inf" and fmt(float("nan")) == "nan"


def test_dumps_encodes_complex_and_inf():
    text = cli.dumps({"z": 1 + 2j, "big": float("inf"), "n": 3})
    d = json.loads(text)
    assert d == {"z": [1, 2], "big": "inf", "n": 3}


def test_spectrum_example(capsys):
    code, d = _run(capsys, "spectrum", "--profile", "poiseuille", "--alpha", "1.02",
                   "--reynolds", "11600", "--n", "128")
    assert code == 0
    assert d["meta"]["leftmost"][0] < 0 and d["meta"]["unstable"]
    assert d["meta"]["grid_n"] == 128 and d["meta"]["command"] == "spectrum"
    assert set(d["meta"]) >= {"version", "seed", "grid_n", "profile", "command", "params",
                              "config_hash"}


def test_resolvent_example_deterministic(tmp_path, capsys):
    outs = []
    for k, workers in ((1, "1"), (2, "2")):
        j, c, s = (tmp_path / f"r{k}.{e}" for e in ("json", "csv", "svg"))
        code = main(["resolvent", "--alpha", "0", "--beta", "1e5", "--im-lambda", "0:0.6:50",
                     "--re-lambda", "0", "--out-json", str(j), "--out-csv", str(c), "--svg", str(s),
                     "--workers", workers])
        assert code == 0
        outs.append((j.read_bytes(), c.read_bytes(), s.read_bytes()))
    assert outs[0] == outs[1]
    d = json.loads(outs[0][0])
    assert len(d["records"]) == 50
    lines = outs[0][1].decode().splitlines()
    assert lines[0].startswith("#") and d["meta"]["config_hash"] in lines[0]
    assert lines[1] == ",".join(CSV_COLUMNS["resolvent"])
    assert len(lines) == 52
    assert d["meta"]["config_hash"] in outs[0][2].decode()
    assert "<polyline" in outs[0][2].decode()
    assert os.path.exists(str(tmp_path / "r1.json") + ".log")


def test_audit_example(tmp_path, capsys):
    csv = tmp_path / "a.csv"
    code, d = _run(capsys, "audit", "--case", "ND_L2", "--beta", "1e4,1e5,1e6", "--seeds", "5",
                   "--out-csv", str(csv))
    assert code == 0 and d["meta"]["passed"]
    assert d["meta"]["summary"]["ND_L2"]["passed"]
    random_recs = [r for r in d["records"] if r["seed"] >= 0]
    # five seeds at three betas for each imaginary-part setting
    groups = {r["group"] for r in random_recs}
    assert len(random_recs) == 15 * len(groups)
    header = csv.read_text().splitlines()[1]
    assert header == "case,seed,alpha,beta,re_lambda,im_lambda,p,lhs,rhs_scale,ratio"


def test_frozen_sweep_columns():
    assert ",".join(CSV_COLUMNS["sweep"]) == (
        "alpha,beta,re_lambda,im_lambda,resolvent_norm,derivative_norm,flag")


def test_config_file_matches_flags(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# spectrum run\nalpha = 1.02\nreynolds=11600\nn = 64\n")
    _, a = _run(capsys, "spectrum", "--config", str(cfg))
    _, b = _run(capsys, "spectrum", "--alpha", "1.02", "--reynolds", "11600", "--n", "64")
    assert a["records"] == b["records"]
    assert a["meta"]["config_hash"] == b["meta"]["config_hash"]
    # explicit flags override the file
    _, c = _run(capsys, "spectrum", "--config", str(cfg), "--n", "48")
    assert c["meta"]["grid_n"] == 48


@pytest.mark.parametrize("argv, fragment", [
    (["spectrum", "--alpha", "1", "--beta", "1", "--reynolds", "2"], "not allowed"),
    (["sweep", "--beta", "1e5,1e4"], "strictly increasing"),
    (["neutral", "--reynolds", "1e6,1e5"], "strictly increasing"),
    (["spectrum", "--alpha", "1", "--beta", "100", "--n", "31"], "even"),
    (["spectrum", "--alpha", "1", "--beta", "100", "--profile", "couette"], "unknown profile"),
    (["spectrum", "--alpha", "1", "--beta", "100", "--out-json", "/nonexistent/x.json"],
     "not writable"),
    (["audit", "--case", "NOPE", "--beta", "1e4,1e5,1e6"], "unknown audit case"),
    (["frobnicate"], "invalid choice"),
    (["spectrum", "--config", "/nonexistent.cfg"], "cannot read"),
])
def test_errors_are_json(capsys, argv, fragment):
    code, d = _run(capsys, *argv)
    assert code == 2
    assert fragment in d["error"]["message"]


def test_worker_env_override(monkeypatch):
    monkeypatch.setenv("OSTAB_WORKERS", "3")
    assert parse_args(["spectrum", "--alpha", "1", "--beta", "10"]).workers == 3
    monkeypatch.setenv("OSTAB_WORKERS", "zero")
    with pytest.raises(ConfigError):
        parse_args(["spectrum", "--alpha", "1", "--beta", "10"])
    monkeypatch.setenv("OSTAB_WORKERS", "0")
    with pytest.raises(ConfigError):
        parse_args(["spectrum", "--alpha", "1", "--beta", "10"])


def test_workers_do_not_change_hash():
    a = parse_args(["spectrum", "--alpha", "1", "--beta", "10", "--workers", "1"])
    b = parse_args(["spectrum", "--alpha", "1", "--beta", "10", "--workers", "4"])
    assert a.config_hash() == b.config_hash()
    c = parse_args(["spectrum", "--alpha", "1", "--beta", "11"])
    assert a.config_hash() != c.config_hash()


def test_neutral_and_svg(tmp_path, capsys):
    svg = tmp_path / "n.svg"
    code, d = _run(capsys, "neutral", "--reynolds", "2e4,4e4", "--svg", str(svg), "--n", "96")
    assert code == 0
    recs = d["records"]
    assert all(r["alpha_lower"] < 1.02 < r["alpha_upper"] for r in recs)
    assert svg.read_text().count("<polyline") == 2


def test_psi_check(capsys):
    code, d = _run(capsys, "psi-check", "--beta", "1e4")
    assert code == 0
    integral = [r for r in d["records"] if r["check"] == "integral"][0]
    assert integral["lhs"] < 1e-6
    endpoint = [r for r in d["records"] if r["check"] == "endpoint"][0]
    assert 0.1 <= endpoint["ratio"] <= 10


def test_map_command(capsys):
    code, d = _run(capsys, "map", "--beta", "7e4", "--alpha", "0.01,0.7", "--nu", "0.1,0.6",
                   "--n", "128")
    assert code == 0
    regions = {(r["alpha"], r["nu"]): r["region"] for r in d["records"]}
    assert regions[(0.7, 0.1)] == "unstable" and regions[(0.01, 0.6)] == "above_u0"


def test_sweep_with_alpha_power(capsys):
    code, d = _run(capsys, "sweep", "--beta", "1e4,2e4,4e4", "--alpha-power", "-0.5",
                   "--npts", "30")
    assert code == 0
    assert [r["alpha"] for r in d["records"]] == pytest.approx([1e-2, 2e4**-0.5, 4e4**-0.5])
    assert "fit" in d["meta"]
