"""Command-line interface: config parsing, exit codes, reports."""

import json

import pytest

from heunaw.cli import main, parse_config
from heunaw.errors import InvalidParameters, ParseError

E_LIST = ["1/2", "2/3", "3/5", "4/7", "5/6", "2/5", "3/4", "5/7"]

W1_CONFIG = {
    "operator": "W1",
    "parametrization": "epsilon",
    "s": "1/2",
    "e": E_LIST,
    "c0": "2/7",
    "modes": ["construct", "raising"],
    "n_max": 3,
    "range": 6,
    "seed": 11,
}

W2_ETA_CONFIG = {
    "operator": "W2",
    "parametrization": "eta",
    "s": "1/2",
    "a": "3",
    "b": "5",
    "eta": ["1", "1/2", "-1/3", "2/5", "1", "-2/7", "1/3", "1/2", "225/16"],
    "c0": "1/5",
    "modes": ["raising"],
    "n_max": 2,
    "m_max": 2,
    "range": 6,
}


def write_cfg(tmp_path, payload, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


# -- parsing ------------------------------------------------------------------


def test_parse_config_roundtrip(tmp_path):
    cfg = parse_config(write_cfg(tmp_path, W1_CONFIG))
    assert cfg.operator == "W1"
    assert cfg.modes == ("construct", "raising")
    assert cfg.b == cfg.s                     # beta defaults to q^{1/2}
    prod = 1
    for ej in cfg.e:
        prod = prod * ej
    assert cfg.a == cfg.s * prod              # alpha implied by e


def test_parse_config_malformed_scalar(tmp_path):
    bad = dict(W1_CONFIG, c0="2//7")
    with pytest.raises(ParseError):
        parse_config(write_cfg(tmp_path, bad))


def test_parse_config_float_scalar_rejected(tmp_path):
    bad = dict(W1_CONFIG, c0=0.5)
    with pytest.raises(ParseError):
        parse_config(write_cfg(tmp_path, bad))


def test_parse_config_equal_alpha_beta(tmp_path):
    bad = dict(W2_ETA_CONFIG, a="5", b="5")
    with pytest.raises(InvalidParameters):
        parse_config(write_cfg(tmp_path, bad))


def test_parse_config_unknown_mode(tmp_path):
    bad = dict(W1_CONFIG, modes=["raising", "levitate"])
    with pytest.raises(ParseError):
        parse_config(write_cfg(tmp_path, bad))


def test_parse_config_missing_file():
    with pytest.raises(ParseError):
        parse_config("/nonexistent/cfg.json")


def test_parse_config_low_precision(tmp_path):
    bad = dict(W1_CONFIG, precision=16)
    with pytest.raises(InvalidParameters):
        parse_config(write_cfg(tmp_path, bad))


# -- exit codes ---------------------------------------------------------------


def test_exit_zero_on_pass(tmp_path, capsys):
    path = write_cfg(tmp_path, W1_CONFIG)
    assert main(["verify-raising", "--config", path]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["checks"][0]["status"] == "pass"


def test_exit_two_on_bad_scalar(tmp_path, capsys):
    path = write_cfg(tmp_path, dict(W1_CONFIG, c0="2//7"))
    assert main(["verify-raising", "--config", path]) == 2
    assert "error" in capsys.readouterr().err


def test_exit_two_on_missing_config(capsys):
    assert main(["construct", "--config", "/nonexistent/cfg.json"]) == 2


def test_exit_two_on_unknown_cli_mode(tmp_path, capsys):
    path = write_cfg(tmp_path, W1_CONFIG)
    assert main(["all", "--config", path, "--mode", "levitate"]) == 2


def test_exit_one_on_verification_failure(tmp_path, capsys):
    # breaking the dependent eta entry must surface as a failed check,
    # not as a crash
    bad = dict(W2_ETA_CONFIG, eta=W2_ETA_CONFIG["eta"][:8] + ["9"])
    path = write_cfg(tmp_path, bad)
    assert main(["verify-raising", "--config", path]) == 1
    body = json.loads(capsys.readouterr().out)
    assert body["checks"][0]["status"] == "fail"


def test_exit_one_propagates_from_all(tmp_path, capsys):
    bad = dict(W2_ETA_CONFIG, eta=W2_ETA_CONFIG["eta"][:8] + ["9"],
               modes=["construct", "raising"])
    path = write_cfg(tmp_path, bad)
    assert main(["all", "--config", path]) == 1


# -- flags --------------------------------------------------------------------


def test_out_flag_writes_report(tmp_path, capsys):
    path = write_cfg(tmp_path, W1_CONFIG)
    out = tmp_path / "report.json"
    assert main(["construct", "--config", path, "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    report = json.loads(out.read_text())
    assert set(report) == {"body", "timing"}
    assert report["body"]["tool_version"]


def test_n_max_override(tmp_path, capsys):
    path = write_cfg(tmp_path, W1_CONFIG)
    assert main(["verify-raising", "--config", path, "--n-max", "1"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["config"]["n_max"] == 1


def test_seed_override_echoed(tmp_path, capsys):
    path = write_cfg(tmp_path, W1_CONFIG)
    assert main(["verify-identities", "--config", path,
                 "--seed", "99"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["config"]["seed"] == 99


def test_precision_override_rejects_low(tmp_path):
    path = write_cfg(tmp_path, W1_CONFIG)
    assert main(["construct", "--config", path, "--precision", "8"]) == 2


def test_mode_flag_with_all(tmp_path, capsys):
    path = write_cfg(tmp_path, W1_CONFIG)
    assert main(["all", "--config", path, "--mode", "construct,w2w1"]) == 0
    body = json.loads(capsys.readouterr().out)
    modes = [c["mode"] for c in body["checks"]]
    assert modes == ["construct", "w2w1"]
    statuses = {c["mode"]: c["status"] for c in body["checks"]}
    assert statuses["w2w1"] == "resolved-interpretation"


# -- determinism --------------------------------------------------------------


def test_report_body_is_deterministic(tmp_path):
    path = write_cfg(tmp_path, dict(W1_CONFIG,
                                    modes=["construct", "raising",
                                           "identities", "w2w1"]))
    outs = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        assert main(["all", "--config", path, "--out", str(out)]) == 0
        outs.append(json.loads(out.read_text())["body"])
    assert json.dumps(outs[0], sort_keys=True) \
        == json.dumps(outs[1], sort_keys=True)


def test_apply_reports_partial_fractions(tmp_path, capsys):
    cfg = dict(W2_ETA_CONFIG, modes=["apply"], apply_to=["X", 1])
    path = write_cfg(tmp_path, cfg)
    assert main(["apply", "--config", path]) == 0
    body = json.loads(capsys.readouterr().out)
    payload = body["checks"][0]["payload"]
    assert payload["input"] == ["X", 1]
    keys = {tuple(t[:2]) for t in payload["image"]["terms"]}
    assert ("Y", 0) in keys
