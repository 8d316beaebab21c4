"""Pinned regression fixtures: report bodies must match byte-for-byte."""

import json

import pytest

from heunaw.cli import main

# fixture name -> expected exit code (the classical limit check is a
# recorded failure: its measured convergence rate is below first order)
FIXTURES = {
    "w1_raising": 0,
    "w2_raising": 0,
    "waw_identities": 0,
    "gauge_w2": 0,
    "w2w1_relation": 0,
    "elliptic_takemura": 0,
    "classical_limit": 1,
}


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_report_matches_pinned_body(name, fixture_dir, tmp_path):
    config = fixture_dir / f"{name}.json"
    expected = fixture_dir / "expected" / f"{name}.body.json"
    out = tmp_path / "report.json"
    code = main(["all", "--config", str(config), "--out", str(out)])
    assert code == FIXTURES[name]
    report = json.loads(out.read_text())
    got = json.dumps(report["body"], sort_keys=True, indent=2) + "\n"
    assert got == expected.read_text()


def test_fixture_rerun_is_identical(fixture_dir, tmp_path):
    config = fixture_dir / "w1_raising.json"
    bodies = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        assert main(["all", "--config", str(config),
                     "--out", str(out)]) == 0
        bodies.append(json.loads(out.read_text())["body"])
    assert bodies[0] == bodies[1]
