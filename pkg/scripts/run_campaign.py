#!/usr/bin/env python3
"""Run every fixture config through the CLI and summarize the outcomes.

Writes one report per fixture into the output directory (default
./campaign_out) and prints a one-line status per fixture plus a final
summary.  Exit status is 0 when every fixture matches its expected
outcome (the classical-limit fixture is expected to fail verification).
"""

import argparse
import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent
                       / "src"))

from heunaw.cli import main as cli_main  # noqa: E402

FIXTURES = {
    "w1_raising": 0,
    "w2_raising": 0,
    "waw_identities": 0,
    "gauge_w2": 0,
    "w2w1_relation": 0,
    "elliptic_takemura": 0,
    "classical_limit": 1,
}


def run(fixture_dir: pathlib.Path, out_dir: pathlib.Path) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    bad = 0
    for name, expected_code in FIXTURES.items():
        config = fixture_dir / f"{name}.json"
        out = out_dir / f"{name}.report.json"
        code = cli_main(["all", "--config", str(config), "--out", str(out)])
        report = json.loads(out.read_text())
        statuses = {c["mode"]: c["status"] for c in report["body"]["checks"]}
        ok = code == expected_code
        bad += not ok
        flag = "ok" if ok else f"UNEXPECTED exit {code}"
        print(f"{name:20s} exit={code} ({flag})  " +
              " ".join(f"{m}:{s}" for m, s in statuses.items()))
    print(f"\n{len(FIXTURES) - bad}/{len(FIXTURES)} fixtures matched their "
          f"expected outcome; reports in {out_dir}/")
    return 1 if bad else 0


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--fixtures", type=pathlib.Path,
                        default=pathlib.Path(__file__).resolve().parent.parent
                        / "fixtures")
    parser.add_argument("--out", type=pathlib.Path,
                        default=pathlib.Path("campaign_out"))
    return parser.parse_args(argv)


if __name__ == "__main__":
    args = parse_args()
    sys.exit(run(args.fixtures, args.out))
