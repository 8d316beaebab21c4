"""Command-line runner: config ingestion, verification campaigns, reports.

Configs are JSON with every exact scalar written as text ("3/2", "-1/4")
so that no float ever touches the exact side.  Reports are JSON too; the
regression-compared part lives under "body" and is serialized with
sorted keys, while wall-clock data goes to a separate "timing" section
that fixtures ignore.

Exit codes: 0 all checks pass, 1 verification failure, 2 invalid input,
3 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field

from gmpy2 import mpq

from . import __version__
from .elliptic import (DEFAULT_T, limit_check_classical,
                       limit_check_takemura)
from .errors import HeunError, InvalidParameters, ParseError
from .gauge import verify_takemura_coincidence, verify_w2_w1_relation
from .grid import GridParams, elementary, partial_fractions_x
from .operators import (EpsilonParams, EtaParams, build_W1, build_W2,
                        build_W_AW, eta_from_epsilon, expected_xi_residues,
                        extract_waw_coefficients, verify_raising,
                        waw_dependent_coefficients)
from .randparams import (random_eta_w2, random_grid, random_w1_epsilon_grid)
from .scalars import format_scalar, parse_scalar

MODES = ("construct", "apply", "raising", "identities", "gauge", "w2w1",
         "elliptic", "classical")

_RAISING_MODE = {"W1": "one_series", "W2": "two_series", "W_AW": "w_aw"}


# ---------------------------------------------------------------------------
# config
# ---------------------------------------------------------------------------


@dataclass
class RunConfig:
    operator: str                  # W1 | W2 | W_AW
    s: mpq
    a: mpq
    b: mpq
    parametrization: str           # eta | epsilon | rho
    e: tuple | None = None
    eta: tuple | None = None
    rho: tuple | None = None       # 10 free rho for W_AW
    c0: mpq = mpq(0)
    c3: mpq = mpq(0)
    n_max: int = 6
    m_max: int = 6
    modes: tuple = ("raising",)
    precision: int = 256
    p_list: tuple = (mpq(1, 1000), mpq(1, 10000), mpq(1, 100000))
    t: mpq = DEFAULT_T
    classical_a: tuple | None = None
    seed: int = 0
    grid_range: int = 6
    apply_to: tuple = ("X", 0)
    raw: dict = field(default_factory=dict)

    def grid(self) -> GridParams:
        one_series = self.operator == "W1"
        return GridParams.new(self.s, self.a, self.b,
                              e=None if self.e is None else list(self.e),
                              range=self.grid_range, one_series=one_series)

    def params(self):
        """Operator parameters per the configured parametrization."""
        if self.parametrization == "epsilon":
            if self.e is None:
                raise InvalidParameters("epsilon parametrization needs e")
            return EpsilonParams.new(list(self.e), c0=self.c0)
        if self.parametrization == "eta":
            if self.eta is None:
                raise InvalidParameters("eta parametrization needs eta")
            return EtaParams.new(list(self.eta), c0=self.c0,
                                 which=self.operator)
        if self.parametrization == "rho":
            if self.rho is None:
                raise InvalidParameters("rho parametrization needs rho")
            return waw_dependent_coefficients(self.grid(), list(self.rho),
                                              self.c0, self.c3)
        raise InvalidParameters(
            f"unknown parametrization {self.parametrization!r}")

    def build(self):
        g = self.grid()
        p = self.params()
        if self.operator == "W1":
            return g, p, build_W1(g, p)
        if self.operator == "W2":
            return g, p, build_W2(g, p)
        if self.operator == "W_AW":
            return g, p, build_W_AW(g, p)
        raise InvalidParameters(f"unknown operator {self.operator!r}")


def _scalar(raw, field_name) -> mpq:
    if isinstance(raw, int):
        return mpq(raw)
    if isinstance(raw, str):
        return parse_scalar(raw)
    raise ParseError(f"field {field_name!r}: exact scalars must be "
                     f"text or int, got {type(raw).__name__}")


def _scalar_list(raw, field_name, length=None) -> tuple:
    if not isinstance(raw, list):
        raise ParseError(f"field {field_name!r} must be a list")
    if length is not None and len(raw) != length:
        raise ParseError(f"field {field_name!r} must have {length} entries")
    return tuple(_scalar(x, field_name) for x in raw)


def parse_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError("config root must be an object")

    op = raw.get("operator", "W1")
    if op not in ("W1", "W2", "W_AW"):
        raise ParseError(f"unknown operator {op!r}")
    parametrization = raw.get("parametrization", "epsilon")

    try:
        s = _scalar(raw["s"], "s")
    except KeyError:
        raise ParseError("config lacks the required field 's'")

    e = eta = rho = None
    if "e" in raw:
        e = _scalar_list(raw["e"], "e", 8)
    if "eta" in raw:
        eta = _scalar_list(raw["eta"], "eta", 9)
    if "rho" in raw:
        rho = _scalar_list(raw["rho"], "rho", 10)

    # alpha/beta either explicit or implied by the parametrization
    if "a" in raw:
        a = _scalar(raw["a"], "a")
    elif e is not None:
        a = s
        for ej in e:
            a *= ej
    else:
        raise ParseError("config needs 'a' or 'e'")
    b = _scalar(raw["b"], "b") if "b" in raw else s
    if a == b:
        raise InvalidParameters("grid requires alpha != beta")

    modes = raw.get("modes", ["raising"])
    if isinstance(modes, str):
        modes = [m.strip() for m in modes.split(",")]
    for m in modes:
        if m not in MODES:
            raise ParseError(f"unknown mode {m!r}; choose from {MODES}")

    cfg = RunConfig(
        operator=op, s=s, a=a, b=b, parametrization=parametrization,
        e=e, eta=eta, rho=rho,
        c0=_scalar(raw.get("c0", 0), "c0"),
        c3=_scalar(raw.get("c3", 0), "c3"),
        n_max=int(raw.get("n_max", 6)), m_max=int(raw.get("m_max", 6)),
        modes=tuple(modes), precision=int(raw.get("precision", 256)),
        p_list=_scalar_list(raw["p_list"], "p_list")
        if "p_list" in raw else RunConfig.p_list,
        t=_scalar(raw.get("t", "1/3"), "t"),
        classical_a=_scalar_list(raw["classical_a"], "classical_a", 6)
        if "classical_a" in raw else None,
        seed=int(raw.get("seed", 0)),
        grid_range=int(raw.get("range", 6)),
        apply_to=tuple(raw.get("apply_to", ["X", 0])),
        raw=raw,
    )
    if cfg.precision < 64:
        raise InvalidParameters("precision must be at least 64 bits")
    cfg.grid()          # validate grid invariants up front
    return cfg


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------


def _check_construct(cfg: RunConfig) -> tuple:
    g, p, w = cfg.build()
    payload = {"label": w.label,
               "a_plus": w.a_plus.to_text(),
               "a_minus": w.a_minus.to_text(),
               "a_zero": w.a_zero.to_text(),
               "aw_symmetric": w.has_aw_symmetry()}
    return True, payload


def _check_apply(cfg: RunConfig) -> tuple:
    g, p, w = cfg.build()
    series, n = cfg.apply_to[0], int(cfg.apply_to[1])
    image = w.apply(elementary(g, series, n))
    form = partial_fractions_x(image, g)
    return True, {"input": [series, n], "image": form.to_record()}


def _check_raising(cfg: RunConfig, rng: random.Random) -> tuple:
    g, p, w = cfg.build()
    mode = _RAISING_MODE[cfg.operator]
    report = verify_raising(w, g, mode, cfg.n_max,
                            m_max=cfg.m_max if mode == "two_series" else -1,
                            rng=rng, strict=False)
    return report.passed, report.to_record()


def _check_identities(cfg: RunConfig, rng: random.Random) -> tuple:
    """Coefficient dependencies, parametrization equivalence and the
    closed-form residues, at seeded random parameter points."""
    payload = {"points": 0, "failures": []}
    ok = True

    for _ in range(5):
        g = random_grid(rng, range_=4)
        rho_free = [mpq(rng.randint(-9, 9), rng.randint(1, 9))
                    for _ in range(10)]
        if rho_free[0] == 0:
            rho_free[0] = mpq(1)
        coeffs = waw_dependent_coefficients(g, rho_free, mpq(0), mpq(1))
        w = build_W_AW(g, coeffs)
        back = extract_waw_coefficients(w, g)
        if back.rho != coeffs.rho or back.c != coeffs.c:
            ok = False
            payload["failures"].append(
                ["waw_roundtrip", format_scalar(g.s), format_scalar(g.a)])
        payload["points"] += 1

    for _ in range(5):
        g, p = random_w1_epsilon_grid(rng, range_=4)
        eta = eta_from_epsilon(g, p, "W1")
        if build_W1(g, eta) != build_W1(g, p):
            ok = False
            payload["failures"].append(
                ["w1_parametrization", format_scalar(g.s)])
        payload["points"] += 1

    for _ in range(3):
        g = random_grid(rng, range_=6)
        p = random_eta_w2(rng, g)
        w = build_W2(g, p)
        for n in (1, 2, 3):
            form = partial_fractions_x(w.apply(elementary(g, "X", n)), g)
            if (form.terms != expected_xi_residues(g, p, n)
                    or form.constant != 0 or form.double_terms):
                ok = False
                payload["failures"].append(
                    ["xi_hat", n, format_scalar(g.s)])
        payload["points"] += 1

    return ok, payload


def _check_gauge(cfg: RunConfig) -> tuple:
    if cfg.operator != "W2" or cfg.e is None:
        raise InvalidParameters("gauge check needs a W2 epsilon config")
    g = cfg.grid()
    p = EpsilonParams.new(list(cfg.e), c0=cfg.c0)
    rep = verify_takemura_coincidence(g, p, strict=False)
    return rep.passed, rep.to_record()


def _check_w2w1(cfg: RunConfig) -> tuple:
    if cfg.operator != "W1" or cfg.e is None:
        raise InvalidParameters("w2w1 check needs a W1 epsilon config")
    g = cfg.grid()
    p = EpsilonParams.new(list(cfg.e), c0=cfg.c0)
    rep = verify_w2_w1_relation(g, p, strict=False)
    return rep.passed, rep.to_record()


def _check_elliptic(cfg: RunConfig) -> tuple:
    if cfg.e is None:
        raise InvalidParameters("elliptic check needs epsilon parameters")
    g = cfg.grid()
    p = EpsilonParams.new(list(cfg.e), c0=cfg.c0)
    rep = limit_check_takemura(g, p, list(cfg.p_list), t=cfg.t,
                               precision=cfg.precision, strict=False)
    return rep.passed, rep.to_record()


def _check_classical(cfg: RunConfig) -> tuple:
    if cfg.classical_a is None:
        raise InvalidParameters("classical check needs 'classical_a' "
                                "(the six free shift parameters)")
    rep = limit_check_classical(list(cfg.classical_a), cfg.s,
                                list(cfg.p_list), t=cfg.t,
                                precision=cfg.precision, strict=False)
    return rep.passed, rep.to_record()


def run(cfg: RunConfig) -> tuple:
    """Execute the configured modes; returns (report dict, exit code)."""
    checks = []
    timing = {}
    any_failed = False
    for mode in cfg.modes:
        rng = random.Random(cfg.seed)     # each check gets a fresh stream
        start = time.monotonic()
        try:
            if mode == "construct":
                passed, payload = _check_construct(cfg)
            elif mode == "apply":
                passed, payload = _check_apply(cfg)
            elif mode == "raising":
                passed, payload = _check_raising(cfg, rng)
            elif mode == "identities":
                passed, payload = _check_identities(cfg, rng)
            elif mode == "gauge":
                passed, payload = _check_gauge(cfg)
            elif mode == "w2w1":
                passed, payload = _check_w2w1(cfg)
            elif mode == "elliptic":
                passed, payload = _check_elliptic(cfg)
            elif mode == "classical":
                passed, payload = _check_classical(cfg)
            else:                                       # pragma: no cover
                raise InvalidParameters(f"unknown mode {mode!r}")
        except HeunError as exc:
            passed = False
            payload = {"error": type(exc).__name__, "message": str(exc)}
        timing[mode] = f"{time.monotonic() - start:.3f}s"
        status = "pass" if passed else "fail"
        if mode == "w2w1" and passed:
            status = "resolved-interpretation"
        checks.append({"mode": mode, "status": status, "payload": payload})
        if not passed:
            any_failed = True

    body = {
        "tool_version": __version__,
        "config": _echo_config(cfg),
        "checks": checks,
    }
    report = {"body": body, "timing": timing}
    return report, (1 if any_failed else 0)


def _echo_config(cfg: RunConfig) -> dict:
    echo = {k: v for k, v in sorted(cfg.raw.items())}
    echo["seed"] = cfg.seed
    echo["precision"] = cfg.precision
    echo["n_max"] = cfg.n_max
    echo["m_max"] = cfg.m_max
    return echo


def write_report(report: dict, out_path: str) -> None:
    """Atomic write; the body is serialized deterministically."""
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    tmp = out_path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, out_path)


def report_body_text(report: dict) -> str:
    """The regression-compared serialization (timing excluded)."""
    return json.dumps(report["body"], sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


_SUBCOMMAND_MODES = {
    "construct": ("construct",),
    "apply": ("apply",),
    "verify-raising": ("raising",),
    "verify-identities": ("identities",),
    "verify-gauge": ("gauge",),
    "verify-w2w1": ("w2w1",),
    "limit-elliptic": ("elliptic",),
    "limit-classical": ("classical",),
    "all": None,            # take the mode list from config / --mode
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heunaw",
        description="construct and verify rational q-Heun operators")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _SUBCOMMAND_MODES:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON parameter file")
        p.add_argument("--mode", default=None,
                       help="comma-separated mode list (only with 'all')")
        p.add_argument("--out", default=None, help="report output path")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--precision", type=int, default=None)
        p.add_argument("--n-max", type=int, default=None)
        p.add_argument("--m-max", type=int, default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.precision is not None:
            cfg.precision = args.precision
            if cfg.precision < 64:
                raise InvalidParameters("precision must be at least 64 bits")
        if args.n_max is not None:
            cfg.n_max = args.n_max
        if args.m_max is not None:
            cfg.m_max = args.m_max
        forced = _SUBCOMMAND_MODES[args.command]
        if forced is not None:
            cfg.modes = forced
        elif args.mode:
            modes = tuple(m.strip() for m in args.mode.split(","))
            for m in modes:
                if m not in MODES:
                    raise ParseError(f"unknown mode {m!r}")
            cfg.modes = modes
    except (ParseError, InvalidParameters, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except HeunError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        report, code = run(cfg)
    except Exception as exc:                     # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 3

    if args.out:
        try:
            write_report(report, args.out)
        except OSError as exc:
            print(f"error: cannot write report: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(report_body_text(report))
    return code


if __name__ == "__main__":                       # pragma: no cover
    sys.exit(main())
