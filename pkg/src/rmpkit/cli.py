"""Command-line front end: ``rmpkit verify | eigen | wave | transform``.

Exit codes are shared by every command: 0 on success, 1 when a check
fails, 2 on usage or configuration errors (including rejected inputs such
as a non-regular wavevector).
"""

from __future__ import annotations

import argparse
import configparser
import logging
import os
import sys

import numpy as np

from . import __version__
from . import report as rpt
from .errors import ConfigError, RmpkitError
from .operator_spaces import EXPECTED_MULTIPLICITY, eigendecompose
from .rmp_field import RMP, field_from_rmp, transform_rmp
from .tensor_core import (apply_rank2, boost, inverse_map, parse_complex, parse_vector,
                          random_regular_wavevector, rotation)
from .verify import CHECK_IDS, DEFAULT_SAMPLES, DEFAULT_SEED, RunConfig, run_verify
from . import wave_sim as ws

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SEED_ENV = "RMPKIT_SEED"
CONFIG_KEYS = {"seed": int, "samples": int, "tolerance": float, "output": str, "format": str}

log = logging.getLogger("rmpkit")


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ config

def read_config_file(path: str) -> dict:
    """Parse ``key = value`` lines (``#`` comments allowed) into typed defaults."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_string("[rmpkit]\n" + fh.read())
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    out = {}
    for key, raw in parser["rmpkit"].items():
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r} in {path}")
        try:
            out[key] = CONFIG_KEYS[key](raw)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key} in {path}: {raw!r}") from exc
    return out


def env_seed() -> int | None:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{SEED_ENV} must be an integer, got {raw!r}") from exc


def run_config(args) -> RunConfig:
    """Flags override the config file, which overrides RMPKIT_SEED and built-in defaults."""
    file_cfg = read_config_file(args.config) if args.config else {}
    seed = args.seed
    if seed is None:
        seed = file_cfg.get("seed")
    if seed is None:
        seed = env_seed()
    if seed is None:
        seed = DEFAULT_SEED
    tolerances = {}
    for item in getattr(args, "check_tolerance", None) or []:
        cid, _, val = item.partition("=")
        try:
            tolerances[cid] = float(val)
        except ValueError as exc:
            raise ConfigError(f"bad --check-tolerance {item!r}") from exc
    cfg = RunConfig(
        seed=int(seed),
        samples=_pick(getattr(args, "samples", None), file_cfg.get("samples"), DEFAULT_SAMPLES),
        tolerance=_pick(getattr(args, "tolerance", None), file_cfg.get("tolerance"), None),
        tolerances=tolerances,
        output=_pick(args.output, file_cfg.get("output"), None),
        format=_pick(args.format, file_cfg.get("format"), "json"),
    )
    cfg.validate()
    return cfg


def _pick(*values):
    for v in values:
        if v is not None:
            return v
    return None


# ----------------------------------------------------------------- helpers

def _vector(text: str | None, size: int, flag: str):
    if text is None:
        raise UsageError(f"{flag} is required")
    try:
        return parse_vector(text, size)
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from exc


def _pair(text: str, flag: str) -> tuple[int, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"{flag} expects axis,value")
    try:
        axis, value = int(parts[0]), float(parts[1])
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from exc
    if axis not in (1, 2, 3):
        raise UsageError(f"{flag}: axis must be 1, 2 or 3")
    return axis, value


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error_report(command: str, cfg_seed: int, exc: Exception) -> dict:
    return rpt.envelope(command, cfg_seed, __version__, False,
                        error={"type": type(exc).__name__, "message": str(exc)})


# ----------------------------------------------------------------- commands

def cmd_verify(args, cfg: RunConfig) -> int:
    rep = run_verify(cfg, __version__, only=args.only)
    _emit(rpt.dumps(rep.to_dict()), cfg.output)
    if not rep.passed:
        print("failing checks: " + ", ".join(rep.failing()), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_eigen(args, cfg: RunConfig) -> int:
    if args.random:
        rng = np.random.default_rng(cfg.seed)
        vectors = [np.asarray(random_regular_wavevector(rng)) for _ in range(cfg.samples)]
    else:
        vectors = [_vector(args.n, 4, "--n")]
    records = []
    for n in vectors:
        d = eigendecompose(n).as_dict()
        d["n"] = n
        records.append(d)
    ok = all(r["multiplicities"] == {str(k): v for k, v in EXPECTED_MULTIPLICITY.items()}
             for r in records)
    _emit(rpt.dumps(rpt.envelope("eigen", cfg.seed, __version__, ok,
                                 result={"records": records})), cfg.output)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_wave_classify(args, cfg: RunConfig) -> int:
    A0 = _vector(args.a, 3, "--a")
    n = _vector(args.n, 4, "--n")
    mc = ws.classify_mode(A0, n)
    result = mc.as_dict()
    result["vacuum_residual"] = ws.vacuum_residual(A0, n)
    result["j4"] = ws.j4_diagnostic(A0, n, args.c)
    _emit(rpt.dumps(rpt.envelope("wave classify", cfg.seed, __version__, True, result=result)),
          cfg.output)
    return EXIT_OK


def _index(text: str, flag: str) -> tuple:
    try:
        index = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"{flag} expects three integers") from exc
    if len(index) != 3:
        raise UsageError(f"{flag} expects three integers")
    return index


def _scalar(text: str, flag: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from exc


def _simulation_modes(args) -> list:
    index = _index(args.index, "--index")
    kind = args.mode
    if kind in ("transverse", "superposition"):
        amp = (_vector(args.amplitude, 3, "--amplitude") if args.amplitude
               else _default_transverse_amplitude(index))
        modes = [ws.ModeSpec(index, amp, "transverse", traveling=not args.standing)]
    else:
        modes = []
    if kind in ("longitudinal", "superposition"):
        lidx = index if kind == "longitudinal" else _index(args.long_index, "--long-index")
        vel = None
        if args.velocity is not None:
            k = np.asarray(lidx, dtype=float)
            vel = _scalar(args.velocity, "--velocity") * k / np.linalg.norm(k) if np.any(k) else None
        modes.append(ws.longitudinal_mode(lidx, _scalar(args.alpha, "--alpha"), vel))
    return modes


def _default_transverse_amplitude(index):
    k = np.asarray(index, dtype=float)
    trial = np.array([0.0, 0.0, 1.0]) if abs(k[2]) < np.linalg.norm(k) * 0.9 else np.array([1.0, 0, 0])
    a = np.cross(k, trial)
    return a / np.linalg.norm(a)


def simulation_checks(series, summary) -> list:
    """Pass/fail checks matching the mode kinds present in a run."""
    cfg = series.config
    checks = []
    for m in summary["modes"]:
        if m["kind"] == "transverse":
            dev = abs(m["phase_speed"] - cfg.c) / cfg.c
            checks.append(rpt.CheckResult(f"mode{m['mode_id']}_phase_speed",
                                          "relative deviation of measured phase speed from c",
                                          cfg.steps, dev, 5e-3))
        else:
            checks.append(rpt.CheckResult(f"mode{m['mode_id']}_amplitude_drift",
                                          "max drift of the longitudinal amplitude",
                                          cfg.steps, m["amplitude_drift"], 1e-10))
    if all(m["kind"] == "longitudinal" for m in summary["modes"]) and summary["modes"]:
        checks.append(rpt.CheckResult("grid_e_b_norms", "max grid E and B norms",
                                      cfg.steps, max(summary["max_e_norm"], summary["max_b_norm"]),
                                      1e-10))
    checks.append(rpt.CheckResult("transverse_energy_per_step",
                                  "relative change of transverse mode energy per step",
                                  cfg.steps, summary["max_energy_drift"], 1e-12))
    return checks


def cmd_wave_simulate(args, cfg: RunConfig) -> int:
    sim = ws.SimConfig(N=args.N, dx=args.dx, c=args.c, dt=args.dt, steps=args.steps,
                       modes=_simulation_modes(args))
    series = ws.simulate(sim)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            rpt.write_time_series(series, fh)
    if cfg.format == "csv":
        _emit(rpt.time_series_csv(series), cfg.output)
        checks = simulation_checks(series, ws.measure_diagnostics(series))
        return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL
    summary = ws.measure_diagnostics(series)
    checks = simulation_checks(series, summary)
    summary["config"] = {"N": sim.N, "dx": sim.dx, "c": sim.c, "dt": sim.dt, "steps": sim.steps,
                         "mode": args.mode}
    ok = all(c.passed for c in checks)
    _emit(rpt.dumps(rpt.envelope("wave simulate", cfg.seed, __version__, ok, result=summary,
                                 checks=[c.to_dict() for c in checks])), cfg.output)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_transform(args, cfg: RunConfig) -> int:
    if (args.boost is None) == (args.rotate is None):
        raise UsageError("give exactly one of --boost or --rotate")
    if args.boost is not None:
        T = boost(*_pair(args.boost, "--boost"))
    else:
        T = rotation(*_pair(args.rotate, "--rotate"))
    a = RMP(_vector(args.a, 3, "--a"), _vector(args.n, 4, "--n"))
    a_hat = transform_rmp(T, a)
    back = transform_rmp(inverse_map(T), a_hat)
    F_hat = apply_rank2(T, field_from_rmp(a))
    comm = np.linalg.norm(field_from_rmp(a_hat) - F_hat) / max(np.linalg.norm(F_hat), 1e-300)
    trip = np.linalg.norm(back.A - a.A) / max(np.linalg.norm(a.A), 1e-300)
    result = {"A_hat": a_hat.A, "n_hat": a_hat.n, "commutation_residual": float(comm),
              "round_trip_residual": float(trip)}
    checks = [rpt.CheckResult("transform_commutation", "field of transformed RMP vs T F T^t",
                              1, float(comm), 1e-10),
              rpt.CheckResult("transform_round_trip", "inverse transform recovers A",
                              1, float(trip), 1e-10)]
    ok = all(c.passed for c in checks)
    _emit(rpt.dumps(rpt.envelope("transform", cfg.seed, __version__, ok, result=result,
                                 checks=[c.to_dict() for c in checks])), cfg.output)
    return EXIT_OK if ok else EXIT_FAIL


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file with defaults (seed, samples, tolerance, output, format)")
    common.add_argument("--seed", type=int, help=f"random seed (default: ${SEED_ENV} or {DEFAULT_SEED})")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--format", choices=["json", "csv"], help="report format (csv: time series only)")
    common.add_argument("-v", "--verbose", action="count", default=0, help="more logging")

    # shared flags live on the subcommands only: a top-level copy would be
    # silently reset by the subparser's defaults
    p = argparse.ArgumentParser(prog="rmpkit",
                                description="RMP electrodynamics verification toolkit")
    p.add_argument("--version", action="version", version=f"rmpkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run the identity and property suite")
    v.add_argument("--samples", type=int, help=f"samples per check (default {DEFAULT_SAMPLES})")
    v.add_argument("--tolerance", type=float, help="override every check tolerance")
    v.add_argument("--check-tolerance", action="append", metavar="ID=TOL",
                   help="override one check's tolerance (repeatable)")
    v.add_argument("--only", nargs="+", choices=CHECK_IDS, metavar="ID", help="run only these checks")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("eigen", parents=[common], help="eigen report of K/(n.n)")
    g = e.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", help="wavevector, e.g. 1,2,3,4 or 3,4,0,5i")
    g.add_argument("--random", action="store_true", help="seeded random regular wavevectors")
    e.add_argument("--samples", type=int, help="number of random wavevectors")
    e.set_defaults(func=cmd_eigen)

    w = sub.add_parser("wave", help="plane-wave modes").add_subparsers(dest="wave_command", required=True)
    wc = w.add_parser("classify", parents=[common], help="classify a plane-wave mode")
    wc.add_argument("--a", required=True, help="amplitude A0, three components")
    wc.add_argument("--n", required=True, help="wavevector, four components")
    wc.add_argument("--c", type=float, default=1.0, help="speed of light")
    wc.set_defaults(func=cmd_wave_classify)

    ws_ = w.add_parser("simulate", parents=[common], help="evolve modes on a periodic grid")
    ws_.add_argument("--mode", choices=["transverse", "longitudinal", "superposition"], default="transverse")
    ws_.add_argument("--steps", type=int, default=1000)
    ws_.add_argument("--N", type=int, default=32, help="grid points per side (power of two >= 8)")
    ws_.add_argument("--dx", type=float, default=1.0)
    ws_.add_argument("--dt", type=float, default=0.5)
    ws_.add_argument("--c", type=float, default=1.0)
    ws_.add_argument("--index", default="1,2,0", help="integer wave index of the mode")
    ws_.add_argument("--long-index", default="2,0,1", help="longitudinal index in superposition runs")
    ws_.add_argument("--amplitude", help="transverse amplitude (perpendicular to the index)")
    ws_.add_argument("--alpha", default="1", help="longitudinal amplitude along the index")
    ws_.add_argument("--velocity", help="initial longitudinal velocity along the index")
    ws_.add_argument("--standing", action="store_true", help="start the transverse mode at rest")
    ws_.add_argument("--csv", help="also write the time series CSV here")
    ws_.set_defaults(func=cmd_wave_simulate)

    t = sub.add_parser("transform", parents=[common], help="Lorentz-transform an RMP")
    t.add_argument("--boost", help="axis,rapidity")
    t.add_argument("--rotate", help="axis,angle (radians)")
    t.add_argument("--a", required=True, help="RMP amplitude, three components")
    t.add_argument("--n", required=True, help="wavevector, four components")
    t.set_defaults(func=cmd_transform)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)   # exits 2 with usage text on bad flags
    logging.basicConfig(level=logging.ERROR - 10 * min(args.verbose, 3),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    command = args.command if args.command != "wave" else f"wave {args.wave_command}"
    try:
        cfg = run_config(args)
    except ConfigError as exc:
        print(f"rmpkit: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.format == "csv" and command != "wave simulate":
        print("rmpkit: config error: csv output is only available for wave simulate",
              file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"rmpkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RmpkitError as exc:
        print(f"rmpkit: {type(exc).__name__}: {exc}", file=sys.stderr)
        _emit(rpt.dumps(_error_report(command, cfg.seed, exc)), cfg.output)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
