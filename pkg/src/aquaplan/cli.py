"""Command-line front end.

Every run writes CSVs named ``<command>[_<suffix>]_<timestamp>.csv`` plus
a ``run.json`` manifest recording the fully merged configuration, the
seed, the package version, the timestamp and the output names.  Replaying
with ``--from-manifest run.json`` reuses the stored configuration *and*
the stored timestamp, so the CSV bytes come out identical.

Option precedence: command-line flag, then the matching section of the
INI file given with ``--config``, then the built-in default.  The output
directory falls back to the AQUAPLAN_OUTDIR environment variable.  CSV
files start with ``#`` comment lines echoing the configuration; parsers
downstream skip those.  Column layouts are documented in docs/schemas.md.
"""

import argparse
import configparser
import json
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .acquisition import expected_improvement
from .aoi import QueueParams, aoi_violation, semantic_objective
from .channel import ChannelParams, attenuation_db, attenuation_linear
from .errors import AquaplanError, DomainError
from .optimizer import (BoConfig, compare_acquisitions, optimize_placement,
                        placement_objective)
from .sensing import SensorLayout, WakeupParams, solve_p1, wakeup_expectation
from .simkit import ScenarioConfig, simulate_delay_comparison, simulate_mm1_aoi
from .surrogate import gp_fit

_CHANNEL_FIELDS = [("freq_khz", float, 10.0), ("zeta", float, 1.5),
                   ("a0_db", float, 0.0)]
_WAKEUP_FIELDS = [("gamma_wake", float, 0.9), ("gamma_cap", float, 1.0),
                  ("decay", float, 0.6)]
_BO_FIELDS = [("seed", int, 0), ("n_init", int, 10), ("n_iter", int, 40),
              ("batch", int, 100), ("acquisition", str, "ei"),
              ("omega", float, 0.1), ("surrogate", str, "gp")]

# (section, fields) per command; fields are (name, type, default)
_SPECS = {
    "channel": ("channel", _CHANNEL_FIELDS + [
        ("d_min", float, 100.0), ("d_max", float, 5000.0), ("n", int, 50)]),
    "sense": ("sensing", _CHANNEL_FIELDS + _WAKEUP_FIELDS + [
        ("k_max", int, 8), ("d_min", float, 10.0), ("d_max", float, 1000.0),
        ("boundary_m", float, 5.0), ("efficiency", float, 0.9)]),
    "aoi": ("aoi", [
        ("lam", float, 0.8), ("mu", float, 1.0), ("threshold_m", float, None),
        ("m_min", float, 0.5), ("m_max", float, 10.0), ("n", int, 20),
        ("sim_horizon", float, 0.0), ("seed", int, 0)]),
    "rate": ("optimizer", _CHANNEL_FIELDS + _WAKEUP_FIELDS + _BO_FIELDS + [
        ("mu", float, 1.0), ("threshold_m", float, 5.0), ("k", int, 1),
        ("n_sensors", int, 4), ("d_min", float, 10.0), ("d_max", float, 1000.0),
        ("boundary_m", float, 5.0), ("efficiency", float, 0.9),
        ("lam_min", float, 0.01), ("lam_max", float, 0.99)]),
    "place": ("optimizer", _CHANNEL_FIELDS + _WAKEUP_FIELDS + _BO_FIELDS + [
        ("k_min", int, 1), ("k_max", int, 50), ("d_min", float, 2.0),
        ("d_max", float, 40.0), ("boundary_m", float, 5.0),
        ("efficiency", float, 0.9), ("drift_every", int, 0),
        ("drift_tolerance", float, 0.05), ("grid", int, 0)]),
    "compare": ("optimizer", _CHANNEL_FIELDS + _WAKEUP_FIELDS + _BO_FIELDS + [
        ("mu", float, 1.0), ("threshold_m", float, 5.0), ("k", int, 1),
        ("n_sensors", int, 4), ("d_min", float, 10.0), ("d_max", float, 1000.0),
        ("boundary_m", float, 5.0), ("efficiency", float, 0.9),
        ("lam_min", float, 0.01), ("lam_max", float, 0.99),
        ("n_seeds", int, 5)]),
    "simulate": ("simulate", _CHANNEL_FIELDS + _WAKEUP_FIELDS + [
        ("subnets", int, 3), ("nodes_per_subnet", int, 8),
        ("sim_horizon", float, 2000.0), ("sound_speed_mps", float, 1500.0),
        ("lam", float, 0.8), ("mu", float, 1.0), ("threshold_m", float, 5.0),
        ("strategies", str, "optimized,random,fixed"),
        ("d_min", float, 2.0), ("d_max", float, 40.0),
        ("k_min", int, 1), ("k_max", int, 50),
        ("seed", int, 0), ("threads", int, 1)]),
}

# spec'd flag spellings that differ from the field names
_FLAG_ALIASES = {"lam": "--lambda", "threshold_m": "--M", "decay": "--delta",
                 "n_iter": "--iters", "acquisition": "--acq"}


def _fmt(value):
    if isinstance(value, float):
        return "%.9g" % value
    return str(value)


def _write_csv(path: Path, command, opts, timestamp, columns, rows):
    lines = [f"# aquaplan {__version__} {command} {timestamp}"]
    for key in sorted(opts):
        lines.append(f"# {key} = {opts[key]!r}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _channel_params(opts):
    return ChannelParams(a0_db=opts["a0_db"], zeta=opts["zeta"],
                         freq_khz=opts["freq_khz"])


def _wakeup_params(opts):
    return WakeupParams(gamma_wake=opts["gamma_wake"],
                        gamma_cap=opts["gamma_cap"], decay=opts["decay"])


def _bo_config(opts, bounds, integer_dims=()):
    return BoConfig(bounds=bounds, seed=opts["seed"], n_init=opts["n_init"],
                    n_iter=opts["n_iter"], batch=opts["batch"],
                    acquisition=opts["acquisition"], omega=opts["omega"],
                    surrogate=opts["surrogate"], integer_dims=integer_dims,
                    drift_every=opts.get("drift_every", 0),
                    drift_tolerance=opts.get("drift_tolerance", 0.05))


def _run_channel(opts):
    params = _channel_params(opts)
    d = np.linspace(opts["d_min"], opts["d_max"], opts["n"])
    rows = [(di, attenuation_db(params, di), attenuation_linear(params, di))
            for di in d]
    return [("", ["distance_m", "attenuation_db", "attenuation_linear"], rows)]


def _run_sense(opts):
    channel = _channel_params(opts)
    wakeup = _wakeup_params(opts)
    counts = range(1, opts["k_max"] + 1)
    result = solve_p1(counts, wakeup, channel, d_min=opts["d_min"],
                      d_max=opts["d_max"], boundary_m=opts["boundary_m"],
                      efficiency=opts["efficiency"])
    rows = []
    for k in counts:
        layout = SensorLayout.uniform(k, opts["d_min"], opts["d_max"],
                                      opts["boundary_m"], opts["efficiency"])
        e = wakeup_expectation(layout, wakeup, channel)
        rows.append((k, e, 1 if k == result.k else 0))
    return [("", ["k", "expected_wakeups", "selected"], rows)]


def _run_aoi(opts):
    with_sim = opts["sim_horizon"] > 0
    if opts["threshold_m"] is not None:  # single-threshold query
        queue = QueueParams(opts["lam"], opts["mu"], opts["threshold_m"])
        closed = aoi_violation(queue)
        print(closed)
        row = (queue.threshold_m, closed)
        if with_sim:
            sample = simulate_mm1_aoi(queue, opts["sim_horizon"], opts["seed"])
            row += (sample.violation_fraction,)
        rows = [row]
    else:
        rows = []
        for i, m in enumerate(np.linspace(opts["m_min"], opts["m_max"], opts["n"])):
            queue = QueueParams(opts["lam"], opts["mu"], float(m))
            closed = aoi_violation(queue)
            if with_sim:
                sample = simulate_mm1_aoi(queue, opts["sim_horizon"],
                                          seed=opts["seed"] + i)
                rows.append((float(m), closed, sample.violation_fraction))
            else:
                rows.append((float(m), closed))
    cols = ["threshold_m", "violation_closed"]
    if with_sim:
        cols.append("violation_sim")
    return [("", cols, rows)]


def _rate_pieces(opts):
    channel = _channel_params(opts)
    wakeup = _wakeup_params(opts)
    layout = SensorLayout.uniform(opts["n_sensors"], opts["d_min"],
                                  opts["d_max"], opts["boundary_m"],
                                  opts["efficiency"])
    queue = QueueParams(opts["lam_min"], opts["mu"], opts["threshold_m"])
    if not 1 <= opts["k"] <= opts["n_sensors"]:
        raise DomainError("k must select one of the n_sensors sensors")

    def rate(x):
        return semantic_objective(float(np.atleast_1d(x)[0]), queue, opts["k"],
                                  layout, wakeup, channel)
    return rate


def _run_rate(opts):
    rate = _rate_pieces(opts)
    cfg = _bo_config(opts, ((opts["lam_min"], opts["lam_max"]),))
    trace = optimize_placement(rate, cfg)  # maximize the semantic rate
    rows = [(r.index, r.phase, r.x[0], r.observed, r.best, r.threshold)
            for r in trace.rows]
    return [("", ["index", "phase", "lam", "rate", "best_rate", "threshold"],
             rows)]


def _place_grid(trace, objective, cfg, n):
    """Objective and final-model acquisition over an n x n (K, d) mesh."""
    (k_lo, k_hi), (d_lo, d_hi) = cfg.bounds
    ks = np.unique(np.round(np.linspace(k_lo, k_hi, n)).astype(int))
    ds = np.linspace(d_lo, d_hi, n)
    x_obs = np.array([r.x for r in trace.rows], dtype=float)
    y_obs = np.array([-r.observed for r in trace.rows])  # minimize sense
    lo = np.array([b[0] for b in cfg.bounds])
    width = np.array([max(b[1] - b[0], 1e-300) for b in cfg.bounds])
    model = gp_fit((x_obs - lo) / width, y_obs, noise_var=cfg.noise_var)
    threshold = -trace.rows[-1].threshold
    rows = []
    for k in ks:
        pts = np.column_stack([np.full(ds.size, float(k)), ds])
        mean, var = model.predict((pts - lo) / width)
        acq = expected_improvement(mean, np.sqrt(var), threshold)
        for j, d in enumerate(ds):
            rows.append((int(k), float(d), objective(np.array([float(k), d])),
                         float(acq[j])))
    return rows


def _run_place(opts):
    channel = _channel_params(opts)
    wakeup = _wakeup_params(opts)
    objective = placement_objective(wakeup, channel,
                                    boundary_m=opts["boundary_m"],
                                    efficiency=opts["efficiency"])
    cfg = _bo_config(opts, ((opts["k_min"], opts["k_max"]),
                            (opts["d_min"], opts["d_max"])), integer_dims=(0,))
    trace = optimize_placement(objective, cfg)
    rows = [(r.index, r.phase, int(r.x[0]), r.x[1], r.observed, r.best,
             r.threshold) for r in trace.rows]
    out = [("", ["index", "phase", "k", "spacing_m", "expected_wakeups",
                 "best_expected_wakeups", "threshold"], rows)]
    if opts["grid"] > 0:
        grid_rows = _place_grid(trace, objective, cfg, opts["grid"])
        out.append(("grid", ["k", "spacing_m", "expected_wakeups",
                             "acquisition"], grid_rows))
    return out


def _run_compare(opts):
    rate = _rate_pieces(opts)
    cfg = _bo_config(opts, ((opts["lam_min"], opts["lam_max"]),))
    seeds = list(range(opts["seed"], opts["seed"] + opts["n_seeds"]))
    table = compare_acquisitions(lambda x: -rate(x), cfg, seeds)
    rows = []
    for i, seed in enumerate(seeds):
        rows.append((seed,
                     int(table["ei"]["evals"][i]),
                     int(table["aei"]["evals"][i]),
                     int(table["aei_mlp"]["evals"][i]),
                     -table["ei"]["best"][i],
                     -table["aei"]["best"][i],
                     -table["aei_mlp"]["best"][i]))
    # seed-averaged best-so-far per variant, in rate (maximize) sense
    n_rows = cfg.n_init + cfg.n_iter
    curves = []
    for i in range(n_rows):
        curve_row = [i]
        for name in ("ei", "aei", "aei_mlp"):
            best_i = [-t.rows[i].best for t in table[name]["traces"]]
            curve_row.append(float(np.mean(best_i)))
        curves.append(tuple(curve_row))
    return [("", ["seed", "ei_evals", "aei_evals", "aei_mlp_evals",
                  "ei_best_rate", "aei_best_rate", "aei_mlp_best_rate"], rows),
            ("curves", ["index", "ei_best_rate", "aei_best_rate",
                        "aei_mlp_best_rate"], curves)]


def _run_simulate(opts):
    channel = _channel_params(opts)
    wakeup = _wakeup_params(opts)
    scenario = ScenarioConfig(subnets=opts["subnets"],
                              nodes_per_subnet=opts["nodes_per_subnet"],
                              sound_speed_mps=opts["sound_speed_mps"],
                              sim_horizon=opts["sim_horizon"],
                              seed=opts["seed"])
    queue = QueueParams(opts["lam"], opts["mu"], opts["threshold_m"])
    strategies = [s.strip() for s in opts["strategies"].split(",") if s.strip()]
    series = simulate_delay_comparison(
        scenario, strategies, queue, wakeup, channel,
        d_bounds=(opts["d_min"], opts["d_max"]),
        k_bounds=(opts["k_min"], opts["k_max"]), threads=opts["threads"])
    rows = []
    for name in strategies:
        if name not in series:
            continue
        s = series[name]
        print(f"{name}: mean delay {s.mean_delay:.6g} over {s.times.size} updates")
        for i in range(s.times.size):
            rows.append((name, int(s.subnet_ids[i]), s.times[i], s.delays[i]))
    return [("", ["strategy", "subnet", "time", "delay"], rows)]


_RUNNERS = {"channel": _run_channel, "sense": _run_sense, "aoi": _run_aoi,
            "rate": _run_rate, "place": _run_place, "compare": _run_compare,
            "simulate": _run_simulate}


def _merge_opts(command, args, ini):
    section, fields = _SPECS[command]
    merged = {}
    for name, typ, default in fields:
        cli_val = getattr(args, name, None)
        if cli_val is not None:
            merged[name] = typ(cli_val)
        elif ini is not None and ini.has_option(section, name):
            merged[name] = typ(ini.get(section, name))
        else:
            merged[name] = default
    return merged


def _execute(command, opts, outdir: Path, timestamp):
    outputs = _RUNNERS[command](opts)
    outdir.mkdir(parents=True, exist_ok=True)
    names = []
    for suffix, columns, rows in outputs:
        stem = command if not suffix else f"{command}_{suffix}"
        csv_name = f"{stem}_{timestamp}.csv"
        _write_csv(outdir / csv_name, command, opts, timestamp, columns, rows)
        names.append(csv_name)
        print(f"wrote {outdir / csv_name} ({len(rows)} rows)")
    manifest = {
        "command": command,
        "config": opts,
        "seed": opts.get("seed"),
        "version": __version__,
        "timestamp": timestamp,
        "outputs": names,
    }
    (outdir / "run.json").write_text(json.dumps(manifest, indent=2,
                                                sort_keys=True) + "\n")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="aquaplan",
        description="Underwater monitoring planner: channel, sensing, age "
                    "analytics, surrogate optimization, simulation.")
    parser.add_argument("--version", action="version",
                        version=f"aquaplan {__version__}")
    parser.add_argument("--config", help="INI file with per-command sections")
    parser.add_argument("--outdir", help="output directory "
                        "(default: $AQUAPLAN_OUTDIR or the working directory)")
    parser.add_argument("--from-manifest", metavar="RUN_JSON",
                        help="replay a previous run byte-for-byte")
    sub = parser.add_subparsers(dest="command")
    for command, (_, fields) in _SPECS.items():
        p = sub.add_parser(command)
        for name, typ, default in fields:
            flag = _FLAG_ALIASES.get(name, f"--{name.replace('_', '-')}")
            p.add_argument(flag, dest=name, type=typ, default=None,
                           help=f"default {default}")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    outdir = Path(args.outdir or os.environ.get("AQUAPLAN_OUTDIR") or ".")
    try:
        if args.from_manifest:
            manifest = json.loads(Path(args.from_manifest).read_text())
            command = manifest["command"]
            if command not in _RUNNERS:
                raise DomainError(f"manifest names unknown command {command!r}")
            return _execute(command, manifest["config"], outdir,
                            manifest["timestamp"])
        if not args.command:
            parser.error("a command or --from-manifest is required")
        ini = None
        if args.config:
            ini = configparser.ConfigParser()
            if not ini.read(args.config):
                raise DomainError(f"config file {args.config!r} not readable")
        opts = _merge_opts(args.command, args, ini)
        timestamp = time.strftime("%Y%m%dT%H%M%S", time.gmtime())
        return _execute(args.command, opts, outdir, timestamp)
    except AquaplanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
