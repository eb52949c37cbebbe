"""Command-line front end.

Verbs::

    satcuma sweep    --preset fig3..fig11 | --spec sweeps.json  [options]
    satcuma validate [--spec scenario.json] [options]
    satcuma report   [--spec scenario.json] [options]

Common options: --seed, --trials, --workers, --out, --format csv|json and
repeatable --set key=value overrides.  Exit codes: 0 success, 1 runtime or
check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import metrics, montecarlo as mc, validate as val
from .scenario import Scenario, ScenarioError, build_scenario
from .sweep import (SweepSpecError, load_sweep_file, preset_sweeps, run_sweep,
                    write_csv, write_json)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

DEFAULT_SCENARIO = {"K": 21, "W": 2, "U": 5}  # reference setup, mu = 10


def _parse_set(items):
    """Parse repeated --set key=value pairs; values read as JSON when possible."""
    out = {}
    for item in items or ():
        if "=" not in item:
            raise SweepSpecError(f"--set expects key=value, got {item!r}")
        key, raw = item.split("=", 1)
        try:
            out[key] = json.loads(raw)
        except json.JSONDecodeError:
            out[key] = raw
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="satcuma",
        description="Uplink satellite fluid-antenna network performance toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--spec", help="input spec file (JSON)")
        p.add_argument("--seed", type=int, default=0, help="master RNG seed")
        p.add_argument("--trials", type=int, default=0,
                       help="Monte-Carlo trials (0 = analytic only for sweep)")
        p.add_argument("--workers", type=int, default=1, help="parallel workers")
        p.add_argument("--out", help="output path (default: stdout/destination by verb)")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config key (repeatable)")

    p_sweep = sub.add_parser("sweep", help="evaluate metrics over a parameter grid")
    common(p_sweep)
    p_sweep.add_argument("--preset", help="named preset (fig3..fig11)")
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")

    p_val = sub.add_parser("validate", help="run the oracle-vs-analytic suite")
    common(p_val)
    p_val.add_argument("--gamma", type=float, default=0.35,
                       help="outage threshold for the agreement check")

    p_rep = sub.add_parser("report", help="human-readable scenario summary")
    common(p_rep)
    return parser


def _load_scenario(args, overrides) -> Scenario:
    if args.spec:
        with open(args.spec) as fh:
            cfg = json.load(fh)
    else:
        cfg = dict(DEFAULT_SCENARIO)
    cfg.update(overrides)
    cfg.setdefault("seed", args.seed)
    return build_scenario(cfg)


def _cmd_sweep(args) -> int:
    overrides = _parse_set(args.set)
    if bool(args.preset) == bool(args.spec):
        raise SweepSpecError("sweep requires exactly one of --preset or --spec")
    if args.preset:
        specs = preset_sweeps(args.preset, seed=args.seed, trials=args.trials,
                              overrides=overrides)
    else:
        specs = load_sweep_file(args.spec, seed=args.seed, trials=args.trials)
        if overrides:
            from .sweep import _apply_overrides
            specs = [_apply_overrides(s, overrides) for s in specs]
    rows = run_sweep(specs, workers=args.workers)
    out = args.out or f"{args.preset or 'sweep'}.{args.format}"
    if args.format == "csv":
        write_csv(rows, out)
    else:
        write_json(rows, out)
    failures = sum(1 for r in rows if str(r["warnings"]).startswith("metric-failure"))
    print(f"wrote {len(rows)} rows to {out}" +
          (f" ({failures} metric failures)" if failures else ""))
    return EXIT_OK


def _cmd_validate(args) -> int:
    overrides = _parse_set(args.set)
    sc = _load_scenario(args, overrides)
    trials = args.trials or 200000
    report = val.run_validation(sc, trials, args.seed, workers=args.workers,
                                gamma=args.gamma)
    text = report.render()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return EXIT_OK if report.passed else EXIT_RUNTIME


def _cmd_report(args) -> int:
    overrides = _parse_set(args.set)
    sc = _load_scenario(args, overrides)
    lines = [
        "scenario summary",
        "-" * 60,
        f"ports K                  {sc.antenna.K}",
        f"aperture W (wavelengths) {sc.antenna.W}",
        f"port density mu          {sc.antenna.mu} "
        + ("(even integer)" if sc.antenna.mu_is_even_integer else "(NOT an even integer)"),
        f"users U                  {sc.users.U}",
        f"path loss zeta_u         {sc.zeta_u:.6g}",
        f"noise power (W)          {sc.budget.noise_power:.6g}",
        f"nominal SNR Gamma        {sc.Gamma:.6g}",
        f"signal scaling V^2       {sc.V ** 2:.6g}",
        f"activated ports Kbar     {sc.Kbar:g}",
        f"SINR supremum            {metrics.sinr_supremum(sc):.6g}",
    ]
    gammas = (0.05, 0.1, 0.2, 0.35, 0.5, 1.0)
    lines.append("-" * 60)
    lines.append(f"{'gamma':>8s} {'outage_exact':>14s} {'outage_compact':>15s}")
    for g in gammas:
        oe = metrics.outage_exact(g, sc).value
        oc = metrics.outage_compact(g, sc).value
        lines.append(f"{g:8.3f} {oe:14.6f} {oc:15.6f}")
    lines.append("-" * 60)
    lines.append(f"mean SINR                {metrics.mean_sinr(sc):.6g}")
    lines.append(f"mean SNR                 {metrics.mean_snr(sc):.6g}")
    rate = metrics.ergodic_rate(sc, outage="exact")
    lines.append(f"ergodic rate (bits/s)    {rate.value:.6g}")
    from .benchmarks import (cuma_signal_gain, min_ports_interference_limited,
                             min_ports_noise_limited)
    lines.append("-" * 60)
    lines.append(f"beamforming gain         {cuma_signal_gain(sc.antenna.K):.4g} "
                 f"(MRC needs that many antennas)")
    lines.append(f"ports to beat MRC(M=18)  {min_ports_noise_limited(18, 7.0, sc.antenna.W)}"
                 f" (noise-limited), "
                 f"{min_ports_interference_limited(7.0, sc.antenna.W)} (interference-limited)")
    if args.trials:
        batch = mc.run_trials(sc, args.trials, args.seed, workers=args.workers)
        p, lo, hi = mc.empirical_outage(batch, 0.35)
        lines.append("-" * 60)
        lines.append(f"MC outage(0.35)          {p:.6f}  CI [{lo:.6f}, {hi:.6f}]"
                     f"  ({args.trials} trials)")
        lines.append(f"MC mean SINR             {batch.sinr.mean():.6g}")
    text = "\n".join(lines)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "validate":
            return _cmd_validate(args)
        return _cmd_report(args)
    except (SweepSpecError, ScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # runtime failure
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
