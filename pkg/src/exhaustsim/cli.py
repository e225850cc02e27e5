"""Command-line entry point: run, compare, validate."""

import argparse
import dataclasses
import json
import os
import sys

from . import runner, report
from .mac import MAC_NAMES
from .scenario import Scenario, load_scenario, validate


def _parse_seeds(text):
    try:
        seeds = [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"seeds must be comma-separated integers, got {text!r}")
    if not seeds:
        raise argparse.ArgumentTypeError("empty seed list")
    return seeds


def build_parser():
    parser = argparse.ArgumentParser(
        prog="exhaustsim",
        description="Vehicle exhaust monitoring WSN simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, mac=True):
        p.add_argument("--scenario", metavar="FILE",
                       help="YAML scenario file (defaults apply if omitted)")
        if mac:
            p.add_argument("--mac", choices=MAC_NAMES,
                           help="override the scenario's MAC protocol")
        p.add_argument("--out-dir", default=os.environ.get(
            "EXHAUSTSIM_OUT", "results"),
            help="artifact directory (default: results, or $EXHAUSTSIM_OUT)")
        p.add_argument("--trace", action="store_true",
                       help="write a per-run event trace log")

    p_run = sub.add_parser("run", help="run one scenario/MAC/seed")
    common(p_run)
    p_run.add_argument("--seed", type=int, default=1)

    p_cmp = sub.add_parser("compare",
                           help="run all four MACs over a seed batch")
    common(p_cmp, mac=False)
    p_cmp.add_argument("--seeds", type=_parse_seeds,
                       default=list(runner.DEFAULT_SEEDS),
                       help="comma-separated seed list (default 1..10)")

    p_val = sub.add_parser("validate", help="check a scenario file")
    p_val.add_argument("--scenario", metavar="FILE", required=True)
    return parser


def _load(args):
    if args.scenario:
        scenario = load_scenario(args.scenario)
    else:
        scenario = Scenario()
    if getattr(args, "mac", None):
        scenario = dataclasses.replace(scenario, mac=args.mac)
    errors = validate(scenario)
    if errors:
        for err in errors:
            print(f"error: {err}", file=sys.stderr)
        raise SystemExit(2)
    return scenario


def cmd_run(args):
    scenario = _load(args)
    out_dir = os.path.join(args.out_dir, scenario.name)
    _, summary = runner.run_one(scenario, args.seed, out_dir=out_dir,
                                trace=args.trace)
    print(json.dumps(summary["packets"], indent=2, sort_keys=True))
    print(f"artifacts: {os.path.join(out_dir, scenario.mac, f'seed-{args.seed}')}")
    return 0


def cmd_compare(args):
    scenario = _load(args)
    out_dir = os.path.join(args.out_dir, scenario.name)
    os.makedirs(out_dir, exist_ok=True)
    results = runner.run_comparison(scenario, seeds=args.seeds,
                                    out_dir=out_dir, trace=args.trace)
    report.write_comparison_csv(
        os.path.join(out_dir, "comparison.csv"), results)
    report.render_comparison_figures(out_dir, results)

    # energy timeline from the first seed of each MAC
    series = {}
    for mac in MAC_NAMES:
        variant = dataclasses.replace(scenario, mac=mac)
        sim, _ = runner.run_one(variant, args.seeds[0])
        vid = sim.vehicle_ids[0]
        series[mac] = sim.nodes[vid].energy.series
    report.render_energy_timeline(out_dir, series)

    header = (f"{'mac':<10} {'pdr':>8} {'tx-frac':>8} {'delay-avg':>10} "
              f"{'residual-J':>11}")
    print(header)
    for mac in MAC_NAMES:
        agg = results[mac]
        pdr = agg["pdr"]
        txf = agg["transmitted_fraction"]
        dly = agg["delay_avg"]
        res = agg["residual_j"]
        print(f"{mac:<10} "
              f"{pdr if pdr is None else format(pdr, '.4f'):>8} "
              f"{txf if txf is None else format(txf, '.4f'):>8} "
              f"{dly if dly is None else format(dly, '.4f'):>10} "
              f"{res if res is None else format(res, '.1f'):>11}")
    print(f"artifacts: {out_dir}")
    return 0


def cmd_validate(args):
    try:
        load_scenario(args.scenario)
    except (ValueError, OSError) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1
    print("ok")
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"run": cmd_run, "compare": cmd_compare,
                "validate": cmd_validate}
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
