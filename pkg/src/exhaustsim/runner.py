"""Multi-seed execution and deterministic on-disk artifacts."""

import csv
import dataclasses
import json
import math
import os

from .engine import Simulation

DEFAULT_SEEDS = tuple(range(1, 11))


def _jsonable(value):
    """json.dump would emit non-standard 'Infinity'; map it to a marker."""
    if isinstance(value, float) and math.isinf(value):
        return "unbounded"
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_packets_csv(path, metrics):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["packet_id", "send_time", "outcome", "recv_time",
                         "delay", "hops", "drop_reason", "drop_time"])
        for rec in metrics.iter_records():
            writer.writerow([
                rec.packet_id,
                f"{rec.send_time:.6f}",
                rec.outcome,
                "" if rec.recv_time is None else f"{rec.recv_time:.6f}",
                "" if rec.delay is None else f"{rec.delay:.6f}",
                rec.hops,
                rec.drop_reason or "",
                "" if rec.drop_time is None else f"{rec.drop_time:.6f}",
            ])


def write_energy_csv(path, sim):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["vehicle", "time", "residual_j"])
        for nid in sim.vehicle_ids:
            for t, residual in sim.nodes[nid].energy.series:
                writer.writerow([nid, f"{t:.6f}", f"{residual:.9f}"])


def run_one(scenario, seed, out_dir=None, trace=False):
    """Run one (scenario, seed) pair; returns (Simulation, summary dict).

    When `out_dir` is given, writes summary.json, packets.csv, energy.csv
    and, with trace=True, trace.log under {out_dir}/{mac}/seed-{seed}/.
    """
    run_dir = None
    trace_fh = None
    trace_fn = None
    if out_dir is not None:
        run_dir = os.path.join(out_dir, scenario.mac, f"seed-{seed}")
        os.makedirs(run_dir, exist_ok=True)
        if trace:
            trace_fh = open(os.path.join(run_dir, "trace.log"), "w")

            def trace_fn(t, node, layer, event, detail):
                trace_fh.write(f"{t:.6f} n{node} {layer} {event} {detail}\n")

    try:
        sim = Simulation(scenario, seed, trace=trace_fn)
        summary = sim.run()
    finally:
        if trace_fh is not None:
            trace_fh.close()

    if run_dir is not None:
        write_json(os.path.join(run_dir, "summary.json"), summary)
        write_packets_csv(os.path.join(run_dir, "packets.csv"), sim.metrics)
        write_energy_csv(os.path.join(run_dir, "energy.csv"), sim)
    return sim, summary


def _mean(values):
    values = [v for v in values if v is not None]
    if not values:
        return None
    return sum(values) / len(values)


def aggregate(summaries):
    """Seed-averaged statistics for one (scenario, mac) batch."""
    packets = [s["packets"] for s in summaries]
    energies = []
    for s in summaries:
        for vid in sorted(s["energy"]):
            energies.append(s["energy"][vid])
    return {
        "mac": summaries[0]["mac"],
        "scenario": summaries[0]["scenario"],
        "seeds": [s["seed"] for s in summaries],
        "pdr": _mean([p["pdr"] for p in packets]),
        "transmitted_fraction": _mean(
            [p["transmitted_fraction"] for p in packets]),
        "delay_avg": _mean([p["delay_avg"] for p in packets]),
        "delay_max": _mean([p["delay_max"] for p in packets]),
        "generated": _mean([p["generated"] for p in packets]),
        "received": _mean([p["received"] for p in packets]),
        "collisions": _mean([s["collisions"] for s in summaries]),
        "residual_j": _mean([e["residual_j"] for e in energies]),
        "projected_lifetime_s": _mean(
            [e["projected_lifetime_s"] for e in energies
             if not math.isinf(e["projected_lifetime_s"])]),
    }


def run_batch(scenario, seeds=DEFAULT_SEEDS, out_dir=None, trace=False):
    """Run one MAC across several seeds; returns (summaries, aggregate)."""
    summaries = []
    for seed in seeds:
        _, summary = run_one(scenario, seed, out_dir=out_dir, trace=trace)
        summaries.append(summary)
    agg = aggregate(summaries)
    if out_dir is not None:
        write_json(os.path.join(out_dir, scenario.mac, "aggregate.json"), agg)
    return summaries, agg


def run_comparison(scenario, seeds=DEFAULT_SEEDS, out_dir=None, trace=False):
    """Run all four MACs over the same seeds; returns {mac: aggregate}."""
    from .mac import MAC_NAMES

    results = {}
    for mac in MAC_NAMES:
        variant = dataclasses.replace(scenario, mac=mac)
        _, agg = run_batch(variant, seeds=seeds, out_dir=out_dir, trace=trace)
        results[mac] = agg
    if out_dir is not None:
        write_json(os.path.join(out_dir, "comparison.json"), results)
    return results
