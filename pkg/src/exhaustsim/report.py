"""Comparison tables and figures rendered from run artifacts."""

import csv
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .mac import MAC_NAMES

_COLORS = {"802.11": "#1f77b4", "802.15.4": "#ff7f0e",
           "smac": "#2ca02c", "tdma": "#d62728"}


def write_comparison_csv(path, results):
    """One row per MAC with the seed-averaged headline metrics."""
    fields = ["mac", "pdr", "transmitted_fraction", "delay_avg", "delay_max",
              "received", "generated", "collisions", "residual_j",
              "projected_lifetime_s"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(fields)
        for mac in MAC_NAMES:
            agg = results.get(mac)
            if agg is None:
                continue
            row = []
            for field in fields:
                value = agg.get(field)
                if isinstance(value, float):
                    row.append(f"{value:.6f}")
                elif value is None:
                    row.append("")
                else:
                    row.append(value)
            writer.writerow(row)


def _bar(ax, results, key, title, ylabel):
    macs = [m for m in MAC_NAMES if results.get(m, {}).get(key) is not None]
    values = [results[m][key] for m in macs]
    ax.bar(macs, values, color=[_COLORS[m] for m in macs])
    ax.set_title(title)
    ax.set_ylabel(ylabel)
    ax.grid(axis="y", alpha=0.3)


def render_comparison_figures(out_dir, results):
    """Bar charts of PDR, mean delay, and residual energy; returns paths."""
    paths = []

    fig, axes = plt.subplots(1, 3, figsize=(13, 4))
    _bar(axes[0], results, "pdr", "Packet delivery ratio", "PDR")
    _bar(axes[1], results, "delay_avg", "Mean end-to-end delay", "seconds")
    _bar(axes[2], results, "residual_j", "Vehicle residual energy", "joules")
    fig.tight_layout()
    path = os.path.join(out_dir, "comparison.png")
    fig.savefig(path, dpi=130)
    plt.close(fig)
    paths.append(path)
    return paths


def render_energy_timeline(out_dir, series_by_mac):
    """Residual-energy-over-time lines, one per MAC; returns the path."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for mac in MAC_NAMES:
        series = series_by_mac.get(mac)
        if not series:
            continue
        times = [t for t, _ in series]
        residuals = [r for _, r in series]
        ax.plot(times, residuals, label=mac, color=_COLORS[mac])
    ax.set_xlabel("time (s)")
    ax.set_ylabel("residual energy (J)")
    ax.set_title("Vehicle battery over one run")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    path = os.path.join(out_dir, "energy_timeline.png")
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path
