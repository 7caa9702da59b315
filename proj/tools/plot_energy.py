#!/usr/bin/env python3
"""Plot ensemble energy statistics from one or more stats.csv files.

Each input contributes two curves: the instantaneous mean energy (thin)
and its running time average (thick). The time average is the quantity
expected to level off once injection and dissipation balance.
"""

import argparse
import csv
import pathlib
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_stats(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise SystemExit(f"{path}: no data rows")
    t = [float(r["t"]) for r in rows]
    mean = [float(r["mean_energy"]) for r in rows]
    avg = [float(r["time_avg_energy"]) for r in rows]
    return t, mean, avg


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("stats", nargs="+", type=pathlib.Path,
                        help="stats.csv files produced by `flume run`")
    parser.add_argument("--out", type=pathlib.Path, default=pathlib.Path("energy.png"),
                        help="output image (default: energy.png)")
    parser.add_argument("--log", action="store_true", help="log scale on the energy axis")
    args = parser.parse_args(argv)

    fig, ax = plt.subplots(figsize=(7.5, 4.5))
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    for i, path in enumerate(args.stats):
        t, mean, avg = read_stats(path)
        label = path.parent.name or path.stem
        color = colors[i % len(colors)]
        ax.plot(t, mean, color=color, linewidth=0.8, alpha=0.45)
        ax.plot(t, avg, color=color, linewidth=2.0, label=label)

    ax.set_xlabel("t")
    ax.set_ylabel("energy")
    if args.log:
        ax.set_yscale("log")
    ax.legend(loc="best", fontsize="small")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
