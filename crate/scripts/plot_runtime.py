"""Runtime vs pico density from runtime.csv.

usage: python scripts/plot_runtime.py out/sweep/runtime.csv [runtime.png]
"""
import csv
import sys

import matplotlib.pyplot as plt


def main():
    src = sys.argv[1]
    dst = sys.argv[2] if len(sys.argv) > 2 else "runtime.png"
    with open(src, newline="") as f:
        rows = list(csv.DictReader(f))
    x = [int(r["picos_per_sector"]) for r in rows]
    y = [float(r["wallclock_s"]) for r in rows]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(x, y, "o-")
    ax.set_xlabel("picos per macro sector")
    ax.set_ylabel("wall-clock per drop [s]")
    ax.set_ylim(bottom=0)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(dst, dpi=150)


if __name__ == "__main__":
    main()
