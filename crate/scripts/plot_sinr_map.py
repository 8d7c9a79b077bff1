"""SINR map from sinr_map.csv, with cells from map_cells.csv if present.

usage: python scripts/plot_sinr_map.py out/map [sinr_map.png]
"""
import csv
import os
import sys

import matplotlib.pyplot as plt
import numpy as np


def main():
    d = sys.argv[1]
    dst = sys.argv[2] if len(sys.argv) > 2 else "sinr_map.png"
    with open(os.path.join(d, "sinr_map.csv"), newline="") as f:
        rows = [(float(r["x_m"]), float(r["y_m"]), float(r["sinr_db"])) for r in csv.DictReader(f)]
    xs = sorted({r[0] for r in rows})
    ys = sorted({r[1] for r in rows})
    grid = np.full((len(ys), len(xs)), np.nan)
    xi = {x: i for i, x in enumerate(xs)}
    yi = {y: i for i, y in enumerate(ys)}
    for x, y, v in rows:
        grid[yi[y], xi[x]] = v

    fig, ax = plt.subplots(figsize=(7, 6))
    im = ax.imshow(grid, origin="lower", extent=(xs[0], xs[-1], ys[0], ys[-1]), cmap="viridis", vmin=-10, vmax=30)
    fig.colorbar(im, ax=ax, label="SINR [dB]")
    cells = os.path.join(d, "map_cells.csv")
    if os.path.exists(cells):
        with open(cells, newline="") as f:
            pts = list(csv.DictReader(f))
        for kind, marker in (("macro", "^"), ("pico", ".")):
            p = [r for r in pts if r["cell_kind"] == kind]
            ax.scatter([float(r["x_m"]) for r in p], [float(r["y_m"]) for r in p], marker=marker, c="w", s=12)
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    fig.tight_layout()
    fig.savefig(dst, dpi=150)


if __name__ == "__main__":
    main()
