#!/usr/bin/env python3
"""Plots relay_ra output.

    plot_results.py hist  gap.csv.hist.csv  gap.png
    plot_results.py sweep sweep.csv         sweep.png
"""

import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def plot_hist(src, dst):
    h = pd.read_csv(src)
    centers = 0.5 * (h.lo_db + h.hi_db)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(centers, h.density, width=h.hi_db - h.lo_db, edgecolor="k")
    ax.set_xlabel("10 log10(delta)  [dB]")
    ax.set_ylabel("density per dB")
    fig.tight_layout()
    fig.savefig(dst, dpi=150)


def plot_sweep(src, dst):
    s = pd.read_csv(src)
    fig, (a, b) = plt.subplots(1, 2, figsize=(11, 4))
    for proto, g in s.groupby("protocol", sort=False):
        a.plot(g.d_km, g.mean_wsr, marker="o", label=proto)
        b.plot(g.d_km, g.mean_n_sp_over_k, marker="o", label=proto)
    a.set_xlabel("d [km]")
    a.set_ylabel("mean WSR [bits/OFDM symbol]")
    b.set_xlabel("d [km]")
    b.set_ylabel("mean N_sp / K")
    a.legend()
    fig.tight_layout()
    fig.savefig(dst, dpi=150)


if __name__ == "__main__":
    if len(sys.argv) != 4 or sys.argv[1] not in ("hist", "sweep"):
        sys.exit(__doc__)
    (plot_hist if sys.argv[1] == "hist" else plot_sweep)(sys.argv[2], sys.argv[3])
