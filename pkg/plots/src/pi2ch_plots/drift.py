"""Log-scale conservation-residual curves from one or more diagnostics.csv
files; overlaying runs at different time steps makes the convergence factor
visible directly."""

from __future__ import annotations

import os
import sys

import matplotlib.pyplot as plt
import numpy as np

from .io import load_table, run_script

REQUIRED = ["t", "energy", "m1_residual", "m2_residual", "mean_r"]
FLOOR = 1e-18


def _curves(df):
    e0 = df["energy"].iloc[0]
    scale = abs(e0) if e0 != 0 else 1.0
    return {
        "energy drift": np.abs(df["energy"].to_numpy() - e0) / scale,
        "m1 residual": df["m1_residual"].to_numpy(),
        "m2 residual": df["m2_residual"].to_numpy(),
        "|mean r|": np.abs(df["mean_r"].to_numpy()),
    }


def render(input_paths: list[str], output_path: str) -> None:
    fig, ax = plt.subplots(figsize=(7.5, 4.5))
    many = len(input_paths) > 1
    for i, path in enumerate(input_paths):
        df = load_table(path, REQUIRED)
        t = df["t"].to_numpy()
        tag = f" [{os.path.splitext(os.path.basename(path))[0]}-{i}]" if many else ""
        style = "-" if i == 0 else "--"
        for label, vals in _curves(df).items():
            ax.semilogy(t, np.maximum(vals, FLOOR), style, label=label + tag)
    ax.set_xlabel("t")
    ax.set_ylabel("residual")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(output_path)
    plt.close(fig)


def main() -> int:
    return run_script("Conservation residual curves", render, multi_input=True)


if __name__ == "__main__":
    sys.exit(main())
