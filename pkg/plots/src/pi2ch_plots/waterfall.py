"""Space-time heatmaps of the velocity and density fields from snapshots.csv."""

from __future__ import annotations

import sys

import matplotlib.pyplot as plt
import numpy as np

from .io import BadInputError, load_table, run_script

REQUIRED = ["t", "x", "u", "r"]


def render(input_path: str, output_path: str) -> None:
    df = load_table(input_path, REQUIRED)
    times = np.sort(df["t"].unique())
    xs = np.sort(df["x"].unique())
    if len(times) < 1 or len(xs) < 2:
        raise BadInputError(f"{input_path}: not enough snapshot rows to grid")
    pivot_u = df.pivot_table(index="t", columns="x", values="u").to_numpy()
    pivot_r = df.pivot_table(index="t", columns="x", values="r").to_numpy()

    fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    extent = (xs[0], xs[-1], times[0], times[-1])
    for ax, data, label in ((axes[0], pivot_u, "u"), (axes[1], pivot_r, "r")):
        im = ax.imshow(
            data, origin="lower", aspect="auto", extent=extent, cmap="RdBu_r"
        )
        ax.set_xlabel("x")
        ax.set_title(label)
        fig.colorbar(im, ax=ax)
    axes[0].set_ylabel("t")
    fig.tight_layout()
    fig.savefig(output_path)
    plt.close(fig)


def main() -> int:
    return run_script("Space-time waterfall of u and r", render)


if __name__ == "__main__":
    sys.exit(main())
