"""Closed-form vs tensor-route curvature scatter and mean-correction histogram
from curvature.csv."""

from __future__ import annotations

import sys

import matplotlib.pyplot as plt

from .io import load_table, run_script

REQUIRED = ["pair_id", "s_closed", "s_direct", "abs_diff", "mu_correction"]


def render(input_path: str, output_path: str) -> None:
    df = load_table(input_path, REQUIRED)
    s_closed = df["s_closed"].to_numpy()
    s_direct = df["s_direct"].to_numpy()
    mu = df["mu_correction"].to_numpy()

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4.5))
    lo = min(s_closed.min(), s_direct.min())
    hi = max(s_closed.max(), s_direct.max())
    pad = 0.05 * (hi - lo) if hi > lo else 1.0
    ax1.plot([lo - pad, hi + pad], [lo - pad, hi + pad], "k--", lw=1, label="y = x")
    ax1.scatter(s_direct, s_closed, s=18, alpha=0.8)
    ax1.set_xlabel("tensor route")
    ax1.set_ylabel("closed form")
    ax1.set_title("sectional curvature")
    ax1.legend(loc="best")

    ax2.hist(mu, bins=max(10, len(mu) // 5), color="tab:orange", alpha=0.85)
    ax2.set_xlabel("mean-correction term")
    ax2.set_ylabel("count")
    ax2.set_title("mu correction distribution")
    fig.tight_layout()
    fig.savefig(output_path)
    plt.close(fig)


def main() -> int:
    return run_script("Curvature scan figures", render)


if __name__ == "__main__":
    sys.exit(main())
