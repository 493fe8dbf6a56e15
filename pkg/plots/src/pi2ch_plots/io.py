"""Shared CSV loading with named-column validation."""

from __future__ import annotations

import argparse
import sys

import matplotlib
import pandas as pd

matplotlib.use("Agg")


class BadInputError(ValueError):
    pass


def load_table(path: str, required: list[str]) -> pd.DataFrame:
    try:
        df = pd.read_csv(path)
    except FileNotFoundError as exc:
        raise BadInputError(f"input file not found: {path}") from exc
    except pd.errors.EmptyDataError as exc:
        raise BadInputError(f"{path}: file is empty, no header row") from exc
    missing = [c for c in required if c not in df.columns]
    if missing:
        raise BadInputError(f"{path}: missing columns: {', '.join(missing)}")
    if len(df) == 0:
        raise BadInputError(f"{path}: no data rows below the header")
    return df


def script_args(description: str, multi_input: bool = False) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description=description)
    if multi_input:
        parser.add_argument(
            "--in", dest="inputs", action="append", required=True,
            help="input CSV path (repeatable to overlay runs)",
        )
    else:
        parser.add_argument("--in", dest="input", required=True, help="input CSV path")
    parser.add_argument(
        "--out", dest="output", required=True,
        help="output image path (.png or .svg)",
    )
    return parser.parse_args()


def run_script(description: str, render, multi_input: bool = False) -> int:
    """Parse --in/--out, render, and convert input problems to exit code 1."""
    args = script_args(description, multi_input)
    try:
        if multi_input:
            render(args.inputs, args.output)
        else:
            render(args.input, args.output)
    except BadInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0
