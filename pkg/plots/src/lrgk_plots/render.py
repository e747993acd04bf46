"""Render benchmark figures from flat trial CSV files.

Input is the documented report.csv schema (one row per trial-setting).
Three figure kinds:

  sigma  : relative spectral error vs kernel bandwidth, log y
  k      : relative spectral error vs target rank, log y, with the best
           rank-K and rank-(K+r) oracle baselines overlaid
  timing : per-stage wall clock vs whichever of K / N varies, log-log,
           with a slope-1 reference guide

Every curve is a per-setting mean with a min/max shaded band across
trials; plotted values are taken from the CSV verbatim (no rescaling or
reordering).  Rendering is deterministic: identical input bytes produce
identical PNG bytes.
"""

import csv
import math
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


class PlotsError(Exception):
    """Base error for the figure tool."""


class SchemaMismatch(PlotsError):
    """Input CSV lacks required columns for the requested figure kind."""


class EmptyInput(PlotsError):
    """No usable data rows after parsing."""


KINDS = ("sigma", "k", "timing")

REQUIRED_COLUMNS = {
    "sigma": ("setting", "sigma", "trial", "rel_err"),
    "k": ("setting", "k", "trial", "rel_err", "best_rank_k_err", "best_rank_kr_err"),
    "timing": ("setting", "n", "k", "trial", "t_lambda", "t_chi_filter", "t_h_filter", "t_total"),
}

TIMING_STAGES = (
    ("t_lambda", "eigenvalue search"),
    ("t_filter", "filtering"),
    ("t_total", "total"),
)

_RC = {
    "figure.figsize": (6.0, 4.2),
    "figure.dpi": 110,
    "savefig.dpi": 110,
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "lrgk-plots",
}


@dataclass(frozen=True)
class FigureSpec:
    """What to render: input CSVs, figure kind, axis scales, output path."""

    inputs: tuple
    kind: str
    out: str
    log_x: bool = None  # kind default when None
    log_y: bool = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaMismatch(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")
        paths = (self.inputs,) if isinstance(self.inputs, str) else tuple(self.inputs)
        if not paths:
            raise EmptyInput("no input CSV files given")
        object.__setattr__(self, "inputs", paths)


def _parse_cell(text):
    try:
        return float(text)
    except ValueError:
        return text


def load_table(path, required):
    """Rows as dicts with numeric cells parsed; validates the schema."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [col for col in required if col not in header]
        if missing:
            raise SchemaMismatch(f"{path}: missing column(s) {', '.join(missing)}")
        rows = [{k: _parse_cell(v) for k, v in row.items()} for row in reader]
    return rows


def _gather(spec):
    rows = []
    for path in spec.inputs:
        rows.extend(load_table(path, REQUIRED_COLUMNS[spec.kind]))
    if not rows:
        raise EmptyInput(f"{', '.join(spec.inputs)}: no data rows")
    return rows


def _series(rows, x_col, y_col):
    """Per-setting (x, mean, min, max) across trials, ordered by x."""
    groups = {}
    for row in rows:
        y = row[y_col]
        if not isinstance(y, float) or math.isnan(y):
            continue
        groups.setdefault((row["setting"], row[x_col]), []).append(y)
    pts = sorted((x, vals) for (_, x), vals in groups.items())
    if not pts:
        raise EmptyInput(f"column {y_col!r} holds no finite values")
    xs = np.array([x for x, _ in pts])
    mean = np.array([np.mean(v) for _, v in pts])
    lo = np.array([np.min(v) for _, v in pts])
    hi = np.array([np.max(v) for _, v in pts])
    return xs, mean, lo, hi


def _band(ax, xs, mean, lo, hi, label, color):
    # mean plus explicit min/max edge curves, with the band shaded between
    ax.plot(xs, mean, marker="o", markersize=3.5, label=label, color=color)
    ax.plot(xs, lo, linewidth=0.7, alpha=0.5, color=color)
    ax.plot(xs, hi, linewidth=0.7, alpha=0.5, color=color)
    ax.fill_between(xs, lo, hi, alpha=0.2, color=color, linewidth=0)


def _timing_x_column(rows):
    # plot against whichever grid dimension actually varies
    ns = {row["n"] for row in rows}
    ks = {row["k"] for row in rows}
    if len(ns) > 1 and len(ks) > 1:
        raise SchemaMismatch("timing figure needs a grid varying in only one of N, K")
    return "n" if len(ns) > 1 else "k"


def build_figure(spec):
    """Assemble the matplotlib figure; `render` saves it to disk."""
    rows = _gather(spec)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]

        if spec.kind == "sigma":
            xs, mean, lo, hi = _series(rows, "sigma", "rel_err")
            _band(ax, xs, mean, lo, hi, "randomized embedding", colors[0])
            ax.set_xlabel("kernel bandwidth sigma")
            ax.set_ylabel("relative spectral error")

        elif spec.kind == "k":
            xs, mean, lo, hi = _series(rows, "k", "rel_err")
            _band(ax, xs, mean, lo, hi, "randomized embedding", colors[0])
            bk_x, bk, _, _ = _series(rows, "k", "best_rank_k_err")
            bkr_x, bkr, _, _ = _series(rows, "k", "best_rank_kr_err")
            ax.plot(bk_x, bk, linestyle="--", label="best rank-K", color=colors[1])
            ax.plot(bkr_x, bkr, linestyle=":", label="best rank-(K+r)", color=colors[2])
            ax.set_xlabel("target rank K")
            ax.set_ylabel("relative spectral error")

        else:  # timing
            x_col = _timing_x_column(rows)
            for row in rows:
                row["t_filter"] = row["t_chi_filter"] + row["t_h_filter"]
            last = None
            for (col, label), color in zip(TIMING_STAGES, colors):
                xs, mean, lo, hi = _series(rows, x_col, col)
                _band(ax, xs, mean, lo, hi, label, color)
                last = (xs, mean)
            xs, mean = last
            if len(xs) > 1 and mean[0] > 0:
                guide = mean[0] * (xs / xs[0])  # slope-1 reference
                ax.plot(xs, guide, linestyle="--", color="gray", label="linear growth")
            ax.set_xlabel("number of nodes N" if x_col == "n" else "target rank K")
            ax.set_ylabel("wall clock [s]")

        log_x = spec.log_x if spec.log_x is not None else spec.kind == "timing"
        log_y = spec.log_y if spec.log_y is not None else True
        if log_x:
            ax.set_xscale("log")
        if log_y:
            ax.set_yscale("log")
        ax.legend(loc="best")
        fig.tight_layout()
    return fig, ax


def render(spec):
    """Render the figure to spec.out (PNG); returns the output path."""
    fig, _ = build_figure(spec)
    try:
        # stripping the date metadata keeps identical inputs byte-identical
        fig.savefig(spec.out, format="png", metadata={"Date": None})
    finally:
        plt.close(fig)
    return spec.out
