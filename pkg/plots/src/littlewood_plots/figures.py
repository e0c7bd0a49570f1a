"""Render figures from littlewood sweep CSVs (schema v1).

Every plotted number originates in the CSV; nothing is recomputed here
except the analytic rotation profile

    f(r) = 1 / (1/6 + 8 (|r| - 1/4)^2)   on (-1/2, 1/2], period 1,

which is re-evaluated for the overlay curve and spot-checked against the
CSV's f_r column (any discrepancy above 1e-9 is a hard error).

Rendering is deterministic: fixed svg hash salt, no embedded timestamps,
so output files are diffable.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "littlewood-plots"

import matplotlib.pyplot as plt
import numpy as np

SCHEMA_ID = "v1"
REQUIRED_COLUMNS = {
    "schema_id", "theorem", "n", "completion", "seed",
    "r_num", "r_den", "F", "f_r",
}
FIGURE_KINDS = ("rotation_profile", "convergence", "histogram")

# Completion labels highlighted with markers in histograms.
NAMED_COMPLETIONS = ("all_ones", "minus_one", "jacobi_product", "two_prime")

OVERLAY_TOLERANCE = 1e-9


class FigureError(ValueError):
    """The CSV cannot back the requested figure (missing columns, no data...)."""


@dataclass(frozen=True)
class FigureSpec:
    csv_path: str | Path
    figure_kind: str
    output_path: str | Path
    title: str = ""

    def __post_init__(self):
        if self.figure_kind not in FIGURE_KINDS:
            raise FigureError(
                f"unknown figure kind {self.figure_kind!r}; expected one of {FIGURE_KINDS}"
            )


def profile_value(r: Fraction) -> float:
    """The asymptotic merit-factor profile, exact rational arithmetic inside."""
    r = Fraction(r)
    r -= math.floor(r + Fraction(1, 2))
    if r == Fraction(-1, 2):
        r = Fraction(1, 2)
    return float(1 / (Fraction(1, 6) + 8 * (abs(r) - Fraction(1, 4)) ** 2))


def profile_curve(lo: float, hi: float, points: int = 801):
    """Dense (r, f(r)) sampling for the overlay; always includes +-1/4 if in range."""
    rs = sorted(set(np.linspace(lo, hi, points).tolist()) | (
        {0.25} if lo <= 0.25 <= hi else set()
    ) | ({-0.25} if lo <= -0.25 <= hi else set()))
    return np.array(rs), np.array([profile_value(Fraction(r).limit_denominator(10**9)) for r in rs])


def load_rows(csv_path) -> list[dict]:
    """Read and validate a schema-v1 CSV; unknown columns are ignored."""
    path = Path(csv_path)
    if not path.exists():
        raise FigureError(f"no such CSV: {path}")
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise FigureError(f"{path} is empty (no header row)")
        missing = REQUIRED_COLUMNS - set(reader.fieldnames)
        if missing:
            raise FigureError(f"{path} lacks required columns: {sorted(missing)}")
        rows = list(reader)
    if not rows:
        raise FigureError(f"{path} has a header but no data rows")
    bad = {row["schema_id"] for row in rows} - {SCHEMA_ID}
    if bad:
        raise FigureError(f"unsupported schema ids {sorted(bad)}; this reader wants {SCHEMA_ID}")
    return rows


def _rational(row) -> Fraction:
    return Fraction(int(row["r_num"]), int(row["r_den"]))


def _check_overlay_column(rows) -> float:
    """Spot-check the CSV's f_r values against the re-evaluated profile."""
    worst = 0.0
    for row in rows:
        if not row["f_r"]:
            continue
        worst = max(worst, abs(float(row["f_r"]) - profile_value(_rational(row))))
    if worst >= OVERLAY_TOLERANCE:
        raise FigureError(
            f"CSV f_r column disagrees with the analytic profile by {worst:.3e}"
        )
    return worst


def _finish(fig, spec: FigureSpec) -> Path:
    out = Path(spec.output_path)
    if not out.suffix:
        out = out.with_suffix(".svg")
    fig.tight_layout()
    fig.savefig(out, metadata={"Date": None} if out.suffix == ".svg" else None)
    plt.close(fig)
    return out


def plot_rotation_profile(spec: FigureSpec) -> Path:
    """Scatter of F against r with the analytic f(r) curve overlaid."""
    rows = [row for row in load_rows(spec.csv_path) if row["F"] and row["f_r"]]
    if not rows:
        raise FigureError("no rows with both F and f_r values")
    _check_overlay_column(rows)
    by_n: dict[int, list[dict]] = {}
    for row in rows:
        by_n.setdefault(int(row["n"]), []).append(row)
    if not any(len({(r["r_num"], r["r_den"]) for r in group}) >= 2
               for group in by_n.values()):
        raise FigureError("rotation profile needs >= 2 distinct r values for one n")

    fig, ax = plt.subplots(figsize=(7, 4.5))
    r_values = [float(_rational(row)) for row in rows]
    lo, hi = min(r_values), max(r_values)
    curve_r, curve_f = profile_curve(lo, hi)
    ax.plot(curve_r, curve_f, lw=1.5, color="0.3", label="f(r)", zorder=1)
    for n, group in sorted(by_n.items()):
        ax.scatter(
            [float(_rational(row)) for row in group],
            [float(row["F"]) for row in group],
            s=14, zorder=2, label=f"n={n}",
        )
    ax.set_xlabel("rotation r")
    ax.set_ylabel("merit factor F")
    ax.set_title(spec.title or "Merit factor against rotation")
    ax.legend(loc="best", fontsize=8)
    return _finish(fig, spec)


def plot_convergence(spec: FigureSpec) -> Path:
    """|1/F - 1/f(r)| against n on log-log axes, at one fixed rotation."""
    rows = [row for row in load_rows(spec.csv_path) if row["F"] and row["f_r"]]
    if not rows:
        raise FigureError("no rows with both F and f_r values")
    _check_overlay_column(rows)
    rationals = {(row["r_num"], row["r_den"]) for row in rows}
    if len(rationals) != 1:
        raise FigureError(
            f"convergence figure needs one fixed r, found {sorted(rationals)}"
        )
    seen: dict[int, dict] = {}
    for row in rows:
        n = int(row["n"])
        if n in seen:
            raise FigureError(f"convergence figure needs one row per n; n={n} repeats")
        seen[n] = row
    if len(seen) == 1:
        warnings.warn("single-n CSV: degenerate one-point convergence plot")
    r = _rational(rows[0])
    ns = sorted(seen)
    gaps = [abs(1 / float(seen[n]["F"]) - 1 / float(seen[n]["f_r"])) for n in ns]

    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.loglog(ns, gaps, marker="o")
    ax.set_xlabel("n")
    ax.set_ylabel(f"|1/F - 1/f({r.numerator}/{r.denominator})|")
    ax.set_title(spec.title or f"Convergence at r = {r.numerator}/{r.denominator}")
    ax.grid(True, which="both", lw=0.3, alpha=0.5)
    return _finish(fig, spec)


def plot_histogram(spec: FigureSpec) -> Path:
    """Histogram of F over all enumerated completions, named ones marked."""
    rows = load_rows(spec.csv_path)
    enum_rows = [row for row in rows if row["completion"] == "enum" and row["F"]]
    if not enum_rows:
        raise FigureError("histogram needs an exhaustive CSV with 'enum' rows")
    _check_overlay_column(rows)
    cells = {(row["n"], row["r_num"], row["r_den"]) for row in enum_rows}
    if len(cells) != 1:
        raise FigureError(
            f"histogram needs a single (n, r) cell, found {sorted(cells)}"
        )
    n = int(enum_rows[0]["n"])
    r = _rational(enum_rows[0])
    merits = np.array([float(row["F"]) for row in enum_rows])

    fig, ax = plt.subplots(figsize=(7, 4.5))
    bins = min(60, max(2, int(np.sqrt(merits.size) * 2)))
    ax.hist(merits, bins=bins, color="#4878a8", edgecolor="white")
    top = ax.get_ylim()[1]
    for label in NAMED_COMPLETIONS:
        match = [
            row for row in rows
            if row["completion"] == label
            and (row["n"], row["r_num"], row["r_den"]) == next(iter(cells))
        ]
        if match:
            f_val = float(match[0]["F"])
            ax.axvline(f_val, color="#a83838", lw=1.0, ls="--")
            ax.annotate(
                label, (f_val, top * 0.95), rotation=90,
                fontsize=7, ha="right", va="top",
            )
    ax.set_xlabel("merit factor F")
    ax.set_ylabel("completions")
    ax.set_title(
        spec.title
        or f"F over all {merits.size} completions, n={n}, r={r.numerator}/{r.denominator}"
    )
    return _finish(fig, spec)


RENDERERS = {
    "rotation_profile": plot_rotation_profile,
    "convergence": plot_convergence,
    "histogram": plot_histogram,
}


def render(spec: FigureSpec) -> Path:
    return RENDERERS[spec.figure_kind](spec)
