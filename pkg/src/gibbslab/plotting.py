"""Figure rendering: deterministic SVG line charts and the report PNGs.

Matplotlib output is pinned down for byte-identical reruns: Agg backend,
fixed hash salt, no date metadata in SVGs.
"""

from __future__ import annotations

import csv
import warnings

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "gibbslab"


class MissingColumnError(ValueError):
    pass


def read_csv_columns(path):
    """Rows of a delimited output file, skipping '#' metadata lines."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if not rows:
        return [], {}
    header = [h.strip() for h in rows[0]]
    table = {h: [] for h in header}
    for row in rows[1:]:
        for h, cell in zip(header, row):
            table[h].append(cell)
    return header, table


def _to_float(cells):
    out = []
    for cell in cells:
        try:
            out.append(float(cell))
        except ValueError:
            out.append(float("nan"))
    return out


def emit_svg(csv_path, columns, out_path, log_y: bool = False):
    """Standalone SVG line chart of the named columns (first is the x axis).

    Non-positive values on a log axis are clamped to a floor a decade below
    the smallest positive value, with a warning annotation on the chart.
    An empty CSV produces an empty-axes SVG and a warning, not an error.
    """
    if len(columns) < 2:
        raise ValueError("need an x column and at least one y column")
    header, table = read_csv_columns(csv_path)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    notes = []
    if not header:
        warnings.warn(f"{csv_path}: no data rows; emitting empty axes")
        notes.append("empty input")
    else:
        missing = [c for c in columns if c not in header]
        if missing:
            plt.close(fig)
            raise MissingColumnError(f"{csv_path}: missing column(s) {', '.join(missing)}")
        x = _to_float(table[columns[0]])
        clamped = 0
        for name in columns[1:]:
            y = _to_float(table[name])
            if log_y:
                positive = [v for v in y if v > 0]
                floor = (min(positive) / 10.0) if positive else 1e-16
                fixed = []
                for v in y:
                    if v <= 0:
                        clamped += 1
                        fixed.append(floor)
                    else:
                        fixed.append(v)
                y = fixed
            ax.plot(x, y, marker="o", markersize=3, linewidth=1.0, label=name)
        if log_y:
            ax.set_yscale("log")
            if clamped:
                warnings.warn(f"{clamped} non-positive value(s) clamped to the axis floor")
                notes.append(f"{clamped} value(s) clamped to axis floor")
        ax.set_xlabel(columns[0])
        ax.legend(loc="best", fontsize=8)
    for i, note in enumerate(notes):
        ax.annotate(note, xy=(0.02, 0.02 + 0.05 * i), xycoords="axes fraction",
                    fontsize=7, color="crimson")
    fig.tight_layout()
    fig.savefig(out_path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return out_path


# ----------------------------------------------------------------------
# report figures for the experiment drivers
# ----------------------------------------------------------------------

def plot_growth_grids(per_pair_rows, out_path):
    """Top row: B and its lower bound vs n (log y); bottom: scaled logs."""
    pairs = list(per_pair_rows.keys())
    fig, axes = plt.subplots(2, len(pairs), figsize=(4.0 * len(pairs), 6.0))
    axes = axes.reshape(2, -1)
    for col, pair in enumerate(pairs):
        rows = per_pair_rows[pair]
        n = [r[0] for r in rows]
        ax = axes[0, col]
        ax.semilogy(n, [r[2] for r in rows], "s-", markersize=3, label="B")
        ax.semilogy(n, [r[3] for r in rows], "o-", markersize=3, label="lower bound")
        ax.set_title(f"alpha={pair[0]:g}, beta={pair[1]:g}", fontsize=9)
        ax.set_xlabel("n")
        ax.legend(fontsize=7)
        ax = axes[1, col]
        ax.plot(n, [r[4] for r in rows], "s-", markersize=3)
        ax.plot(n, [r[5] for r in rows], "o-", markersize=3)
        ax.set_xlabel("n")
        ax.set_ylabel("n^(beta-2) log B")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return out_path


def plot_selection(rows, out_path):
    """Selected degree against m, raw and rescaled, per method/T."""
    fig, axes = plt.subplots(2, 2, figsize=(9.0, 6.5))
    groups = {}
    for method, T, m, n, nsq, nom, kappa in rows:
        groups.setdefault((method, T), []).append((m, n, nsq, nom))
    for (method, T), pts in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1] or 0)):
        label = method if T is None else f"{method} T={T:g}"
        col = 0 if method == "PLS" else 1
        ms = [p[0] for p in pts]
        axes[0, col].plot(ms, [p[1] for p in pts], ".-", markersize=3, label=label)
        scaled = [p[2] for p in pts] if method == "PLS" else [p[3] for p in pts]
        axes[1, col].plot(ms, scaled, ".-", markersize=3, label=label)
    for ax, ylab in zip(axes.ravel(), ["n", "n", "n/sqrt(m)", "n/m"]):
        ax.set_xlabel("m")
        ax.set_ylabel(ylab)
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return out_path


def plot_error_curves(label, rows, out_path):
    """L2 error against m for each method at one test function."""
    fig, ax = plt.subplots(figsize=(5.5, 4.0))
    groups = {}
    for m, method, T, n, err in rows:
        key = method if T is None else f"{method} T={T:g}"
        groups.setdefault(key, []).append((m, err))
    markers = {"PLS": "s", "FE T=1.5": "o", "FE T=2": "x", "FE T=4": "d"}
    for key, pts in sorted(groups.items()):
        ms = [p[0] for p in pts]
        errs = [max(p[1], 1e-18) for p in pts]
        ax.semilogy(ms, errs, marker=markers.get(key, "."), markersize=4,
                    linewidth=1.0, label=key)
    ax.set_xlabel("m")
    ax.set_ylabel("L2 error")
    ax.set_title(label, fontsize=10)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return out_path
