#!/usr/bin/env python3
"""Render the three-curve phase diagram from polarfermi CSV output.

Reads a `curves` CSV (columns kind, t, dmu_over_tc, T_over_tc, with
'#'-prefixed metadata lines), optionally a `phase` CSV for decision
markers, and writes a figure in the (dmu/T_c, T/T_c) plane with the
regions between the curves labeled I through IV.  Display only: nothing
is recomputed here.
"""

import argparse
import math
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

EULER_GAMMA = float(np.euler_gamma)
INTERCEPT = math.pi / 2.0 * math.exp(-EULER_GAMMA)

CURVE_COLUMNS = ["kind", "t", "dmu_over_tc", "T_over_tc"]
PHASE_COLUMNS = ["delta_mu", "T", "label", "F_normal", "F_best"]
KNOWN_KINDS = ("i", "g", "o")          # inner to outer
KIND_STYLE = {"i": ("tab:blue", "solid"),
              "g": ("tab:green", "dashed"),
              "o": ("tab:red", "dashdot")}
REGION_FILL = {"I": "#c6dbef", "II": "#c7e9c0", "III": "#fdd0a2",
               "IV": "#f0f0f0"}
PHASE_MARKER = {"superfluid": ("o", "tab:blue"),
                "normal": ("x", "tab:gray"),
                "normal-with-metastable-solutions": ("s", "tab:orange")}

FIGSIZE = (6.4, 4.8)
FONTSIZE = 11


class SchemaError(ValueError):
    pass


def read_table(path, columns):
    """Parse the CLI CSV dialect: metadata dict plus list of row dicts."""
    meta, header, rows = {}, None, []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                if "=" in body:
                    key, val = body.split("=", 1)
                    meta[key.strip()] = val.strip()
                continue
            fields = line.split(",")
            if header is None:
                header = fields
                if header != columns:
                    raise SchemaError(
                        f"{path}: expected columns {columns}, got {header}")
                continue
            if len(fields) != len(columns):
                raise SchemaError(f"{path}:{lineno}: wrong field count")
            rows.append(dict(zip(columns, fields)))
    if header is None:
        raise SchemaError(f"{path}: no header row found")
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return meta, rows


def load_curves(path):
    """Curve points grouped by kind, coordinates validated."""
    meta, rows = read_table(path, CURVE_COLUMNS)
    curves = {}
    for row in rows:
        kind = row["kind"]
        if kind not in KNOWN_KINDS:
            raise SchemaError(f"{path}: unknown curve kind {kind!r}")
        try:
            t = float(row["t"])
            x = float(row["dmu_over_tc"])
            y = float(row["T_over_tc"])
        except ValueError:
            raise SchemaError(f"{path}: non-numeric coordinate in {row}")
        if not (math.isfinite(t) and math.isfinite(x) and math.isfinite(y)):
            raise SchemaError(f"{path}: non-finite coordinate in {row}")
        if t < 0 or x < 0 or y < 0:
            raise SchemaError(f"{path}: negative coordinate in {row}")
        curves.setdefault(kind, []).append((t, x, y))
    for kind in curves:
        pts = sorted(curves[kind])
        curves[kind] = tuple(np.array(col) for col in zip(*pts))
    return meta, curves


def _x_at(curve, y_grid):
    """dmu/T_c as a function of T/T_c along one curve (piecewise linear)."""
    _, x, y = curve
    order = np.argsort(y)
    return np.interp(y_grid, y[order], x[order])


def _shade_regions(ax, curves, x_max):
    """Fill and label the bands between consecutive curves."""
    y_lo = max(float(np.min(curves[k][2])) for k in KNOWN_KINDS)
    y_grid = np.linspace(y_lo, 1.0, 200)
    bounds = [np.zeros_like(y_grid)]
    for kind in KNOWN_KINDS:
        bounds.append(_x_at(curves[kind], y_grid))
    bounds.append(np.full_like(y_grid, x_max))
    names = ["I", "II", "III", "IV"]
    for name, left, right in zip(names, bounds[:-1], bounds[1:]):
        ax.fill_betweenx(y_grid, left, np.maximum(left, right),
                         color=REGION_FILL[name], alpha=0.6, linewidth=0)
        width = right - left
        k = int(np.argmax(width))
        x_lab = 0.5 * (left[k] + right[k])
        ax.text(x_lab, y_grid[k], name, fontsize=FONTSIZE + 2,
                ha="center", va="center")


def _overlay_phase(ax, phase_rows, t_c):
    pts = {}
    for row in phase_rows:
        label = row["label"]
        if label not in PHASE_MARKER:
            raise SchemaError(f"unknown phase label {label!r}")
        try:
            x = float(row["delta_mu"]) / t_c
            y = float(row["T"]) / t_c
        except ValueError:
            raise SchemaError(f"non-numeric phase point {row}")
        pts.setdefault(label, []).append((x, y))
    for label, xy in pts.items():
        marker, color = PHASE_MARKER[label]
        xs, ys = zip(*xy)
        ax.scatter(xs, ys, marker=marker, color=color, s=24, zorder=5,
                   label=label)


def render(curves, phase_rows=None, t_c=None):
    """Build the figure; returns the matplotlib Figure."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    x_max = 1.1 * max(float(np.max(c[1])) for c in curves.values())
    x_max = max(x_max, 1.05 * INTERCEPT)

    if all(k in curves for k in KNOWN_KINDS):
        _shade_regions(ax, curves, x_max)

    for kind in KNOWN_KINDS:
        if kind not in curves:
            continue
        _, x, y = curves[kind]
        color, style = KIND_STYLE[kind]
        ax.plot(x, y, color=color, linestyle=style, linewidth=1.6,
                label=f"$T^{{\\mathrm{{{kind}}}}}$")

    ax.plot([0.0], [1.0], marker="o", color="black", markersize=4)
    ax.axvline(INTERCEPT, color="black", linewidth=0.7, linestyle="dotted")
    ax.annotate(f"{INTERCEPT:.3f}", (INTERCEPT, 0.02), fontsize=FONTSIZE - 2,
                ha="left")

    if phase_rows:
        _overlay_phase(ax, phase_rows, t_c)

    ax.set_xlim(0.0, x_max)
    ax.set_ylim(0.0, 1.12)
    ax.set_xlabel(r"$\delta_\mu / T_c$", fontsize=FONTSIZE)
    ax.set_ylabel(r"$T / T_c$", fontsize=FONTSIZE)
    ax.legend(loc="upper right", fontsize=FONTSIZE - 2)
    fig.tight_layout()
    return fig


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="Render the polarfermi phase diagram from curve CSVs")
    parser.add_argument("curves", help="curves CSV from the polarfermi CLI")
    parser.add_argument("--phase", help="optional phase CSV for markers")
    parser.add_argument("--out", required=True,
                        help="output image (.png, .svg or .pdf)")
    args = parser.parse_args(argv)

    if not args.out.endswith((".png", ".svg", ".pdf")):
        print("error: --out must end in .png, .svg or .pdf", file=sys.stderr)
        return 2
    try:
        meta, curves = load_curves(args.curves)
        phase_rows, t_c = None, None
        if args.phase:
            if "T_c" not in meta:
                raise SchemaError("curves metadata lacks T_c; cannot scale "
                                  "phase points")
            t_c = float(meta["T_c"])
            _, phase_rows = read_table(args.phase, PHASE_COLUMNS)
        fig = render(curves, phase_rows, t_c)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    fig.savefig(args.out)
    plt.close(fig)
    return 0


if __name__ == "__main__":
    sys.exit(main())
