"""CSV and standalone SVG writers for traces sharing one time grid."""

from __future__ import annotations

import contextlib
import io
import math
import sys
from xml.sax.saxutils import escape

import numpy as np

SERIES_BLUE = "#1f77b4"
G_ORANGE = "#ff7f0e"
E_RED = "#d62728"
INTEGRAL_GREEN = "#2ca02c"
STEPS_PURPLE = "#9467bd"

COLUMN_ORDER = ("x_series", "x_integral", "x_steps", "g_env", "e_env_plus", "e_env_minus")
COLUMN_STYLE = {
    "x_series": ("X(t) series", SERIES_BLUE),
    "x_integral": ("X(t) integral", INTEGRAL_GREEN),
    "x_steps": ("X(t) steps", STEPS_PURPLE),
    "g_env": ("G(t)", G_ORANGE),
    "e_env_plus": ("E(t) +", E_RED),
    "e_env_minus": ("E(t) -", E_RED),
}
PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)

WIDTH, HEIGHT = 800, 500
_PLOT = (70.0, 20.0, 780.0, 455.0)  # left, top, right, bottom


@contextlib.contextmanager
def _open_text(dest):
    if dest == "-":
        yield sys.stdout
    elif isinstance(dest, io.TextIOBase):
        yield dest
    else:
        with open(dest, "w", newline="") as fh:
            yield fh


def format_value(v: float) -> str:
    return "%.17g" % v


def ordered_columns(columns: dict) -> list:
    """Known columns in canonical order, then any others as given."""
    known = [name for name in COLUMN_ORDER if name in columns]
    return known + [name for name in columns if name not in COLUMN_ORDER]


def write_csv(dest, t, columns: dict, order=None) -> None:
    """Write ``t`` plus named value columns, 17 significant digits, LF rows."""
    names = list(order) if order is not None else ordered_columns(columns)
    t = np.asarray(t, dtype=float)
    arrays = [np.asarray(columns[name], dtype=float) for name in names]
    for name, arr in zip(names, arrays):
        if arr.shape != t.shape:
            raise ValueError(f"column {name} has {arr.size} rows, grid has {t.size}")
    lines = [",".join(["t", *names])]
    for i in range(t.size):
        lines.append(",".join([format_value(t[i]), *(format_value(arr[i]) for arr in arrays)]))
    with _open_text(dest) as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path) -> tuple[list, dict]:
    """Inverse of :func:`write_csv`; returns (header, {column: array})."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    data = {name: np.array([float(row[i]) for row in rows]) for i, name in enumerate(header)}
    return header, data


def _nice_ticks(lo, hi, target=6):
    span = hi - lo
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    step = mag * min((1, 2, 2.5, 5, 10), key=lambda f: abs(f * mag - raw))
    first = math.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(v) < 1e-12 * step else v)
        v += step
    return ticks


def _fmt_tick(v):
    return "%g" % float("%.6g" % v)


def _padded_range(lo, hi):
    if not hi > lo:
        pad = max(abs(lo), 1.0) * 0.5
        return lo - pad, hi + pad
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def write_svg(dest, t, traces, title: str = "") -> None:
    """Standalone 800x500 SVG line plot.

    ``traces`` is a list of (label, values, colour); one polyline per trace
    over its finite samples, with a legend in the same order.
    """
    if not traces:
        raise ValueError("nothing to plot")
    t = np.asarray(t, dtype=float)
    finite_vals = [np.asarray(v, dtype=float)[np.isfinite(v)] for _, v, _ in traces]
    y_all = np.concatenate(finite_vals) if finite_vals else np.zeros(1)
    if y_all.size == 0:
        y_all = np.zeros(1)
    x0, x1 = _padded_range(float(t.min()), float(t.max()))
    y0, y1 = _padded_range(float(y_all.min()), float(y_all.max()))
    left, top, right, bottom = _PLOT

    def sx(v):
        return left + (v - x0) / (x1 - x0) * (right - left)

    def sy(v):
        return bottom - (v - y0) / (y1 - y0) * (bottom - top)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2:.1f}" y="14" font-size="12" text-anchor="middle">{escape(title)}</text>')
    out.append('<g class="axes" stroke="black" stroke-width="1" fill="none">')
    out.append(f'<rect x="{left:.1f}" y="{top:.1f}" width="{right - left:.1f}" height="{bottom - top:.1f}"/>')
    out.append("</g>")
    out.append('<g class="ticks" font-size="10" font-family="sans-serif">')
    for v in _nice_ticks(x0, x1):
        px = sx(v)
        out.append(f'<line x1="{px:.2f}" y1="{bottom:.2f}" x2="{px:.2f}" y2="{bottom + 5:.2f}" stroke="black"/>')
        out.append(f'<text x="{px:.2f}" y="{bottom + 17:.2f}" text-anchor="middle">{_fmt_tick(v)}</text>')
    for v in _nice_ticks(y0, y1):
        py = sy(v)
        out.append(f'<line x1="{left - 5:.2f}" y1="{py:.2f}" x2="{left:.2f}" y2="{py:.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8:.2f}" y="{py + 3:.2f}" text-anchor="end">{_fmt_tick(v)}</text>')
    out.append(f'<text x="{(left + right) / 2:.1f}" y="{HEIGHT - 6}" text-anchor="middle">t</text>')
    out.append("</g>")
    if y0 < 0.0 < y1:
        out.append(
            f'<line x1="{left:.2f}" y1="{sy(0.0):.2f}" x2="{right:.2f}" y2="{sy(0.0):.2f}" '
            'stroke="#999999" stroke-width="0.5"/>'
        )

    for label, values, colour in traces:
        values = np.asarray(values, dtype=float)
        ok = np.isfinite(values)
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(t[ok], values[ok]))
        out.append(
            f'<polyline fill="none" stroke="{colour}" stroke-width="1.2" '
            f'data-label="{escape(label)}" points="{pts}"/>'
        )

    out.append('<g class="legend" font-size="11" font-family="sans-serif">')
    lx, ly = right - 150.0, top + 10.0
    out.append(
        f'<rect x="{lx - 8:.1f}" y="{ly - 8:.1f}" width="150" height="{16 * len(traces) + 6}" '
        'fill="white" stroke="#cccccc"/>'
    )
    for i, (label, _, colour) in enumerate(traces):
        yy = ly + 16 * i
        out.append(f'<line x1="{lx:.1f}" y1="{yy + 4:.1f}" x2="{lx + 20:.1f}" y2="{yy + 4:.1f}" stroke="{colour}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26:.1f}" y="{yy + 8:.1f}">{escape(label)}</text>')
    out.append("</g>")
    out.append("</svg>")
    with _open_text(dest) as fh:
        fh.write("\n".join(out) + "\n")


def column_traces(columns: dict) -> list:
    """(label, values, colour) triples for the known columns in their standard colours."""
    return [(COLUMN_STYLE[n][0], columns[n], COLUMN_STYLE[n][1]) for n in ordered_columns(columns) if n in COLUMN_STYLE]
