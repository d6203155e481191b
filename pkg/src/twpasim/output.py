"""Deterministic CSV/JSON writers and minimal SVG renderings."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

FLOAT_FMT = "%.12e"


def to_db(gain):
    """10 log10 of a power gain; NaN stays NaN."""
    g = np.asarray(gain, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return 10.0 * np.log10(g)


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return FLOAT_FMT % float(v)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """Write rows with ``%.12e`` floats, integer columns verbatim, LF endings."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def read_csv(path):
    """Parse a CSV written by :func:`write_csv` into (header, float array)."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    data = np.array([[float(v) for v in r] for r in rows[1:]], dtype=float)
    return rows[0], data.reshape(-1, len(rows[0]))


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")
    return path


_W, _H, _M = 640, 400, 50


def _scale(vals, lo_px, hi_px):
    vals = np.asarray(vals, dtype=float)
    finite = vals[np.isfinite(vals)]
    if finite.size == 0:
        return vals, (0.0, 1.0)
    lo, hi = float(finite.min()), float(finite.max())
    if hi == lo:
        hi = lo + 1.0
    return lo_px + (vals - lo) / (hi - lo) * (hi_px - lo_px), (lo, hi)


def write_svg_lines(path, x, curves: dict, xlabel: str = "", ylabel: str = "") -> Path:
    """Polyline plot of one or more curves sharing ``x``; NaNs break the line.

    The plotted data are embedded as an XML comment.
    """
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    xs, (x0, x1) = _scale(x, _M, _W - _M)
    ally = np.concatenate([np.asarray(v, dtype=float) for v in curves.values()])
    _, (y0, y1) = _scale(ally, 0, 1)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}">',
             "<!-- data"]
    names = list(curves)
    parts.append("x," + ",".join(names))
    for n in range(len(xs)):
        parts.append(",".join(_fmt(v) for v in [x[n]] + [curves[c][n] for c in names]))
    parts.append("-->")
    parts.append(f'<rect x="{_M}" y="{_M}" width="{_W - 2 * _M}" height="{_H - 2 * _M}" '
                 'fill="none" stroke="black"/>')
    for c, name in enumerate(names):
        ys = np.asarray(curves[name], dtype=float)
        py = _H - _M - (ys - y0) / (y1 - y0) * (_H - 2 * _M)
        seg = []
        for px, yy in zip(xs, py):
            if math.isfinite(yy):
                seg.append(f"{px:.2f},{yy:.2f}")
            elif seg:
                parts.append(f'<polyline fill="none" stroke="{colors[c % 4]}" points="{" ".join(seg)}"/>')
                seg = []
        if seg:
            parts.append(f'<polyline fill="none" stroke="{colors[c % 4]}" points="{" ".join(seg)}"/>')
        parts.append(f'<text x="{_W - _M - 120}" y="{_M + 15 * (c + 1)}" fill="{colors[c % 4]}">{name}</text>')
    parts.append(f'<text x="{_W / 2}" y="{_H - 10}" text-anchor="middle">{xlabel} [{x0:.4g}, {x1:.4g}]</text>')
    parts.append(f'<text x="10" y="{_M - 10}">{ylabel} [{y0:.4g}, {y1:.4g}]</text>')
    parts.append("</svg>")
    return _write_text(path, "\n".join(parts) + "\n")


def write_svg_heatmap(path, grid, xlabel: str = "", ylabel: str = "") -> Path:
    """Grey-scale heatmap of a 2-D array (rows drawn bottom to top)."""
    grid = np.asarray(grid, dtype=float)
    ny, nx = grid.shape
    finite = grid[np.isfinite(grid)]
    lo, hi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    if hi == lo:
        hi = lo + 1.0
    cw, ch = (_W - 2 * _M) / nx, (_H - 2 * _M) / ny
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}">',
             f"<!-- heatmap {ny}x{nx}, range [{_fmt(lo)}, {_fmt(hi)}] -->"]
    for j in range(ny):
        for i in range(nx):
            v = grid[j, i]
            level = 255 if not math.isfinite(v) else int(round(255 * (1 - (v - lo) / (hi - lo))))
            parts.append(f'<rect x="{_M + i * cw:.2f}" y="{_H - _M - (j + 1) * ch:.2f}" '
                         f'width="{cw:.2f}" height="{ch:.2f}" fill="rgb({level},{level},{level})"/>')
    parts.append(f'<text x="{_W / 2}" y="{_H - 10}" text-anchor="middle">{xlabel}</text>')
    parts.append(f'<text x="10" y="{_M - 10}">{ylabel}</text>')
    parts.append("</svg>")
    return _write_text(path, "\n".join(parts) + "\n")


def _write_text(path, text) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(text)
    return path
