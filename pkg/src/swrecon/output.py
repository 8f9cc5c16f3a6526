"""CSV, JSON and SVG writers with deterministic output."""

from __future__ import annotations

import csv
import json
import os
from typing import Iterable, Mapping, Sequence

import numpy as np


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> str:
    """Write rows with full-precision floats; returns the path."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def read_csv_columns(path: str) -> dict:
    """Read a numeric CSV with a header into a dict of arrays."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise ValueError(f"{path}: no data rows")
    header = [h.strip() for h in rows[0]]
    data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float)
    return {name: data[:, i] for i, name in enumerate(header)}


def write_json(path: str, payload: Mapping) -> str:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")
    return path


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22")


def _normalise(series):
    """Accept a list of lines or a mapping of panel title to lines."""
    if isinstance(series, Mapping):
        panels = [(str(k), list(v)) for k, v in series.items()]
    else:
        panels = [("", list(series))]
    panels = [(t, [np.asarray(l, float) for l in lines]) for t, lines in panels]
    if not panels or not any(len(lines) for _, lines in panels):
        raise ValueError("empty series")
    for _, lines in panels:
        for l in lines:
            if l.ndim != 2 or l.shape[0] != 2 or l.shape[1] < 1:
                raise ValueError("each line must be a (2, n) array of x and y")
    return panels


def emit_svg(series, path: str, panel_width: int = 320, panel_height: int = 220,
             columns: int = 2) -> str:
    """Render line plots as a standalone SVG file.

    Parameters
    ----------
    series : sequence or mapping
        Either a list of lines, each ``(xs, ys)``, drawn in a single panel,
        or a mapping of panel title to such a list (one panel per entry).
    path : str
        Output file; its directory must exist.

    Every line becomes one ``<polyline>``.  Output bytes depend only on the
    input values.
    """
    panels = _normalise(series)
    cols = min(columns, len(panels))
    rows = -(-len(panels) // cols)
    W, H = cols * panel_width, rows * panel_height
    margin = 30
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
    ]
    for k, (title, lines) in enumerate(panels):
        ox, oy = (k % cols) * panel_width, (k // cols) * panel_height
        xs = np.concatenate([l[0] for l in lines])
        ys = np.concatenate([l[1] for l in lines])
        x0, x1 = float(xs.min()), float(xs.max())
        y0, y1 = float(ys.min()), float(ys.max())
        if x1 == x0:
            x0, x1 = x0 - 0.5, x1 + 0.5
        if y1 == y0:
            y0, y1 = y0 - 0.5, y1 + 0.5
        pw, ph = panel_width - 2 * margin, panel_height - 2 * margin
        parts.append(f'<g transform="translate({ox},{oy})">')
        parts.append(f'<rect x="{margin}" y="{margin}" width="{pw}" height="{ph}" '
                     'fill="none" stroke="black" stroke-width="0.5"/>')
        if title:
            parts.append(f'<text x="{panel_width / 2:.1f}" y="{margin - 10}" text-anchor="middle" '
                         f'font-family="sans-serif" font-size="12">{_escape(title)}</text>')
        parts.append(f'<text x="{margin}" y="{panel_height - 10}" font-family="sans-serif" '
                     f'font-size="9">x: [{x0:.4g}, {x1:.4g}]  y: [{y0:.4g}, {y1:.4g}]</text>')
        for i, l in enumerate(lines):
            px = margin + (l[0] - x0) / (x1 - x0) * pw
            py = margin + ph - (l[1] - y0) / (y1 - y0) * ph
            pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
            parts.append(f'<polyline fill="none" stroke="{PALETTE[i % len(PALETTE)]}" '
                         f'stroke-width="1" points="{pts}"/>')
        parts.append("</g>")
    parts.append("</svg>")
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory):
        raise OSError(f"cannot write {path}: directory does not exist")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")
    return path


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
