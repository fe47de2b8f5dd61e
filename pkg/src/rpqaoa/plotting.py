"""Schematic SVG rendering of percentile summaries (no plotting dependency).

Each summary row becomes one group on the x axis: a mirrored violin-style
polygon through the seven percentile heights, a filled box between the
quartiles, whiskers between the 1st and 99th percentiles, an orange median
dot, red extreme dots, and a black marker on the advantage level qmp = 1.
The rendering is intentionally schematic; it reads the same percentile
columns the summary CSV freezes, nothing more.
"""

from __future__ import annotations

import csv
import os
from typing import Sequence, Union

from .errors import FormatError

_QMP_COLUMNS = [
    "qmp_min_min",
    "qmp_min_p01",
    "qmp_min_q1",
    "qmp_min_median",
    "qmp_min_q3",
    "qmp_min_p99",
    "qmp_min_max",
]
# Half widths of the violin outline at each percentile height, as a fraction
# of the group slot width.
_VIOLIN_WIDTHS = [0.04, 0.16, 0.38, 0.45, 0.38, 0.16, 0.04]

_WIDTH, _HEIGHT = 720, 420
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 64, 16, 36, 44


def read_summary_rows(path: Union[str, os.PathLike]) -> list[dict]:
    """Read a percentile summary CSV, validating the frozen column set."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise FormatError(f"{path}: empty summary CSV")
        key = "n" if "n" in reader.fieldnames else "p"
        if key not in reader.fieldnames:
            raise FormatError(f"{path}: missing column: n")
        for column in _QMP_COLUMNS:
            if column not in reader.fieldnames:
                raise FormatError(f"{path}: missing column: {column}")
        rows = []
        for raw in reader:
            try:
                row = {"key": int(raw[key]), "key_name": key}
                row.update({c: float(raw[c]) for c in _QMP_COLUMNS})
            except (TypeError, ValueError) as exc:
                raise FormatError(f"{path}: malformed row {raw!r}") from exc
            rows.append(row)
    if not rows:
        raise FormatError(f"{path}: summary CSV has no data rows")
    return rows


def _y_scale(rows: Sequence[dict]):
    lo = min(min(r["qmp_min_min"] for r in rows), 1.0)
    hi = max(max(r["qmp_min_max"] for r in rows), 1.0)
    pad = 0.05 * (hi - lo) or 0.1
    lo, hi = lo - pad, hi + pad
    span = _HEIGHT - _MARGIN_T - _MARGIN_B

    def to_y(value: float) -> float:
        return _MARGIN_T + span * (hi - value) / (hi - lo)

    return to_y, lo, hi


def render_summary_svg(rows: Sequence[dict], title: str = "") -> str:
    """Render summary rows (from `read_summary_rows`) as an SVG document."""
    if not rows:
        raise FormatError("nothing to plot")
    to_y, lo, hi = _y_scale(rows)
    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    slot = plot_w / len(rows)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH/2:.1f}" y="20" text-anchor="middle" font-size="14">{title}</text>',
    ]
    # y axis with a handful of ticks
    parts.append(
        f'<line x1="{_MARGIN_L}" y1="{_MARGIN_T}" x2="{_MARGIN_L}" '
        f'y2="{_HEIGHT-_MARGIN_B}" stroke="black"/>'
    )
    for k in range(5):
        value = lo + k * (hi - lo) / 4
        y = to_y(value)
        parts.append(f'<line x1="{_MARGIN_L-4}" y1="{y:.1f}" x2="{_MARGIN_L}" y2="{y:.1f}" stroke="black"/>')
        parts.append(
            f'<text x="{_MARGIN_L-8}" y="{y+4:.1f}" text-anchor="end" font-size="11">{value:.2f}</text>'
        )
    parts.append(
        f'<text x="14" y="{_HEIGHT/2:.0f}" font-size="12" '
        f'transform="rotate(-90 14 {_HEIGHT/2:.0f})" text-anchor="middle">qmp_min</text>'
    )
    # advantage reference line at qmp = 1
    y1 = to_y(1.0)
    parts.append(
        f'<line x1="{_MARGIN_L}" y1="{y1:.1f}" x2="{_WIDTH-_MARGIN_R}" y2="{y1:.1f}" '
        f'stroke="black" stroke-dasharray="5,4" stroke-width="0.8"/>'
    )
    for idx, row in enumerate(rows):
        cx = _MARGIN_L + slot * (idx + 0.5)
        heights = [row[c] for c in _QMP_COLUMNS]
        ys = [to_y(h) for h in heights]
        # violin outline: mirrored polygon through the percentile heights
        right = [(cx + _VIOLIN_WIDTHS[i] * slot, ys[i]) for i in range(len(ys))]
        left = [(cx - _VIOLIN_WIDTHS[i] * slot, ys[i]) for i in reversed(range(len(ys)))]
        points = " ".join(f"{x:.1f},{y:.1f}" for x, y in right + left)
        parts.append(f'<polygon points="{points}" fill="#aaccee" fill-opacity="0.7" stroke="none"/>')
        # whiskers p01..p99 and quartile box
        parts.append(
            f'<line x1="{cx:.1f}" y1="{ys[1]:.1f}" x2="{cx:.1f}" y2="{ys[5]:.1f}" '
            f'stroke="#336699" stroke-width="1.2"/>'
        )
        bw = 0.18 * slot
        parts.append(
            f'<rect x="{cx-bw:.1f}" y="{ys[4]:.1f}" width="{2*bw:.1f}" '
            f'height="{abs(ys[2]-ys[4]):.1f}" fill="#336699" fill-opacity="0.85"/>'
        )
        # extremes, median, and the advantage marker
        parts.append(f'<circle cx="{cx:.1f}" cy="{ys[0]:.1f}" r="2.2" fill="red"/>')
        parts.append(f'<circle cx="{cx:.1f}" cy="{ys[6]:.1f}" r="2.2" fill="red"/>')
        parts.append(f'<circle cx="{cx:.1f}" cy="{ys[3]:.1f}" r="3.5" fill="orange" stroke="black" stroke-width="0.6"/>')
        parts.append(f'<circle cx="{cx:.1f}" cy="{y1:.1f}" r="2.0" fill="black"/>')
        parts.append(
            f'<text x="{cx:.1f}" y="{_HEIGHT-_MARGIN_B+16}" text-anchor="middle" font-size="12">'
            f'{row["key_name"]}={row["key"]}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)


def plot_summary_csv(path: Union[str, os.PathLike], out_path: Union[str, os.PathLike],
                     title: str = "") -> None:
    """Read one summary CSV and write its SVG next to it."""
    rows = read_summary_rows(path)
    svg = render_summary_svg(rows, title=title or os.path.basename(str(path)))
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(svg)
