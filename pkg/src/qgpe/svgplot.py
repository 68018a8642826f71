"""Deterministic self-contained SVG plots of training traces.

Log-scale y axis, one polyline per trace, no external assets and no
timestamps, so identical inputs produce identical bytes.  The declared
data ranges and margins are exposed as data-* attributes on the root
element, which makes the pixel mapping externally checkable:

    y_pix = margin_top + (1 - (log10(v) - log10(ymin))
                              / (log10(ymax) - log10(ymin))) * plot_height
"""

from __future__ import annotations

import math

from .exceptions import ConfigurationError, DimensionError
from .trace import TrainingTrace

PLOT_KINDS = ("energy_error", "l2_error", "rel_change")
_COLUMN = {
    "energy_error": "energy_error",
    "l2_error": "l2_error",
    "rel_change": "rel_energy_change",
}
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

WIDTH, HEIGHT = 640, 440
MARGIN_LEFT, MARGIN_TOP, MARGIN_RIGHT, MARGIN_BOTTOM = 70, 20, 20, 45


def _series(trace: TrainingTrace, kind: str):
    xs = trace.column("step")
    ys = trace.column(_COLUMN[kind])
    keep = [i for i in range(len(ys)) if math.isfinite(ys[i]) and ys[i] > 0.0]
    return [float(xs[i]) for i in keep], [float(ys[i]) for i in keep]


def emit_plot(traces, kind: str, path, labels=None) -> None:
    """Write a log-scale SVG of one trace column for one or more traces."""
    if kind not in PLOT_KINDS:
        raise ConfigurationError(f"plot kind must be one of {PLOT_KINDS}, got {kind!r}")
    if isinstance(traces, TrainingTrace):
        traces = [traces]
    if labels is None:
        labels = [f"trace-{i + 1}" for i in range(len(traces))]
    if len(labels) != len(traces):
        raise DimensionError(f"{len(labels)} labels for {len(traces)} traces")

    series = [_series(t, kind) for t in traces]
    if not any(xs for xs, _ in series):
        raise DimensionError("no positive finite values to plot")

    all_x = [x for xs, _ in series for x in xs]
    all_y = [y for _, ys in series for y in ys]
    xmin, xmax = min(all_x), max(all_x)
    ymin, ymax = min(all_y), max(all_y)
    if xmin == xmax:
        xmin, xmax = xmin - 1.0, xmax + 1.0
    if ymin == ymax:
        ymin, ymax = ymin / 10.0, ymax * 10.0

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    log_lo, log_hi = math.log10(ymin), math.log10(ymax)

    def x_pix(x):
        return MARGIN_LEFT + (x - xmin) / (xmax - xmin) * plot_w

    def y_pix(y):
        return MARGIN_TOP + (1.0 - (math.log10(y) - log_lo) / (log_hi - log_lo)) * plot_h

    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" '
        f'data-x-min="{xmin!r}" data-x-max="{xmax!r}" '
        f'data-y-min="{ymin!r}" data-y-max="{ymax!r}" '
        f'data-margins="{MARGIN_LEFT},{MARGIN_TOP},{MARGIN_RIGHT},{MARGIN_BOTTOM}">',
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#000000" stroke-width="1"/>',
    ]

    # decade gridlines and labels
    for exp in range(math.ceil(log_lo), math.floor(log_hi) + 1):
        gy = y_pix(10.0**exp)
        parts.append(
            f'<line x1="{MARGIN_LEFT}" y1="{gy:.3f}" x2="{MARGIN_LEFT + plot_w}" y2="{gy:.3f}" '
            'stroke="#cccccc" stroke-width="0.5"/>'
        )
        parts.append(
            f'<text x="{MARGIN_LEFT - 6}" y="{gy + 4:.3f}" text-anchor="end" '
            f'font-family="monospace" font-size="11">1e{exp}</text>'
        )

    # a few x ticks
    for i in range(5):
        xv = xmin + i * (xmax - xmin) / 4.0
        gx = x_pix(xv)
        parts.append(
            f'<line x1="{gx:.3f}" y1="{MARGIN_TOP + plot_h}" x2="{gx:.3f}" '
            f'y2="{MARGIN_TOP + plot_h + 5}" stroke="#000000" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{gx:.3f}" y="{MARGIN_TOP + plot_h + 18}" text-anchor="middle" '
            f'font-family="monospace" font-size="11">{xv:g}</text>'
        )

    for i, ((xs, ys), label) in enumerate(zip(series, labels)):
        color = PALETTE[i % len(PALETTE)]
        if xs:
            points = " ".join(f"{x_pix(x):.3f},{y_pix(y):.3f}" for x, y in zip(xs, ys))
            parts.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>'
            )
        ly = MARGIN_TOP + 16 + 16 * i
        lx = MARGIN_LEFT + plot_w - 150
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 24}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{lx + 30}" y="{ly}" font-family="monospace" font-size="11">{label}</text>'
        )

    parts.append(
        f'<text x="{MARGIN_LEFT + plot_w / 2:.1f}" y="{HEIGHT - 6}" text-anchor="middle" '
        f'font-family="monospace" font-size="12">{kind} (log scale)</text>'
    )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")
