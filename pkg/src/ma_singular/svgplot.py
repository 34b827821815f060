"""Minimal deterministic SVG output.

Hand-rolled on purpose: the plots must be byte-identical across repeat
runs, so every coordinate is formatted with a fixed "%.6f" and nothing
environment-dependent (fonts, timestamps, library versions) is embedded.
"""

from __future__ import annotations

import numpy as np

__all__ = ["curves_overlay_svg", "image_curves_svg", "residual_strip_svg"]

_PALETTE = ("#1b6ca8", "#c23b22", "#2e8540", "#8e44ad", "#b8860b", "#444444")

_SIZE = 640
_MARGIN = 40


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def _header(title: str) -> list:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE}" '
        f'height="{_SIZE}" viewBox="0 0 {_SIZE} {_SIZE}">',
        f'<rect width="{_SIZE}" height="{_SIZE}" fill="#ffffff"/>',
        f'<title>{title}</title>',
    ]


def _data_transform(points_list):
    """Map data coordinates to pixels, preserving aspect, with margin."""
    all_pts = np.concatenate([np.asarray(p, dtype=float) for p in points_list])
    finite = all_pts[np.all(np.isfinite(all_pts), axis=1)]
    if finite.size == 0:
        finite = np.zeros((1, 2))
    lo = finite.min(axis=0)
    hi = finite.max(axis=0)
    span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-12))
    scale = (_SIZE - 2 * _MARGIN) / span
    center = 0.5 * (lo + hi)

    def to_px(pts):
        pts = np.asarray(pts, dtype=float)
        px = _MARGIN + (_SIZE - 2 * _MARGIN) / 2 + (pts[:, 0] - center[0]) * scale
        py = _MARGIN + (_SIZE - 2 * _MARGIN) / 2 - (pts[:, 1] - center[1]) * scale
        return px, py

    return to_px


def _polyline(px, py, color: str, width: float, closed: bool) -> str:
    coords = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(px, py))
    tag = "polygon" if closed else "polyline"
    return (f'<{tag} points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="{_fmt(width)}"/>')


def curves_overlay_svg(curves, title: str = "curves") -> str:
    """Overlay closed curves given as (label, (n, 2) points) pairs."""
    to_px = _data_transform([pts for _, pts in curves])
    parts = _header(title)
    legend_y = _MARGIN
    for i, (label, pts) in enumerate(curves):
        color = _PALETTE[i % len(_PALETTE)]
        px, py = to_px(np.asarray(pts, dtype=float))
        parts.append(_polyline(px, py, color, 1.5, closed=True))
        parts.append(f'<text x="{_MARGIN}" y="{legend_y}" fill="{color}" '
                     f'font-size="14">{label}</text>')
        legend_y += 18
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def image_curves_svg(x: np.ndarray, y: np.ndarray, title: str = "image curves",
                     max_levels: int = 24) -> str:
    """The family of image curves (x, y)(., v_k) nesting around the origin.

    ``x`` and ``y`` have shape (levels, n_u); at most max_levels are drawn,
    evenly strided, innermost lightest.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n_levels = x.shape[0]
    stride = max(1, int(np.ceil(n_levels / max_levels)))
    rows = list(range(0, n_levels, stride))
    if rows[-1] != n_levels - 1:
        rows.append(n_levels - 1)
    pts = [np.column_stack([x[k], y[k]]) for k in rows]
    to_px = _data_transform(pts + [np.zeros((1, 2))])
    parts = _header(title)
    for i, (k, p) in enumerate(zip(rows, pts)):
        shade = 0.25 + 0.75 * (i / max(len(rows) - 1, 1))
        level = int(round(120 * (1 - shade)))
        color = f"#{level:02x}{level:02x}{int(round(90 + 130 * shade)):02x}"
        px, py = to_px(p)
        parts.append(_polyline(px, py, color, 1.0, closed=True))
    ox, oy = to_px(np.zeros((1, 2)))
    parts.append(f'<circle cx="{_fmt(ox[0])}" cy="{_fmt(oy[0])}" r="3" '
                 f'fill="#c23b22"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _heat_color(t: float) -> str:
    """0 -> blue, 0.5 -> near-white, 1 -> red; linear in RGB."""
    stops = ((0x21, 0x66, 0xac), (0xf7, 0xf7, 0xf7), (0xb2, 0x18, 0x2b))
    t = min(max(t, 0.0), 1.0)
    if t < 0.5:
        w = t / 0.5
        lo, hi = stops[0], stops[1]
    else:
        w = (t - 0.5) / 0.5
        lo, hi = stops[1], stops[2]
    rgb = tuple(int(round(a + (b - a) * w)) for a, b in zip(lo, hi))
    return "#%02x%02x%02x" % rgb


def residual_strip_svg(residuals: np.ndarray, v: np.ndarray,
                       title: str = "residual", max_cols: int = 128,
                       log_lo: float = -12.0, log_hi: float = 0.0) -> str:
    """Heat strip of log10 |residual| over (level, node); NaN cells gray."""
    residuals = np.atleast_2d(np.asarray(residuals, dtype=float))
    n_levels, n_u = residuals.shape
    stride = max(1, int(np.ceil(n_u / max_cols)))
    cols = list(range(0, n_u, stride))
    cell_w = (_SIZE - 2 * _MARGIN) / len(cols)
    cell_h = (_SIZE - 2 * _MARGIN) / n_levels
    parts = _header(title)
    for i in range(n_levels):
        for jc, j in enumerate(cols):
            value = residuals[i, j]
            if not np.isfinite(value):
                color = "#d9d9d9"
            else:
                mag = np.log10(max(abs(value), 10.0 ** log_lo))
                color = _heat_color((mag - log_lo) / (log_hi - log_lo))
            x0 = _MARGIN + jc * cell_w
            y0 = _SIZE - _MARGIN - (i + 1) * cell_h
            parts.append(f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" '
                         f'width="{_fmt(cell_w)}" height="{_fmt(cell_h)}" '
                         f'fill="{color}"/>')
    parts.append(f'<text x="{_MARGIN}" y="{_SIZE - 12}" fill="#444444" '
                 f'font-size="12">v from {v[0]:.4g} to {v[-1]:.4g}, '
                 f'log10 scale {log_lo:g}..{log_hi:g}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
