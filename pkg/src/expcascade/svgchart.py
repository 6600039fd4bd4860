"""Minimal self-contained SVG charts (no plotting dependency).

Renders the line charts and heatmaps for the figure datasets directly from
the same values that go into the CSVs, so the plots can never drift from
the data. Output is plain SVG text.
"""

import numpy as np

_PALETTE = ("#1f77b4", "#ff7f0e", "#d62728", "#2ca02c", "#9467bd", "#8c564b")

# coarse viridis ramp for heatmaps: (position, r, g, b)
_VIRIDIS = (
    (0.0, 68, 1, 84),
    (0.25, 59, 82, 139),
    (0.5, 33, 145, 140),
    (0.75, 94, 201, 98),
    (1.0, 253, 231, 37),
)

WIDTH = 640
HEIGHT = 440
MARGIN_L = 70
MARGIN_R = 140
MARGIN_T = 40
MARGIN_B = 55


def _color(t):
    t = min(max(t, 0.0), 1.0)
    for (p0, r0, g0, b0), (p1, r1, g1, b1) in zip(_VIRIDIS, _VIRIDIS[1:]):
        if t <= p1:
            f = 0.0 if p1 == p0 else (t - p0) / (p1 - p0)
            return "#{:02x}{:02x}{:02x}".format(
                int(r0 + f * (r1 - r0)),
                int(g0 + f * (g1 - g0)),
                int(b0 + f * (b1 - b0)),
            )
    return "#fde725"


def _ticks(lo, hi, count=5):
    if hi <= lo:
        hi = lo + 1.0
    return np.linspace(lo, hi, count)


def _fmt(v):
    return f"{v:.3g}"


def _header(title):
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="20" text-anchor="middle" font-size="15">{title}</text>',
    ]


def _axes(xlo, xhi, ylo, yhi, xlabel, ylabel):
    px0, px1 = MARGIN_L, WIDTH - MARGIN_R
    py0, py1 = HEIGHT - MARGIN_B, MARGIN_T
    parts = [
        f'<line x1="{px0}" y1="{py0}" x2="{px1}" y2="{py0}" stroke="black"/>',
        f'<line x1="{px0}" y1="{py0}" x2="{px0}" y2="{py1}" stroke="black"/>',
    ]
    for t in _ticks(xlo, xhi):
        x = px0 + (t - xlo) / (xhi - xlo) * (px1 - px0)
        parts.append(f'<line x1="{x:.1f}" y1="{py0}" x2="{x:.1f}" y2="{py0 + 5}" stroke="black"/>')
        parts.append(
            f'<text x="{x:.1f}" y="{py0 + 18}" text-anchor="middle">{_fmt(t)}</text>'
        )
    for t in _ticks(ylo, yhi):
        y = py0 - (t - ylo) / (yhi - ylo) * (py0 - py1)
        parts.append(f'<line x1="{px0 - 5}" y1="{y:.1f}" x2="{px0}" y2="{y:.1f}" stroke="black"/>')
        parts.append(
            f'<text x="{px0 - 8}" y="{y + 4:.1f}" text-anchor="end">{_fmt(t)}</text>'
        )
    parts.append(
        f'<text x="{(px0 + px1) / 2}" y="{HEIGHT - 12}" text-anchor="middle">{xlabel}</text>'
    )
    parts.append(
        f'<text x="18" y="{(py0 + py1) / 2}" text-anchor="middle" '
        f'transform="rotate(-90 18 {(py0 + py1) / 2})">{ylabel}</text>'
    )
    return parts


def line_chart(series, xlabel, ylabel, title):
    """series: list of (label, xs, ys). Returns SVG text."""
    all_x = np.concatenate([np.asarray(xs, dtype=float) for _, xs, _ in series])
    all_y = np.concatenate([np.asarray(ys, dtype=float) for _, _, ys in series])
    xlo, xhi = float(all_x.min()), float(all_x.max())
    ylo, yhi = float(all_y.min()), float(all_y.max())
    if xhi == xlo:
        xhi = xlo + 1.0
    if yhi == ylo:
        yhi = ylo + 1.0
    pad = 0.05 * (yhi - ylo)
    ylo, yhi = ylo - pad, yhi + pad

    px0, px1 = MARGIN_L, WIDTH - MARGIN_R
    py0, py1 = HEIGHT - MARGIN_B, MARGIN_T

    def sx(v):
        return px0 + (v - xlo) / (xhi - xlo) * (px1 - px0)

    def sy(v):
        return py0 - (v - ylo) / (yhi - ylo) * (py0 - py1)

    parts = _header(title)
    parts.extend(_axes(xlo, xhi, ylo, yhi, xlabel, ylabel))
    for idx, (label, xs, ys) in enumerate(series):
        color = _PALETTE[idx % len(_PALETTE)]
        pts = " ".join(f"{sx(float(x)):.1f},{sy(float(y)):.1f}" for x, y in zip(xs, ys))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        for x, y in zip(xs, ys):
            parts.append(
                f'<circle cx="{sx(float(x)):.1f}" cy="{sy(float(y)):.1f}" r="2.5" fill="{color}"/>'
            )
        ly = MARGIN_T + 16 * idx
        parts.append(
            f'<line x1="{px1 + 10}" y1="{ly}" x2="{px1 + 30}" y2="{ly}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{px1 + 35}" y="{ly + 4}">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def heatmap(x_values, y_values, grid, xlabel, ylabel, title):
    """grid[iy][ix] maps to cell (x_values[ix], y_values[iy]). Returns SVG."""
    grid = np.asarray(grid, dtype=float)
    ny, nx = grid.shape
    if (ny, nx) != (len(y_values), len(x_values)):
        raise ValueError("grid shape must match axis value counts")
    vlo, vhi = float(np.nanmin(grid)), float(np.nanmax(grid))
    if vhi == vlo:
        vhi = vlo + 1.0

    px0, px1 = MARGIN_L, WIDTH - MARGIN_R
    py0, py1 = HEIGHT - MARGIN_B, MARGIN_T
    cw = (px1 - px0) / nx
    ch = (py0 - py1) / ny

    parts = _header(title)
    for iy in range(ny):
        for ix in range(nx):
            t = (grid[iy, ix] - vlo) / (vhi - vlo)
            x = px0 + ix * cw
            y = py0 - (iy + 1) * ch
            parts.append(
                f'<rect x="{x:.1f}" y="{y:.1f}" width="{cw + 0.5:.1f}" '
                f'height="{ch + 0.5:.1f}" fill="{_color(t)}"/>'
            )
    # axis labels on cell centres (thinned to at most ~10 ticks)
    xstep = max(1, nx // 10)
    for ix in range(0, nx, xstep):
        x = px0 + (ix + 0.5) * cw
        parts.append(
            f'<text x="{x:.1f}" y="{py0 + 18}" text-anchor="middle">{_fmt(float(x_values[ix]))}</text>'
        )
    ystep = max(1, ny // 10)
    for iy in range(0, ny, ystep):
        y = py0 - (iy + 0.5) * ch
        parts.append(
            f'<text x="{px0 - 8}" y="{y + 4:.1f}" text-anchor="end">{_fmt(float(y_values[iy]))}</text>'
        )
    parts.append(
        f'<text x="{(px0 + px1) / 2}" y="{HEIGHT - 12}" text-anchor="middle">{xlabel}</text>'
    )
    parts.append(
        f'<text x="18" y="{(py0 + py1) / 2}" text-anchor="middle" '
        f'transform="rotate(-90 18 {(py0 + py1) / 2})">{ylabel}</text>'
    )
    # colour bar
    bar_x = px1 + 25
    for s in range(60):
        t = s / 59.0
        y = py0 - (s + 1) / 60.0 * (py0 - py1)
        parts.append(
            f'<rect x="{bar_x}" y="{y:.1f}" width="18" height="{(py0 - py1) / 60 + 0.5:.1f}" fill="{_color(t)}"/>'
        )
    parts.append(f'<text x="{bar_x + 24}" y="{py0 + 4}">{_fmt(vlo)}</text>')
    parts.append(f'<text x="{bar_x + 24}" y="{py1 + 4}">{_fmt(vhi)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
