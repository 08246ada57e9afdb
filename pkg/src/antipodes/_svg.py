"""Minimal standalone SVG scatter for log-log sweep data.

Hand-rolled so the output bytes are deterministic and dependency-free:
points on log2 axes, optional fitted line, dyadic tick labels.
"""

import math

_W, _H = 640, 480
_ML, _MR, _MT, _MB = 70, 20, 20, 50


def _mapper(vals, lo_px, hi_px, flip=False):
    lo, hi = min(vals), max(vals)
    if hi == lo:
        hi = lo + 1.0
    span = hi - lo

    def f(v):
        t = (v - lo) / span
        if flip:
            t = 1.0 - t
        return lo_px + t * (hi_px - lo_px)

    return f, lo, hi


def render_loglog(points, slope=None, intercept=None, xlabel="epsilon", ylabel="ratio"):
    """Render (x, y) pairs on log2-log2 axes; returns the SVG text.

    When slope/intercept are given (in log2 coordinates), the fitted line
    y = 2^intercept * x^slope is drawn across the x range.
    """
    xs = [math.log2(x) for x, _ in points]
    ys = [math.log2(y) for _, y in points]
    fx, xlo, xhi = _mapper(xs, _ML, _W - _MR)
    fy, ylo, yhi = _mapper(ys, _MT, _H - _MB, flip=True)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" height="{_H - _MT - _MB}" '
        f'fill="none" stroke="black"/>',
    ]
    for tick in range(math.ceil(xlo), math.floor(xhi) + 1):
        px = fx(tick)
        out.append(f'<line x1="{px:.1f}" y1="{_H - _MB}" x2="{px:.1f}" y2="{_H - _MB + 5}" stroke="black"/>')
        out.append(
            f'<text x="{px:.1f}" y="{_H - _MB + 20}" font-size="12" text-anchor="middle">'
            f"2^{tick}</text>"
        )
    for tick in range(math.ceil(ylo), math.floor(yhi) + 1):
        py = fy(tick)
        out.append(f'<line x1="{_ML - 5}" y1="{py:.1f}" x2="{_ML}" y2="{py:.1f}" stroke="black"/>')
        out.append(
            f'<text x="{_ML - 8}" y="{py + 4:.1f}" font-size="12" text-anchor="end">2^{tick}</text>'
        )
    out.append(
        f'<text x="{(_ML + _W - _MR) / 2:.1f}" y="{_H - 10}" font-size="13" '
        f'text-anchor="middle">log2 {xlabel}</text>'
    )
    out.append(
        f'<text x="15" y="{(_MT + _H - _MB) / 2:.1f}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 15 {(_MT + _H - _MB) / 2:.1f})">log2 {ylabel}</text>'
    )
    if slope is not None and intercept is not None:
        y0 = slope * xlo + intercept
        y1 = slope * xhi + intercept
        out.append(
            f'<line x1="{fx(xlo):.1f}" y1="{fy(y0):.1f}" x2="{fx(xhi):.1f}" y2="{fy(y1):.1f}" '
            f'stroke="steelblue" stroke-width="1.5"/>'
        )
        out.append(
            f'<text x="{_ML + 10}" y="{_MT + 18}" font-size="12" fill="steelblue">'
            f"slope {slope:.4f}</text>"
        )
    for x, y in zip(xs, ys):
        out.append(f'<circle cx="{fx(x):.1f}" cy="{fy(y):.1f}" r="3.5" fill="crimson"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
