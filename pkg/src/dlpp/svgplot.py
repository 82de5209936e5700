"""Minimal deterministic SVG line plots (no plotting dependency).

Output contains no timestamps or environment-dependent content, so a plot is
byte-identical across reruns of the same data.
"""

import math

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"]


def _ticks(lo, hi, count=5):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(count - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    start = math.ceil(lo / step) * step
    ticks = []
    v = start
    while v <= hi + 1e-12 * abs(step):
        ticks.append(round(v, 12))
        v += step
    return ticks


def line_plot(series, xlabel="", ylabel="", title="", logx=False, logy=False,
              width=720, height=480):
    """Render series = [(xs, ys, label), ...] as an SVG string."""
    margin_l, margin_r, margin_t, margin_b = 64, 16, 28, 44

    def tx(v):
        return math.log10(v) if logx else v

    def ty(v):
        return math.log10(v) if logy else v

    pts = []
    for xs, ys, _ in series:
        pts.extend((tx(x), ty(y)) for x, y in zip(xs, ys)
                   if (not logx or x > 0) and (not logy or y > 0))
    if not pts:
        pts = [(0.0, 0.0), (1.0, 1.0)]
    x_lo = min(p[0] for p in pts)
    x_hi = max(p[0] for p in pts)
    y_lo = min(p[1] for p in pts)
    y_hi = max(p[1] for p in pts)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.04 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    plot_w = width - margin_l - margin_r
    plot_h = height - margin_t - margin_b

    def px(v):
        return margin_l + (tx(v) - x_lo) / (x_hi - x_lo) * plot_w

    def py(v):
        return margin_t + (y_hi - ty(v)) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="monospace" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{margin_l}" y="{margin_t}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#333"/>',
    ]
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="18" text-anchor="middle">{title}</text>')

    for tick in _ticks(x_lo, x_hi):
        x = margin_l + (tick - x_lo) / (x_hi - x_lo) * plot_w
        label = f"1e{tick:.0f}" if logx else f"{tick:g}"
        out.append(f'<line x1="{x:.1f}" y1="{margin_t + plot_h}" x2="{x:.1f}" '
                   f'y2="{margin_t + plot_h + 4}" stroke="#333"/>')
        out.append(f'<text x="{x:.1f}" y="{margin_t + plot_h + 16}" '
                   f'text-anchor="middle">{label}</text>')
    for tick in _ticks(y_lo, y_hi):
        y = margin_t + (y_hi - tick) / (y_hi - y_lo) * plot_h
        label = f"1e{tick:.0f}" if logy else f"{tick:g}"
        out.append(f'<line x1="{margin_l - 4}" y1="{y:.1f}" x2="{margin_l}" '
                   f'y2="{y:.1f}" stroke="#333"/>')
        out.append(f'<text x="{margin_l - 7}" y="{y + 3:.1f}" text-anchor="end">{label}</text>')
    if xlabel:
        out.append(f'<text x="{margin_l + plot_w / 2:.1f}" y="{height - 8}" '
                   f'text-anchor="middle">{xlabel}</text>')
    if ylabel:
        out.append(f'<text x="14" y="{margin_t + plot_h / 2:.1f}" text-anchor="middle" '
                   f'transform="rotate(-90 14 {margin_t + plot_h / 2:.1f})">{ylabel}</text>')

    for idx, (xs, ys, label) in enumerate(series):
        color = _COLORS[idx % len(_COLORS)]
        coords = " ".join(
            f"{px(x):.2f},{py(y):.2f}"
            for x, y in zip(xs, ys)
            if (not logx or x > 0) and (not logy or y > 0)
        )
        out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        if label:
            ly = margin_t + 14 + 14 * idx
            lx = margin_l + plot_w - 130
            out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 18}" y2="{ly - 4}" '
                       f'stroke="{color}" stroke-width="1.5"/>')
            out.append(f'<text x="{lx + 22}" y="{ly}">{label}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"
