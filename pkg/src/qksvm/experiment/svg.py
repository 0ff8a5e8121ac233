"""Minimal hand-written SVG charts with fixed-precision coordinates."""

from xml.sax.saxutils import escape

PALETTE = ("#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1")
CLASS_COLORS = {0: "#4e79a7", 1: "#e15759"}


def _f(v):
    return f"{v:.2f}"


def _text(x, y, s, size=12, anchor="middle", extra=""):
    return (
        f'<text x="{_f(x)}" y="{_f(y)}" font-size="{size}" text-anchor="{anchor}" '
        f'font-family="sans-serif"{extra}>{escape(str(s))}</text>'
    )


def _doc(width, height, body):
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    )
    return "\n".join([head, f'<rect width="{width}" height="{height}" fill="white"/>', *body, "</svg>", ""])


def grouped_bars(title, groups, series, values):
    """One group per entry of ``groups``, one bar per ``series`` member.

    ``values[s][g]`` is the height (0..1) of series ``s`` in group ``g``.
    """
    width, height = 760, 420
    left, right, top, bottom = 60, 170, 50, 60
    plot_w, plot_h = width - left - right, height - top - bottom
    body = [_text(width / 2, 28, title, size=16)]
    for k in range(6):
        v = k / 5
        y = top + plot_h * (1 - v)
        body.append(f'<line x1="{left}" y1="{_f(y)}" x2="{left + plot_w}" y2="{_f(y)}" stroke="#dddddd"/>')
        body.append(_text(left - 8, y + 4, f"{v:.1f}", size=11, anchor="end"))
    body.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" stroke="black"/>')
    body.append(
        f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" y2="{top + plot_h}" stroke="black"/>'
    )
    group_w = plot_w / max(len(groups), 1)
    bar_w = group_w * 0.8 / max(len(series), 1)
    for g, gname in enumerate(groups):
        x0 = left + g * group_w + group_w * 0.1
        for s, _ in enumerate(series):
            v = min(max(values[s][g], 0.0), 1.0)
            h = plot_h * v
            x = x0 + s * bar_w
            y = top + plot_h - h
            color = PALETTE[s % len(PALETTE)]
            body.append(
                f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(bar_w * 0.92)}" height="{_f(h)}" fill="{color}"/>'
            )
            body.append(_text(x + bar_w * 0.46, y - 3, f"{values[s][g]:.3f}", size=8))
        body.append(_text(left + (g + 0.5) * group_w, top + plot_h + 20, gname))
    for s, sname in enumerate(series):
        y = top + 10 + s * 20
        body.append(
            f'<rect x="{left + plot_w + 20}" y="{y}" width="12" height="12" fill="{PALETTE[s % len(PALETTE)]}"/>'
        )
        body.append(_text(left + plot_w + 38, y + 10, sname, anchor="start"))
    return _doc(width, height, body)


def scatter_grid(panels, cols=3, title=None):
    """Class-coloured scatter plots, one panel per dict with coords/labels/title."""
    pw, ph, pad = 280, 250, 40
    rows = (len(panels) + cols - 1) // cols
    top_margin = 40 if title else 10
    width, height = cols * pw, rows * ph + top_margin
    body = [_text(width / 2, 26, title, size=16)] if title else []
    for idx, panel in enumerate(panels):
        r, c = divmod(idx, cols)
        ox, oy = c * pw, top_margin + r * ph
        body.append(_text(ox + pw / 2, oy + 18, panel["title"], size=12))
        x0, y0, w, h = ox + pad, oy + 28, pw - 2 * pad + 10, ph - 28 - pad
        body.append(f'<rect x="{x0}" y="{y0}" width="{w}" height="{h}" fill="none" stroke="black"/>')
        pts = panel["coords"]
        xs = [p[0] for p in pts] or [0.0]
        ys = [p[1] for p in pts] or [0.0]
        xmin, xmax = min(xs), max(xs)
        ymin, ymax = min(ys), max(ys)
        xspan = (xmax - xmin) or 1.0
        yspan = (ymax - ymin) or 1.0
        for (px, py), lab in zip(pts, panel["labels"]):
            sx = x0 + 6 + (px - xmin) / xspan * (w - 12)
            sy = y0 + h - 6 - (py - ymin) / yspan * (h - 12)
            body.append(
                f'<circle cx="{_f(sx)}" cy="{_f(sy)}" r="3" fill="{CLASS_COLORS.get(int(lab), "gray")}" '
                f'fill-opacity="0.7"/>'
            )
        body.append(_text(x0 + w / 2, y0 + h + 16, "PC1", size=10))
        body.append(_text(x0 - 8, y0 + h / 2, "PC2", size=10, extra=""))
    legend_y = top_margin - 14 if title else height - 4
    body.append(_text(width - 150, legend_y, "class 0", size=10, anchor="start",
                      extra=f' fill="{CLASS_COLORS[0]}"'))
    body.append(_text(width - 90, legend_y, "class 1", size=10, anchor="start",
                      extra=f' fill="{CLASS_COLORS[1]}"'))
    return _doc(width, height, body)
