"""SVG rendering of laid-out charts.

Every coordinate written here comes straight from :class:`ChartMetadata`, so
the drawing and the metadata can never disagree.
"""

from __future__ import annotations

from xml.sax.saxutils import escape, quoteattr

from .colors import rgb_to_hex
from .layout import TICK, ChartMetadata, text_width
from .model import ChartSpec

_HATCH_SHAPES = {
    "stripes": '<path d="M0,8 L8,0" stroke="#000" stroke-width="1.2"/>',
    "dots": '<circle cx="4" cy="4" r="1.2" fill="#000"/>',
    "circles": '<circle cx="4" cy="4" r="2.2" fill="none" stroke="#000" stroke-width="0.8"/>',
    "cross-hatch": '<path d="M0,8 L8,0 M0,0 L8,8" stroke="#000" stroke-width="0.8"/>',
    "stars": '<path d="M4,1 L4,7 M1,4 L7,4 M2,2 L6,6 M2,6 L6,2" stroke="#000" stroke-width="0.6"/>',
    "grid": '<path d="M0,4 L8,4 M4,0 L4,8" stroke="#000" stroke-width="0.8"/>',
}


def _n(v: float) -> str:
    out = f"{v:.2f}".rstrip("0").rstrip(".")
    return "0" if out in ("-0", "") else out


def _rect(box, fill: str, extra: str = "") -> str:
    return (
        f'<rect x="{_n(box.x)}" y="{_n(box.y)}" width="{_n(box.width)}" '
        f'height="{_n(box.height)}" fill="{fill}"{extra}/>'
    )


def _line(x1, y1, x2, y2, stroke="#000", width=1.0) -> str:
    return f'<line x1="{_n(x1)}" y1="{_n(y1)}" x2="{_n(x2)}" y2="{_n(y2)}" stroke="{stroke}" stroke-width="{_n(width)}"/>'


def render_svg(meta: ChartMetadata, spec: ChartSpec) -> str:
    """Standalone SVG document for one chart."""
    w, h = meta.canvas
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
    ]
    hatch = spec.style.hatch
    if hatch:
        parts.append(
            f'<defs><pattern id="hatch" patternUnits="userSpaceOnUse" width="8" height="8">'
            f"{_HATCH_SHAPES[hatch]}</pattern></defs>"
        )
    parts.append(f'<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>')

    axis, plot, data = meta.value_axis, meta.plot_area, meta.data_area
    vertical = axis.direction == "y"
    for t in axis.ticks:
        p = axis.pixel(t)
        if spec.style.grid_lines:
            if vertical:
                parts.append(_line(data.x, p, data.right, p, "#d0d0d0", 0.8))
            else:
                parts.append(_line(p, data.y, p, data.bottom, "#d0d0d0", 0.8))
        if vertical:
            parts.append(_line(plot.x - TICK, p, plot.x, p))
        else:
            parts.append(_line(p, plot.bottom, p, plot.bottom + TICK))
    for c in meta.category_centers:
        if vertical:
            parts.append(_line(c, plot.bottom, c, plot.bottom + TICK))
        else:
            parts.append(_line(plot.x - TICK, c, plot.x, c))

    for bar in meta.bars:
        if bar.box is None:
            continue
        parts.append(_rect(bar.box, rgb_to_hex(bar.rgb)))
        if hatch:
            parts.append(_rect(bar.box, "url(#hatch)", ' fill-opacity="0.55"'))

    # zero line when negative values are shown
    if axis.vmin < 0 < axis.vmax:
        z = axis.pixel(0)
        parts.append(_line(data.x, z, data.right, z) if vertical else _line(z, data.y, z, data.bottom))
    parts.append(
        f'<rect x="{_n(plot.x)}" y="{_n(plot.y)}" width="{_n(plot.width)}" height="{_n(plot.height)}" '
        'fill="none" stroke="#000" stroke-width="1"/>'
    )

    for lg in meta.legend_boxes:
        parts.append(_rect(lg.box, rgb_to_hex(lg.rgb), ' stroke="#000" stroke-width="0.5"'))
        if hatch:
            parts.append(_rect(lg.box, "url(#hatch)", ' fill-opacity="0.55"'))

    for t in meta.text_boxes:
        cx, cy = t.box.center
        rot = f' transform="rotate(-{t.rotation} {_n(cx)} {_n(cy)})"' if t.rotation else ""
        # textLength pins the drawn width to the measured one whatever font is substituted
        length = _n(text_width(t.text, t.font_size))
        parts.append(
            f'<text x="{_n(cx)}" y="{_n(cy)}" textLength="{length}" lengthAdjust="spacingAndGlyphs" font-family="DejaVu Sans, Verdana, sans-serif" '
            f'font-size="{_n(t.font_size)}" text-anchor="middle" dominant-baseline="central"'
            f"{rot} data-role={quoteattr(t.role)}>{escape(t.text)}</text>"
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
