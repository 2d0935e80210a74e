"""Deterministic layout of a chart spec onto the 448x448 canvas.

Text is measured with the bundled per-glyph advance table instead of real
font metrics, so layouts are identical on every platform.  Category labels
along a horizontal axis are tried at 0, 45 and 90 degrees until neighbours
stop overlapping.  A chart is discarded when no rotation resolves the overlap
or when the axes frame covers less than half of the canvas.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Any

from .colors import RGB, hex_to_rgb, name_color, rgb_to_hex
from .model import ChartSpec

CANVAS = 448
PAD = 4.0
TICK = 4.0
GAP = 2.0
LABEL_GAP = 6.0  # slack between neighbouring axis labels for font substitution
RIGHT_BAND = 0.25 * CANVAS
BELOW_BAND = 0.18 * CANVAS
MIN_PLOT_FRACTION = 0.5
ROTATIONS = (0, 45, 90)
TEXT_ROLES = ("title", "axis-label", "tick-label", "bar-label", "group-label", "legend-entry")

DISCARD_PLOT_AREA = "plot-area-too-small"
DISCARD_OVERLAP = "unresolvable-label-overlap"


def _r(v: float) -> float:
    return round(v + 0.0, 2)


@dataclass(frozen=True)
class PixelBox:
    """Axis-aligned box, origin top-left, y growing downwards."""

    x: float
    y: float
    width: float
    height: float

    @property
    def right(self) -> float:
        return self.x + self.width

    @property
    def bottom(self) -> float:
        return self.y + self.height

    @property
    def center(self) -> tuple[float, float]:
        return (self.x + self.width / 2, self.y + self.height / 2)

    @property
    def area(self) -> float:
        return self.width * self.height

    def overlaps(self, other: PixelBox, eps: float = 1e-6) -> bool:
        """True when the intersection has positive area; shared edges do not count."""
        dx = min(self.right, other.right) - max(self.x, other.x)
        dy = min(self.bottom, other.bottom) - max(self.y, other.y)
        return dx > eps and dy > eps

    def inside(self, width: float = CANVAS, height: float = CANVAS) -> bool:
        return self.x >= 0 and self.y >= 0 and self.right <= width and self.bottom <= height

    def rounded(self) -> PixelBox:
        return PixelBox(_r(self.x), _r(self.y), _r(self.width), _r(self.height))

    def to_dict(self) -> dict[str, float]:
        return {"x": self.x, "y": self.y, "width": self.width, "height": self.height}

    @classmethod
    def from_dict(cls, d) -> PixelBox:
        if isinstance(d, (list, tuple)):
            return cls(*(float(v) for v in d))
        return cls(float(d["x"]), float(d["y"]), float(d["width"]), float(d["height"]))


@dataclass(frozen=True)
class TextBoxMeta:
    text: str
    role: str
    box: PixelBox
    rotation: int
    font_size: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "text": self.text,
            "role": self.role,
            "box": self.box.to_dict(),
            "rotation": self.rotation,
            "font_size": self.font_size,
        }


@dataclass(frozen=True)
class BarMeta:
    group: int
    series: int
    value: int
    box: PixelBox | None
    rgb: RGB
    color_name: str
    hatch: str | None

    def to_dict(self) -> dict[str, Any]:
        return {
            "group": self.group,
            "series": self.series,
            "value": self.value,
            "box": self.box.to_dict() if self.box else None,
            "rgb": rgb_to_hex(self.rgb),
            "color_name": self.color_name,
            "hatch": self.hatch,
        }


@dataclass(frozen=True)
class LegendMeta:
    series: int
    box: PixelBox
    rgb: RGB
    color_name: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "series": self.series,
            "box": self.box.to_dict(),
            "rgb": rgb_to_hex(self.rgb),
            "color_name": self.color_name,
        }


@dataclass(frozen=True)
class ValueAxis:
    """Maps stored values (exponents on log axes) to pixel coordinates."""

    kind: str  # "linear" or "log"
    direction: str  # "x" or "y"
    vmin: int
    vmax: int
    pixel_min: float
    pixel_max: float
    ticks: tuple[int, ...]

    def pixel(self, v: float) -> float:
        return self.pixel_min + (v - self.vmin) / (self.vmax - self.vmin) * (self.pixel_max - self.pixel_min)

    @property
    def pixels_per_unit(self) -> float:
        return abs(self.pixel_max - self.pixel_min) / (self.vmax - self.vmin)

    def tick_text(self, t: int) -> str:
        return f"10^{t}" if self.kind == "log" else str(t)

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "direction": self.direction,
            "vmin": self.vmin,
            "vmax": self.vmax,
            "pixel_min": self.pixel_min,
            "pixel_max": self.pixel_max,
            "ticks": list(self.ticks),
        }


@dataclass(frozen=True)
class ChartMetadata:
    chart_id: str
    orientation: str
    grouping: str
    scale_kind: str
    plot_area: PixelBox
    data_area: PixelBox
    value_axis: ValueAxis
    category_centers: tuple[float, ...]
    band_width: float
    bars: tuple[BarMeta, ...]
    text_boxes: tuple[TextBoxMeta, ...]
    legend_boxes: tuple[LegendMeta, ...]
    canvas: tuple[int, int] = (CANVAS, CANVAS)

    @property
    def plot_fraction(self) -> float:
        return self.plot_area.area / (self.canvas[0] * self.canvas[1])

    def text_of_role(self, *roles: str) -> list[TextBoxMeta]:
        return [t for t in self.text_boxes if t.role in roles]

    def box_for_label(self, label: str) -> PixelBox | None:
        for t in self.text_boxes:
            if t.text == label and t.role in ("bar-label", "group-label", "legend-entry"):
                return t.box
        return None

    def to_dict(self) -> dict[str, Any]:
        return {
            "chart_id": self.chart_id,
            "canvas": {"width": self.canvas[0], "height": self.canvas[1]},
            "orientation": self.orientation,
            "grouping": self.grouping,
            "scale_kind": self.scale_kind,
            "plot_area": self.plot_area.to_dict(),
            "data_area": self.data_area.to_dict(),
            "value_axis": self.value_axis.to_dict(),
            "category_centers": list(self.category_centers),
            "band_width": self.band_width,
            "bars": [b.to_dict() for b in self.bars],
            "text_boxes": [t.to_dict() for t in self.text_boxes],
            "legend_boxes": [lg.to_dict() for lg in self.legend_boxes],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> ChartMetadata:
        va = d["value_axis"]
        return cls(
            chart_id=d["chart_id"],
            canvas=(int(d["canvas"]["width"]), int(d["canvas"]["height"])),
            orientation=d["orientation"],
            grouping=d["grouping"],
            scale_kind=d["scale_kind"],
            plot_area=PixelBox.from_dict(d["plot_area"]),
            data_area=PixelBox.from_dict(d["data_area"]),
            value_axis=ValueAxis(
                va["kind"], va["direction"], va["vmin"], va["vmax"], va["pixel_min"], va["pixel_max"], tuple(va["ticks"])
            ),
            category_centers=tuple(d["category_centers"]),
            band_width=d["band_width"],
            bars=tuple(
                BarMeta(
                    b["group"],
                    b["series"],
                    b["value"],
                    PixelBox.from_dict(b["box"]) if b["box"] else None,
                    hex_to_rgb(b["rgb"]),
                    b["color_name"],
                    b["hatch"],
                )
                for b in d["bars"]
            ),
            text_boxes=tuple(
                TextBoxMeta(t["text"], t["role"], PixelBox.from_dict(t["box"]), t["rotation"], t["font_size"])
                for t in d["text_boxes"]
            ),
            legend_boxes=tuple(
                LegendMeta(lg["series"], PixelBox.from_dict(lg["box"]), hex_to_rgb(lg["rgb"]), lg["color_name"])
                for lg in d["legend_boxes"]
            ),
        )

    @classmethod
    def from_json(cls, text: str) -> ChartMetadata:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Discarded:
    chart_id: str
    reason: str


# ---------------------------------------------------------------- text size


@lru_cache(maxsize=1)
def glyph_table() -> dict[str, Any]:
    text = resources.files("barqa.data").joinpath("glyph_widths.json").read_text(encoding="utf-8")
    return json.loads(text)


def text_width(text: str, font_size: float) -> float:
    table = glyph_table()
    adv, default = table["advances"], table["default_advance"]
    return sum(adv.get(ch, default) for ch in text) * font_size / table["units_per_em"]


def measure_text(text: str, font_size: float, rotation: float = 0) -> PixelBox:
    """Bounding extent of a single line of text, as a box at the origin.

    Unknown glyphs use the table's default advance.  Rotated text reports the
    axis-aligned extent of the rotated line box.
    """
    if not text:
        return PixelBox(0.0, 0.0, 0.0, 0.0)
    w = text_width(text, font_size)
    h = font_size * glyph_table()["line_height"]
    rot = rotation % 180
    if rot == 0:
        return PixelBox(0.0, 0.0, w, h)
    if rot == 90:
        return PixelBox(0.0, 0.0, h, w)
    c, s = abs(math.cos(math.radians(rot))), abs(math.sin(math.radians(rot)))
    return PixelBox(0.0, 0.0, w * c + h * s, w * s + h * c)


def line_height(font_size: float) -> float:
    return font_size * glyph_table()["line_height"]


# ------------------------------------------------------------------- layout


def value_axis_range(spec: ChartSpec) -> tuple[str, int, int, tuple[int, ...]]:
    """Axis kind, bounds and ticks in stored units."""
    kind = spec.scale.kind
    if kind == "exponential":
        return "log", 0, 10, tuple(range(0, 11))
    if kind in ("percentage", "percentage-normalized"):
        return "linear", 0, 100, tuple(range(0, 101, 20))
    if spec.grouping == "stacked-additive":
        tallest = max(sum(row) for row in spec.values)
        step = next(s for s in (1, 2, 5, 10, 20) if math.ceil(tallest / s) <= 10)
        top = max(step, math.ceil(tallest / step) * step)
        return "linear", 0, top, tuple(range(0, top + 1, step))
    if spec.scale.allow_negative:
        return "linear", -10, 10, tuple(range(-10, 11, 2))
    return "linear", 0, 10, tuple(range(0, 11))


def _flow(entries: list[tuple[float, float]], x0: float, x1: float, gap: float) -> list[tuple[float, int]] | None:
    """Left-to-right flow of (width, height) items; returns (x, row) per item."""
    out, x, row = [], x0, 0
    for w, _ in entries:
        if w > x1 - x0:
            return None
        if x + w > x1:
            row += 1
            x = x0
        out.append((x, row))
        x += w + gap
    return out


def _row_boxes(labels, centers, top, fs, rot) -> list[PixelBox]:
    out = []
    for text, cx in zip(labels, centers):
        ext = measure_text(text, fs, rot)
        out.append(PixelBox(cx - ext.width / 2, top, ext.width, ext.height))
    return out


def _row_ok(boxes: list[PixelBox], x_lo: float, x_hi: float) -> bool:
    if any(b.x < x_lo or b.right > x_hi for b in boxes):
        return False
    return all(a.right + LABEL_GAP <= b.x for a, b in zip(boxes, boxes[1:]))


def _column_boxes(labels, centers, right_edge, fs) -> list[PixelBox]:
    out = []
    for text, cy in zip(labels, centers):
        ext = measure_text(text, fs, 0)
        out.append(PixelBox(right_edge - ext.width, cy - ext.height / 2, ext.width, ext.height))
    return out


def layout(spec: ChartSpec) -> ChartMetadata | Discarded:
    """Place every chart element; returns metadata or a :class:`Discarded` verdict."""
    fs = spec.style.font_size
    lh = line_height(fs)
    vertical = spec.orientation == "vertical"
    legend_pos = spec.style.legend_position
    series_names = [name_color(c) for c in spec.style.palette[: spec.n_series]]

    title_fs = fs + 1
    t_ext = measure_text(spec.title_context.title, title_fs)
    title_box = PixelBox((CANVAS - t_ext.width) / 2, PAD, t_ext.width, t_ext.height)
    top = title_box.bottom + PAD + lh / 2

    right_limit = CANVAS - RIGHT_BAND if legend_pos == "right" else CANVAS
    bottom_limit = CANVAS - BELOW_BAND if legend_pos == "below" else CANVAS

    axis_kind, vmin, vmax, ticks = value_axis_range(spec)
    tick_text = [f"10^{t}" if axis_kind == "log" else str(t) for t in ticks]
    cat_labels = list(spec.group_labels)
    cat_role = "bar-label" if spec.is_single else "group-label"
    axis_label = spec.title_context.value_axis_label
    al_ext = measure_text(axis_label, fs, 90 if vertical else 0)

    swatch = fs
    legend_items = [(swatch + 3 + text_width(s, fs), lh) for s in spec.series_labels]

    if vertical:
        col_labels, row_labels = tick_text, cat_labels
        col_w = max(text_width(t, fs) for t in col_labels)
        x0 = PAD + al_ext.width + PAD + col_w + GAP + TICK
    else:
        col_labels, row_labels = cat_labels, tick_text
        col_w = max(text_width(t, fs) for t in col_labels)
        x0 = PAD + col_w + GAP + TICK

    chosen = None
    for rot in ROTATIONS:
        exts = [measure_text(t, fs, rot) for t in row_labels]
        row_h = max(e.height for e in exts)
        below_axis = TICK + GAP + row_h + PAD
        if not vertical:
            below_axis += al_ext.height + GAP
        y1 = bottom_limit - below_axis
        x1 = right_limit - PAD
        if not vertical:
            x1 = min(x1, right_limit - exts[-1].width / 2 - 1)
        if x1 <= x0 or y1 <= top:
            continue

        strip = 0.0
        inside_flow = None
        if legend_pos == "inside":
            inside_flow = _flow(legend_items, x0 + PAD, x1 - PAD, 8)
            if inside_flow is None:
                continue
            strip = (inside_flow[-1][1] + 1) * (lh + 2) + PAD
        data_top = top + strip
        if y1 - data_top <= 0:
            continue

        if vertical:
            band = (x1 - x0) / spec.n_groups
            centers = [x0 + (i + 0.5) * band for i in range(spec.n_groups)]
            row_centers = centers
        else:
            band = (y1 - data_top) / spec.n_groups
            centers = [y1 - (i + 0.5) * band for i in range(spec.n_groups)]
            row_centers = [x0 + (t - vmin) / (vmax - vmin) * (x1 - x0) for t in ticks]
        row_boxes = _row_boxes(row_labels, row_centers, y1 + TICK + GAP, fs, rot)
        if _row_ok(row_boxes, 0, right_limit):
            chosen = (rot, x1, y1, data_top, strip, inside_flow, band, centers, row_boxes)
            break
    if chosen is None:
        return Discarded(spec.id, DISCARD_OVERLAP)
    rot, x1, y1, data_top, strip, inside_flow, band, centers, row_boxes = chosen

    plot = PixelBox(x0, top, x1 - x0, y1 - top)
    if plot.area < MIN_PLOT_FRACTION * CANVAS * CANVAS:
        return Discarded(spec.id, DISCARD_PLOT_AREA)

    if vertical:
        axis = ValueAxis(axis_kind, "y", vmin, vmax, _r(y1), _r(data_top), ticks)
        data_area = PixelBox(x0, data_top, x1 - x0, y1 - data_top)
        col_centers = [axis.pixel(t) for t in ticks]
    else:
        axis = ValueAxis(axis_kind, "x", vmin, vmax, _r(x0), _r(x1), ticks)
        data_area = PixelBox(x0, data_top, x1 - x0, y1 - data_top)
        col_centers = centers
    col_boxes = _column_boxes(col_labels, col_centers, x0 - TICK - GAP, fs)

    texts: list[TextBoxMeta] = [TextBoxMeta(spec.title_context.title, "title", title_box.rounded(), 0, title_fs)]
    if vertical:
        al_box = PixelBox(PAD, top + (y1 - top - al_ext.height) / 2, al_ext.width, al_ext.height)
        texts.append(TextBoxMeta(axis_label, "axis-label", al_box.rounded(), 90, fs))
        texts += [TextBoxMeta(t, "tick-label", b.rounded(), 0, fs) for t, b in zip(col_labels, col_boxes)]
        texts += [TextBoxMeta(t, cat_role, b.rounded(), rot, fs) for t, b in zip(row_labels, row_boxes)]
    else:
        al_y = max(b.bottom for b in row_boxes) + GAP
        al_box = PixelBox(x0 + (x1 - x0 - al_ext.width) / 2, al_y, al_ext.width, al_ext.height)
        texts.append(TextBoxMeta(axis_label, "axis-label", al_box.rounded(), 0, fs))
        texts += [TextBoxMeta(t, "tick-label", b.rounded(), rot, fs) for t, b in zip(row_labels, row_boxes)]
        texts += [TextBoxMeta(t, cat_role, b.rounded(), 0, fs) for t, b in zip(col_labels, col_boxes)]

    legends: list[LegendMeta] = []
    if spec.series_labels:
        placed = _place_legend(spec, legend_pos, legend_items, inside_flow, plot, lh, swatch)
        if placed is None:
            return Discarded(spec.id, DISCARD_OVERLAP)
        for s, (sw_box, txt_box) in enumerate(placed):
            rgb = spec.style.palette[s]
            legends.append(LegendMeta(s, sw_box.rounded(), rgb, series_names[s]))
            texts.append(TextBoxMeta(spec.series_labels[s], "legend-entry", txt_box.rounded(), 0, fs))

    bars = _place_bars(spec, axis, centers, band, series_names)

    meta = ChartMetadata(
        chart_id=spec.id,
        orientation=spec.orientation,
        grouping=spec.grouping,
        scale_kind=spec.scale.kind,
        plot_area=plot.rounded(),
        data_area=data_area.rounded(),
        value_axis=axis,
        category_centers=tuple(_r(c) for c in centers),
        band_width=_r(band),
        bars=tuple(bars),
        text_boxes=tuple(texts),
        legend_boxes=tuple(legends),
    )
    boxes = [t.box for t in texts]
    if any(not b.inside() for b in boxes):
        return Discarded(spec.id, DISCARD_OVERLAP)
    for i, a in enumerate(boxes):
        for b in boxes[i + 1 :]:
            if a.overlaps(b):
                return Discarded(spec.id, DISCARD_OVERLAP)
    return meta


def _place_legend(spec, pos, items, inside_flow, plot, lh, swatch):
    """Swatch and text boxes for each legend entry, or None when it cannot fit."""
    placed = []

    def entry(x, y):
        sw = PixelBox(x, y + (lh - swatch) / 2, swatch, swatch)
        tw = text_width(spec.series_labels[len(placed)], spec.style.font_size)
        return sw, PixelBox(x + swatch + 3, y, tw, lh)

    if pos == "right":
        x = CANVAS - RIGHT_BAND + PAD
        total = len(items) * (lh + 4)
        y = plot.y + max(0.0, (plot.height - total) / 2)
        for w, _ in items:
            if x + w > CANVAS - PAD:
                return None
            placed.append(entry(x, y))
            y += lh + 4
    elif pos == "below":
        flow = _flow(items, PAD, CANVAS - PAD, 10)
        if flow is None:
            return None
        rows = flow[-1][1] + 1
        row_w = [0.0] * rows
        for (w, _), (_, r) in zip(items, flow):
            row_w[r] += w + 10
        y0 = CANVAS - BELOW_BAND + PAD
        if y0 + rows * (lh + 2) > CANVAS - PAD:
            return None
        for (w, _), (fx, r) in zip(items, flow):
            shift = (CANVAS - 2 * PAD - (row_w[r] - 10)) / 2
            placed.append(entry(fx + shift, y0 + r * (lh + 2)))
    elif pos == "inside":
        for fx, r in inside_flow:
            placed.append(entry(fx, plot.y + PAD / 2 + r * (lh + 2)))
    return placed


def _place_bars(spec: ChartSpec, axis: ValueAxis, centers, band, names) -> list[BarMeta]:
    vertical = spec.orientation == "vertical"
    cluster = band * spec.style.bar_width_ratio
    slots = 1 if spec.is_stacked else spec.n_series
    width = cluster / slots
    bars = []
    for g, row in enumerate(spec.values):
        c = centers[g]
        # slot edges are rounded once, so neighbouring bars share exact edges;
        # horizontal charts count slots upwards, putting series 0 at the bottom
        if vertical:
            edges = [_r(c - cluster / 2 + k * width) for k in range(slots + 1)]
        else:
            edges = [_r(c + cluster / 2 - k * width) for k in range(slots + 1)]
        base = 0
        for s, v in enumerate(row):
            rgb = spec.style.palette[s]
            if spec.is_stacked:
                lo, hi = base, base + v
                base = hi
                k = 0
            else:
                lo, hi, k = 0, v, s
            box = None
            if v != 0:
                p0, p1 = sorted((_r(axis.pixel(lo)), _r(axis.pixel(hi))))
                a, b = sorted((edges[k], edges[k + 1]))
                if vertical:
                    box = PixelBox(a, p0, _r(b - a), _r(p1 - p0))
                else:
                    box = PixelBox(p0, a, _r(p1 - p0), _r(b - a))
            bars.append(BarMeta(g, s, v, box, rgb, names[s], spec.style.hatch))
    return bars


# --------------------------------------------------------------- validation


def validate_metadata(meta: ChartMetadata, tolerance: float = 0.5) -> list[str]:
    """Re-check the geometric invariants of a laid-out chart."""
    out = []
    if meta.canvas != (CANVAS, CANVAS):
        out.append(f"canvas is {meta.canvas}, expected {CANVAS}x{CANVAS}")
    if meta.plot_fraction < MIN_PLOT_FRACTION:
        out.append(f"plot area fraction {meta.plot_fraction:.3f} < {MIN_PLOT_FRACTION}")
    for t in meta.text_boxes:
        if not t.text:
            out.append("empty text box")
        if t.role not in TEXT_ROLES:
            out.append(f"unknown text role {t.role!r}")
        if t.rotation not in ROTATIONS:
            out.append(f"rotation {t.rotation} for {t.text!r}")
        if t.box.width <= 0 or t.box.height <= 0 or not t.box.inside(*meta.canvas):
            out.append(f"text box for {t.text!r} outside canvas or empty")
    tb = meta.text_boxes
    for i, a in enumerate(tb):
        for b in tb[i + 1 :]:
            if a.box.overlaps(b.box):
                out.append(f"text boxes {a.text!r} and {b.text!r} overlap")
    axis = meta.value_axis
    scale = axis.pixels_per_unit
    stacks: dict[int, int] = {}
    for bar in meta.bars:
        if bar.value == 0:
            if bar.box is not None:
                out.append(f"zero bar ({bar.group},{bar.series}) has a box")
            continue
        if bar.box is None:
            out.append(f"bar ({bar.group},{bar.series}) has no box")
            continue
        if bar.box.width <= 0 or bar.box.height <= 0 or not bar.box.inside(*meta.canvas):
            out.append(f"bar ({bar.group},{bar.series}) box outside canvas or empty")
        length = bar.box.height if axis.direction == "y" else bar.box.width
        if abs(length - abs(bar.value) * scale) > tolerance:
            out.append(f"bar ({bar.group},{bar.series}) length {length} not proportional to {bar.value}")
        if meta.grouping.startswith("stacked"):
            stacks[bar.group] = stacks.get(bar.group, 0) + bar.value
    by_group: dict[int, list[PixelBox]] = {}
    for bar in meta.bars:
        if bar.box is not None:
            by_group.setdefault(bar.group, []).append(bar.box)
    for g, boxes in by_group.items():
        for i, a in enumerate(boxes):
            for b in boxes[i + 1 :]:
                if a.overlaps(b):
                    out.append(f"bars in group {g} overlap")
    return out
