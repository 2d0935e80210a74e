"""Symbolic chart representation shared by every other module.

Values are exact integers.  Exponential charts store the decimal exponent
``k`` rather than ``10**k``; :meth:`DataScale.real` converts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .colors import RGB, hex_to_rgb, rgb_to_hex

SCALE_KINDS = ("linear", "percentage", "percentage-normalized", "exponential")
ORIENTATIONS = ("vertical", "horizontal")
GROUPINGS = ("single", "grouped", "stacked-additive", "stacked-fractional")
HATCHES = ("stripes", "dots", "circles", "cross-hatch", "stars", "grid")
LEGEND_POSITIONS = ("below", "right", "inside", "none")
THEMES = ("algorithm-accuracy", "object-preference", "item-sales", "generic")
SPLITS = ("train", "test-familiar", "test-novel")

LINEAR_MAX = 10
EXPONENT_MAX = 10


@dataclass(frozen=True)
class DataScale:
    kind: str
    allow_negative: bool = False
    allow_missing: bool = False

    @property
    def is_percentage(self) -> bool:
        return self.kind in ("percentage", "percentage-normalized")

    @property
    def is_log(self) -> bool:
        return self.kind == "exponential"

    def real(self, stored: int) -> int:
        """Numeric value of a stored entry."""
        return 10**stored if self.is_log else stored


@dataclass(frozen=True)
class ContextTheme:
    theme: str
    title: str
    value_axis_label: str


@dataclass(frozen=True)
class StyleSpec:
    grid_lines: bool
    hatch: str | None
    palette: tuple[RGB, ...]
    legend_position: str
    bar_width_ratio: float
    font_size: float
    label_rotation_policy: str = "auto"


@dataclass(frozen=True)
class ChartSpec:
    id: str
    title_context: ContextTheme
    orientation: str
    grouping: str
    scale: DataScale
    group_labels: tuple[str, ...]
    series_labels: tuple[str, ...]
    values: tuple[tuple[int, ...], ...]
    style: StyleSpec
    split: str

    @property
    def n_groups(self) -> int:
        return len(self.values)

    @property
    def n_series(self) -> int:
        return len(self.values[0]) if self.values else 0

    @property
    def is_single(self) -> bool:
        return self.grouping == "single"

    @property
    def is_stacked(self) -> bool:
        return self.grouping.startswith("stacked")

    @property
    def labels(self) -> frozenset[str]:
        return frozenset(self.group_labels) | frozenset(self.series_labels)

    def flat_values(self) -> list[int]:
        return [v for row in self.values for v in row]

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "split": self.split,
            "title_context": {
                "theme": self.title_context.theme,
                "title": self.title_context.title,
                "value_axis_label": self.title_context.value_axis_label,
            },
            "orientation": self.orientation,
            "grouping": self.grouping,
            "scale": {
                "kind": self.scale.kind,
                "allow_negative": self.scale.allow_negative,
                "allow_missing": self.scale.allow_missing,
            },
            "group_labels": list(self.group_labels),
            "series_labels": list(self.series_labels),
            "values": [list(row) for row in self.values],
            "style": {
                "grid_lines": self.style.grid_lines,
                "hatch": self.style.hatch,
                "palette": [rgb_to_hex(c) for c in self.style.palette],
                "legend_position": self.style.legend_position,
                "bar_width_ratio": self.style.bar_width_ratio,
                "label_rotation_policy": self.style.label_rotation_policy,
                "font_size": self.style.font_size,
            },
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> ChartSpec:
        tc, sc, st = d["title_context"], d["scale"], d["style"]
        return cls(
            id=d["id"],
            split=d["split"],
            title_context=ContextTheme(tc["theme"], tc["title"], tc["value_axis_label"]),
            orientation=d["orientation"],
            grouping=d["grouping"],
            scale=DataScale(sc["kind"], sc.get("allow_negative", False), sc.get("allow_missing", False)),
            group_labels=tuple(d["group_labels"]),
            series_labels=tuple(d["series_labels"]),
            values=tuple(tuple(row) for row in d["values"]),
            style=StyleSpec(
                grid_lines=st["grid_lines"],
                hatch=st["hatch"],
                palette=tuple(hex_to_rgb(c) for c in st["palette"]),
                legend_position=st["legend_position"],
                bar_width_ratio=st["bar_width_ratio"],
                font_size=st["font_size"],
                label_rotation_policy=st.get("label_rotation_policy", "auto"),
            ),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> ChartSpec:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Violation:
    field: str
    rule: str

    def __str__(self) -> str:
        return f"{self.field}: {self.rule}"


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def rules(self) -> list[str]:
        return [v.rule for v in self.violations]


def _check_values(spec: ChartSpec, out: list[Violation]) -> None:
    kind = spec.scale.kind
    for g, row in enumerate(spec.values):
        for s, v in enumerate(row):
            where = f"values[{g}][{s}]"
            if not isinstance(v, int) or isinstance(v, bool):
                out.append(Violation(where, "value not an integer"))
                continue
            if v == 0 and kind != "exponential" and not spec.scale.allow_missing:
                out.append(Violation(where, "zero without missing-bar flag"))
            if v < 0 and not (kind == "linear" and spec.scale.allow_negative):
                out.append(Violation(where, "negative without negative flag"))
            if kind == "linear" and abs(v) > LINEAR_MAX:
                out.append(Violation(where, "linear out of range"))
            elif kind == "percentage" and (v < 0 or v > 100 or v % 10):
                out.append(Violation(where, "percentage out of range"))
            elif kind == "percentage-normalized" and (v < 0 or v > 100):
                out.append(Violation(where, "percentage out of range"))
            elif kind == "exponential" and not 0 <= v <= EXPONENT_MAX:
                out.append(Violation(where, "exponent out of range"))
    if kind == "percentage-normalized":
        for g, row in enumerate(spec.values):
            if sum(row) != 100:
                out.append(Violation(f"values[{g}]", "group sum != 100"))
    if spec.values and all(v == 0 for v in spec.flat_values()) and kind != "exponential":
        out.append(Violation("values", "no visible bars"))


def validate_spec(spec: ChartSpec, vocab=None) -> ValidationResult:
    """Check every ChartSpec invariant; violations are returned, never raised.

    When ``vocab`` (a :class:`barqa.sampler.Vocabulary`) is given, labels are
    also checked against the word list of the chart's split.
    """
    out: list[Violation] = []
    if spec.orientation not in ORIENTATIONS:
        out.append(Violation("orientation", "unknown orientation"))
    if spec.grouping not in GROUPINGS:
        out.append(Violation("grouping", "unknown grouping"))
    if spec.scale.kind not in SCALE_KINDS:
        out.append(Violation("scale.kind", "unknown scale kind"))
        return ValidationResult(tuple(out))
    if spec.split not in SPLITS:
        out.append(Violation("split", "unknown split"))
    if spec.title_context.theme not in THEMES:
        out.append(Violation("title_context.theme", "unknown theme"))

    if spec.n_groups < 1 or spec.n_series < 1:
        out.append(Violation("values", "empty value matrix"))
        return ValidationResult(tuple(out))
    if any(len(row) != spec.n_series for row in spec.values):
        out.append(Violation("values", "ragged value matrix"))
        return ValidationResult(tuple(out))
    if len(spec.group_labels) != spec.n_groups:
        out.append(Violation("group_labels", "label count != group count"))
    # single-series charts carry no series label: the bars are the groups
    want_series = 0 if spec.is_single else spec.n_series
    if spec.is_single and spec.n_series != 1:
        out.append(Violation("values", "single grouping needs one series"))
    if len(spec.series_labels) != want_series:
        out.append(Violation("series_labels", "label count != series count"))

    words = list(spec.group_labels) + list(spec.series_labels)
    if len(set(words)) != len(words):
        out.append(Violation("labels", "label reused within chart"))
    for w in words:
        if not (w.isascii() and w.isalpha() and w.islower()):
            out.append(Violation("labels", f"label {w!r} not lowercase alphabetic"))
    if vocab is not None and spec.split in SPLITS:
        allowed = vocab.words_for(spec.split)
        if any(w not in allowed for w in words):
            out.append(Violation("labels", "label outside split vocabulary"))

    if spec.is_stacked:
        if spec.n_series < 2:
            out.append(Violation("grouping", "stacked needs more than one series"))
        if spec.grouping == "stacked-additive" and spec.scale.kind != "linear":
            out.append(Violation("grouping", "additive stacking needs linear scale"))
        if spec.grouping == "stacked-fractional" and spec.scale.kind != "percentage-normalized":
            out.append(Violation("grouping", "fractional stacking needs normalized percentage"))
        if spec.scale.allow_negative:
            out.append(Violation("scale", "negative values on stacked chart"))
    if spec.scale.allow_negative and spec.scale.kind != "linear":
        out.append(Violation("scale", "negative flag on non-linear scale"))
    if spec.scale.allow_missing and spec.scale.kind == "exponential":
        out.append(Violation("scale", "missing flag on exponential scale"))

    _check_values(spec, out)

    st = spec.style
    if st.hatch is not None and st.hatch not in HATCHES:
        out.append(Violation("style.hatch", "unknown hatch pattern"))
    if len(st.palette) < spec.n_series:
        out.append(Violation("style.palette", "palette shorter than series count"))
    if st.legend_position not in LEGEND_POSITIONS:
        out.append(Violation("style.legend_position", "unknown legend position"))
    if spec.is_single and st.legend_position != "none":
        out.append(Violation("style.legend_position", "legend on single-series chart"))
    if not spec.is_single and st.legend_position == "none":
        out.append(Violation("style.legend_position", "multi-series chart without legend"))
    if not 0 < st.bar_width_ratio <= 1:
        out.append(Violation("style.bar_width_ratio", "ratio outside (0, 1]"))
    if st.font_size <= 0:
        out.append(Violation("style.font_size", "non-positive font size"))
    return ValidationResult(tuple(out))


def answer_value_format(v: int, scale: DataScale) -> str:
    """Render a real value as an answer string: digits, or ``10^k`` on log scales."""
    if isinstance(v, bool) or not isinstance(v, int):
        if isinstance(v, float) and v.is_integer():
            v = int(v)
        else:
            raise ValueError(f"{v!r} is not an integer value")
    if scale.is_log:
        if v < 1:
            raise ValueError(f"{v} is not a power of ten")
        k, rest = 0, v
        while rest % 10 == 0:
            rest //= 10
            k += 1
        if rest != 1:
            raise ValueError(f"{v} is not a power of ten")
        return f"10^{k}"
    return str(v)
