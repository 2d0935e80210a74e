"""Question templates, the symbolic answer oracle and answer balancing.

Every template has one stable id (S1..S7, D1..D8, R1..R10).  Slot values
chosen at instantiation are kept on the record, so answers can be recomputed
from the value table alone.
"""

from __future__ import annotations

import json
import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Iterable

from .colors import default_table, name_color
from .layout import ChartMetadata, PixelBox
from .model import ChartSpec, answer_value_format
from .sampler import Stream

FAMILIES = ("structure", "data-retrieval", "reasoning")
ANSWER_KINDS = ("yes-no", "count-word", "value", "label", "color-dependent-label")

_COUNT_WORDS = (
    "zero one two three four five six seven eight nine ten eleven twelve thirteen "
    "fourteen fifteen sixteen seventeen eighteen nineteen twenty"
).split()
ORDINALS = ("first", "second", "third", "fourth", "fifth", "sixth", "seventh", "eighth", "ninth", "tenth")


@dataclass(frozen=True)
class Template:
    id: str
    family: str
    answer_kind: str
    pattern: str
    balance: str = "none"  # "yes-no", "top-two" or "none"


TEMPLATES: tuple[Template, ...] = (
    Template("S1", "structure", "count-word", "How many bars are there?", "top-two"),
    Template("S2", "structure", "count-word", "How many groups of bars are there?", "top-two"),
    Template("S3", "structure", "count-word", "How many bars are there per group?", "top-two"),
    Template("S4", "structure", "yes-no", "Does the chart contain any negative values?", "yes-no"),
    Template("S5", "structure", "yes-no", "Are the bars horizontal?", "yes-no"),
    Template("S6", "structure", "yes-no", "Does the chart contain stacked bars?", "yes-no"),
    Template("S7", "structure", "yes-no", "Is each bar a single solid color without patterns?", "yes-no"),
    Template("D1", "data-retrieval", "yes-no", "Are the values in the chart presented in a logarithmic scale?", "yes-no"),
    Template("D2", "data-retrieval", "yes-no", "Are the values in the chart presented in a percentage scale?", "yes-no"),
    Template("D3", "data-retrieval", "value", "What is the value of {label}?"),
    Template("D4", "data-retrieval", "label", "What is the label of the {ordinal} bar from the {side}?"),
    Template("D5", "data-retrieval", "label", "What is the label of the {ordinal} group of bars from the {side}?"),
    Template("D6", "data-retrieval", "label", "What is the label of the {ordinal} bar from the {side} in each group?"),
    Template("D7", "data-retrieval", "color-dependent-label", "What element does the {color} color represent?"),
    Template("D8", "data-retrieval", "value", "What is the value of {label} in {series}?"),
    Template("R1", "reasoning", "label", "Which bar has the largest value?"),
    Template("R2", "reasoning", "count-word", "How many bars have values larger than {n}?"),
    Template("R3", "reasoning", "value", "What is the difference between the largest and the smallest value in the chart?"),
    Template("R4", "reasoning", "count-word", "How many groups of bars have all their values {cmp} than {n}?"),
    Template("R5", "reasoning", "value", "What is the sum of the values of {label1} and {label2}?"),
    Template("R6", "reasoning", "yes-no", "Is the value of {label1} smaller than the value of {label2}?", "yes-no"),
    Template("R7", "reasoning", "count-word", "How many groups of bars contain at least one bar with value {cmp} than {n}?"),
    Template("R8", "reasoning", "label", "Which group of bars contains the largest individual value?"),
    Template("R9", "reasoning", "label", "Which group of bars has the {extreme} summed value?"),
    Template("R10", "reasoning", "yes-no", "Is the value of {label1} in {series1} {cmp} than the value of {label2} in {series2}?", "yes-no"),
)
TEMPLATE_BY_ID = {t.id: t for t in TEMPLATES}

# Theme-specific wording.  Keys: generic, algorithm-accuracy, object-percent,
# object-people, item-sales; a missing key falls back to the template pattern.
# A dict value is keyed by the slot variant (comparison direction or extreme).
PHRASES: dict[str, dict[str, Any]] = {
    "S2": {"stacked": "How many stacks of bars are there?"},
    "D3": {
        "algorithm-accuracy": "What is the accuracy of the algorithm {label}?",
        "object-percent": "What percentage of people prefer the object {label}?",
        "object-people": "How many people prefer the object {label}?",
        "item-sales": "How many units of the item {label} were sold?",
    },
    "D7": {
        "algorithm-accuracy": "What dataset does the {color} color represent?",
        "object-percent": "What category does the {color} color represent?",
        "object-people": "What category does the {color} color represent?",
        "item-sales": "What store does the {color} color represent?",
    },
    "D8": {
        "algorithm-accuracy": "What is the accuracy of the algorithm {label} in the dataset {series}?",
        "object-percent": "What percentage of people prefer the object {label} in the category {series}?",
        "object-people": "How many people prefer the object {label} in the category {series}?",
        "item-sales": "How many units of the item {label} were sold in the store {series}?",
    },
    "R1": {
        "algorithm-accuracy": "Which algorithm has the highest accuracy?",
        "object-percent": "Which object is the most preferred?",
        "object-people": "Which object is the most preferred?",
        "item-sales": "Which item sold the most units?",
    },
    "R2": {
        "algorithm-accuracy": "How many algorithms have accuracies higher than {n}?",
        "object-percent": "How many objects are preferred by more than {n} percent of people?",
        "object-people": "How many objects are preferred by more than {n} people?",
        "item-sales": "How many items sold more than {n} units?",
    },
    "R3": {
        "algorithm-accuracy": "What is the difference between the highest and the lowest accuracy in the chart?",
        "object-percent": "What is the difference between the largest and the smallest percentage of people in the chart?",
        "object-people": "What is the difference between the largest and the smallest number of people in the chart?",
        "item-sales": "What is the difference between the largest and the smallest number of units sold in the chart?",
    },
    "R4": {
        "generic": {
            "above": "How many groups of bars have all their values larger than {n}?",
            "below": "How many groups of bars have all their values smaller than {n}?",
        },
        "algorithm-accuracy": {
            "above": "How many algorithms have accuracies higher than {n} in every dataset?",
            "below": "How many algorithms have accuracies lower than {n} in every dataset?",
        },
        "object-percent": {
            "above": "How many objects are preferred by more than {n} percent of people in every category?",
            "below": "How many objects are preferred by less than {n} percent of people in every category?",
        },
        "object-people": {
            "above": "How many objects are preferred by more than {n} people in every category?",
            "below": "How many objects are preferred by less than {n} people in every category?",
        },
        "item-sales": {
            "above": "How many items sold more than {n} units in every store?",
            "below": "How many items sold less than {n} units in every store?",
        },
    },
    "R5": {
        "algorithm-accuracy": "What is the sum of the accuracies of the algorithms {label1} and {label2}?",
        "object-percent": "What is the sum of the percentages of people preferring the objects {label1} and {label2}?",
        "object-people": "How many people in total prefer the objects {label1} and {label2}?",
        "item-sales": "How many units of items {label1} and {label2} were sold?",
    },
    "R6": {
        "algorithm-accuracy": "Is the accuracy of the algorithm {label1} lower than that of the algorithm {label2}?",
        "object-percent": "Is the object {label1} less preferred than the object {label2}?",
        "object-people": "Is the object {label1} less preferred than the object {label2}?",
        "item-sales": "Did the item {label1} sell fewer units than the item {label2}?",
    },
    "R7": {
        "generic": {
            "above": "How many groups of bars contain at least one bar with value greater than {n}?",
            "below": "How many groups of bars contain at least one bar with value smaller than {n}?",
        },
        "algorithm-accuracy": {
            "above": "How many algorithms have accuracy higher than {n} in at least one dataset?",
            "below": "How many algorithms have accuracy lower than {n} in at least one dataset?",
        },
        "object-percent": {
            "above": "How many objects are preferred by more than {n} percent of people in at least one category?",
            "below": "How many objects are preferred by less than {n} percent of people in at least one category?",
        },
        "object-people": {
            "above": "How many objects are preferred by more than {n} people in at least one category?",
            "below": "How many objects are preferred by less than {n} people in at least one category?",
        },
        "item-sales": {
            "above": "How many items sold more than {n} units in at least one store?",
            "below": "How many items sold less than {n} units in at least one store?",
        },
    },
    "R8": {
        "algorithm-accuracy": "Which algorithm has the highest accuracy for any dataset?",
        "object-percent": "Which object is the most preferred in any category?",
        "object-people": "Which object is the most preferred in any category?",
        "item-sales": "Which item sold the most units in any store?",
    },
    "R9": {
        "generic": {
            "max": "Which group of bars has the largest summed value?",
            "min": "Which group of bars has the smallest summed value?",
        },
        "algorithm-accuracy": {
            "max": "Which algorithm has the highest accuracy summed across all the datasets?",
            "min": "Which algorithm has the lowest accuracy summed across all the datasets?",
        },
        "object-percent": {
            "max": "Which object is preferred by the most people summed across all the categories?",
            "min": "Which object is preferred by the fewest people summed across all the categories?",
        },
        "object-people": {
            "max": "Which object is preferred by the most people summed across all the categories?",
            "min": "Which object is preferred by the fewest people summed across all the categories?",
        },
        "item-sales": {
            "max": "Which item sold the most units summed across all the stores?",
            "min": "Which item sold the fewest units summed across all the stores?",
        },
    },
    "R10": {
        "generic": {
            "above": "Is the value of {label1} in {series1} larger than the value of {label2} in {series2}?",
            "below": "Is the value of {label1} in {series1} smaller than the value of {label2} in {series2}?",
        },
        "algorithm-accuracy": {
            "above": "Is the accuracy of the algorithm {label1} in the dataset {series1} larger than "
            "the accuracy of the algorithm {label2} in the dataset {series2}?",
            "below": "Is the accuracy of the algorithm {label1} in the dataset {series1} smaller than "
            "the accuracy of the algorithm {label2} in the dataset {series2}?",
        },
        "object-percent": {
            "above": "Is the object {label1} in the category {series1} more preferred than the object {label2} in the category {series2}?",
            "below": "Is the object {label1} in the category {series1} less preferred than the object {label2} in the category {series2}?",
        },
        "object-people": {
            "above": "Is the object {label1} in the category {series1} more preferred than the object {label2} in the category {series2}?",
            "below": "Is the object {label1} in the category {series1} less preferred than the object {label2} in the category {series2}?",
        },
        "item-sales": {
            "above": "Did the item {label1} in the store {series1} sell more units than the item {label2} in the store {series2}?",
            "below": "Did the item {label1} in the store {series1} sell fewer units than the item {label2} in the store {series2}?",
        },
    },
}
# generic direction words for patterns with a {cmp} slot
_CMP_WORD = {"above": "larger", "below": "smaller"}
_EXTREME_WORD = {"max": "largest", "min": "smallest"}


@dataclass
class QARecord:
    question_id: str
    chart_id: str
    template_id: str
    question: str
    answer: str
    family: str
    chart_specific_question: bool = False
    chart_specific_answer: bool = False
    answer_box: PixelBox | None = None
    split: str = ""
    slots: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "question_id": self.question_id,
            "chart_id": self.chart_id,
            "split": self.split,
            "template_id": self.template_id,
            "family": self.family,
            "question": self.question,
            "answer": self.answer,
            "chart_specific_question": self.chart_specific_question,
            "chart_specific_answer": self.chart_specific_answer,
            "answer_box": self.answer_box.to_dict() if self.answer_box else None,
            "slots": self.slots,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> QARecord:
        box = d.get("answer_box")
        return cls(
            question_id=d["question_id"],
            chart_id=d["chart_id"],
            template_id=d["template_id"],
            question=d["question"],
            answer=d["answer"],
            family=d["family"],
            chart_specific_question=bool(d.get("chart_specific_question", False)),
            chart_specific_answer=bool(d.get("chart_specific_answer", False)),
            answer_box=PixelBox.from_dict(box) if box else None,
            split=d.get("split", ""),
            slots=dict(d.get("slots", {})),
        )


def count_to_word(n: int) -> str:
    """English word for counts up to twenty; larger counts fall back to digits."""
    if n < 0:
        raise ValueError("count must be non-negative")
    return _COUNT_WORDS[n] if n <= 20 else str(n)


def tokenize(text: str) -> list[str]:
    """Word tokens of a question, punctuation dropped, case kept."""
    return re.findall(r"[A-Za-z0-9^]+", text)


def _theme_key(spec: ChartSpec) -> str:
    theme = spec.title_context.theme
    if theme == "object-preference":
        return "object-percent" if spec.scale.is_percentage else "object-people"
    return theme


def phrase(template: Template, spec: ChartSpec, variant: str | None = None) -> str:
    """Format string for ``template`` under the chart's theme."""
    table = PHRASES.get(template.id, {})
    if template.id == "S2" and spec.is_stacked:
        return table["stacked"]
    entry = table.get(_theme_key(spec), table.get("generic", template.pattern))
    if isinstance(entry, dict):
        entry = entry[variant]
    return entry


# ------------------------------------------------------------- data helpers


def _reals(spec: ChartSpec) -> list[list[int]]:
    return [[spec.scale.real(v) for v in row] for row in spec.values]


def _fmt(v: int, spec: ChartSpec) -> str:
    return answer_value_format(v, spec.scale)


def _has_zero(spec: ChartSpec) -> bool:
    return any(v == 0 for v in spec.flat_values()) and not spec.scale.is_log


def _side(spec: ChartSpec) -> str:
    return "left" if spec.orientation == "vertical" else "bottom"


def _group_sums(spec: ChartSpec) -> list[int]:
    return [sum(row) for row in _reals(spec)]


def _unique_extreme(values: list[int], fn) -> int | None:
    best = fn(values)
    hits = [i for i, v in enumerate(values) if v == best]
    return hits[0] if len(hits) == 1 else None


def _threshold_grid(spec: ChartSpec) -> list[int]:
    """Candidate thresholds in stored units, restricted to the data's range."""
    if spec.scale.is_log:
        grid = range(0, 11)
    elif spec.scale.is_percentage:
        grid = range(0, 101, 10)
    else:
        grid = range(-10, 11)
    vals = spec.flat_values()
    return [g for g in grid if min(vals) <= g <= max(vals)]


def _count_single_above(spec: ChartSpec, n: int) -> int:
    return sum(1 for row in spec.values if row[0] > n)


def _count_groups(spec: ChartSpec, n: int, direction: str, quantifier) -> int:
    def hit(v):
        return v > n if direction == "above" else v < n

    return sum(1 for row in spec.values if quantifier(hit(v) for v in row))


def _pick_threshold(rng: Stream, spec: ChartSpec, counter) -> int:
    """Grid threshold where answers of "none" or "all" make up at most half the pool."""
    grid = _threshold_grid(spec)
    total = spec.n_groups
    good = [g for g in grid if 0 < counter(g) < total]
    bad = [g for g in grid if g not in good]
    if not good:
        return rng.choice(bad)
    pool = good + rng.sample(bad, min(len(bad), len(good)))
    return rng.choice(pool)


def _distinct_color_names(meta: ChartMetadata | None, spec: ChartSpec) -> list[str] | None:
    if meta is not None and meta.legend_boxes:
        names = [lg.color_name for lg in sorted(meta.legend_boxes, key=lambda lg: lg.series)]
    else:
        names = [name_color(c) for c in spec.style.palette[: spec.n_series]]
    return names if len(set(names)) == len(names) else None


# ------------------------------------------------------------ applicability


def applicable_templates(spec: ChartSpec, meta: ChartMetadata | None = None) -> list[Template]:
    """Templates whose referents exist and whose answers are well defined."""
    single = spec.is_single
    grouped = spec.grouping == "grouped"
    log = spec.scale.is_log
    ok = {
        "S1": not spec.is_stacked,
        "S2": not single,
        "S3": grouped,
        "S4": True,
        "S5": True,
        "S6": True,
        "S7": True,
        "D1": True,
        "D2": True,
        "D3": single,
        "D4": single and not _has_zero(spec),
        "D5": not single,
        "D6": grouped and not _has_zero(spec),
        "D7": not single and _distinct_color_names(meta, spec) is not None,
        "D8": not single,
        "R1": single and _unique_extreme([r[0] for r in spec.values], max) is not None,
        "R2": single,
        "R3": not log,
        "R4": not single,
        "R5": single and not log,
        "R6": single,
        "R7": not single,
        "R8": not single and _unique_group_of_max(spec) is not None,
        "R9": not single and _r9_directions(spec) != [],
        "R10": not single,
    }
    return [t for t in TEMPLATES if ok[t.id]]


def _unique_group_of_max(spec: ChartSpec) -> int | None:
    best = max(spec.flat_values())
    groups = [g for g, row in enumerate(spec.values) if best in row]
    return groups[0] if len(groups) == 1 else None


def _r9_directions(spec: ChartSpec) -> list[str]:
    sums = _group_sums(spec)
    out = []
    if _unique_extreme(sums, max) is not None:
        out.append("max")
    if _unique_extreme(sums, min) is not None:
        out.append("min")
    return out


# ------------------------------------------------------------------- oracle


def answer_oracle(template: Template | str, spec: ChartSpec, slots: dict[str, Any]) -> str:
    """Ground-truth answer computed from the value table and resolved slots."""
    tid = template if isinstance(template, str) else template.id
    vals = spec.values
    gl, sl = spec.group_labels, spec.series_labels
    flat = spec.flat_values()
    yes = {True: "yes", False: "no"}

    if tid == "S1":
        return count_to_word(sum(1 for v in flat if spec.scale.is_log or v != 0))
    if tid == "S2":
        return count_to_word(spec.n_groups)
    if tid == "S3":
        return count_to_word(spec.n_series)
    if tid == "S4":
        return yes[any(v < 0 for v in flat)]
    if tid == "S5":
        return yes[spec.orientation == "horizontal"]
    if tid == "S6":
        return yes[spec.is_stacked]
    if tid == "S7":
        return yes[spec.style.hatch is None]
    if tid == "D1":
        return yes[spec.scale.is_log]
    if tid == "D2":
        return yes[spec.scale.is_percentage]
    if tid == "D3":
        return _fmt(spec.scale.real(vals[gl.index(slots["label"])][0]), spec)
    if tid == "D4":
        return gl[slots["position"] - 1]
    if tid == "D5":
        return gl[slots["position"] - 1]
    if tid == "D6":
        return sl[slots["position"] - 1]
    if tid == "D7":
        return sl[slots["series_index"]]
    if tid == "D8":
        return _fmt(spec.scale.real(vals[gl.index(slots["label"])][sl.index(slots["series"])]), spec)
    if tid == "R1":
        col = [row[0] for row in vals]
        return gl[col.index(max(col))]
    if tid == "R2":
        return count_to_word(_count_single_above(spec, slots["n"]))
    if tid == "R3":
        reals = [spec.scale.real(v) for v in flat]
        return _fmt(max(reals) - min(reals), spec)
    if tid == "R4":
        return count_to_word(_count_groups(spec, slots["n"], slots["direction"], all))
    if tid == "R5":
        a = vals[gl.index(slots["label1"])][0]
        b = vals[gl.index(slots["label2"])][0]
        return _fmt(spec.scale.real(a) + spec.scale.real(b), spec)
    if tid == "R6":
        a = vals[gl.index(slots["label1"])][0]
        b = vals[gl.index(slots["label2"])][0]
        return yes[a < b]
    if tid == "R7":
        return count_to_word(_count_groups(spec, slots["n"], slots["direction"], any))
    if tid == "R8":
        return gl[_unique_group_of_max(spec)]
    if tid == "R9":
        sums = _group_sums(spec)
        return gl[sums.index(max(sums) if slots["extreme"] == "max" else min(sums))]
    if tid == "R10":
        a = vals[gl.index(slots["label1"])][sl.index(slots["series1"])]
        b = vals[gl.index(slots["label2"])][sl.index(slots["series2"])]
        return yes[a > b if slots["direction"] == "above" else a < b]
    raise KeyError(f"unknown template {tid!r}")


# ------------------------------------------------------------ instantiation


def _slots(template: Template, spec: ChartSpec, meta, rng: Stream) -> tuple[dict[str, Any], dict[str, str]]:
    """Resolved slots (stored on the record) and their surface strings."""
    tid = template.id
    gl, sl = spec.group_labels, spec.series_labels
    slots: dict[str, Any] = {}
    text: dict[str, str] = {}
    if tid in ("D4", "D5", "D6"):
        count = spec.n_series if tid == "D6" else spec.n_groups
        slots["position"] = rng.integer(1, count)
        text["ordinal"] = ORDINALS[slots["position"] - 1]
        text["side"] = _side(spec)
    elif tid == "D3":
        slots["label"] = rng.choice(gl)
    elif tid == "D7":
        names = _distinct_color_names(meta, spec)
        slots["series_index"] = rng.below(spec.n_series)
        slots["color"] = names[slots["series_index"]]
    elif tid == "D8":
        slots["label"], slots["series"] = rng.choice(gl), rng.choice(sl)
    elif tid == "R2":
        slots["n"] = _pick_threshold(rng, spec, lambda n: _count_single_above(spec, n))
    elif tid in ("R4", "R7"):
        direction = rng.choice(("above", "below"))
        quant = all if tid == "R4" else any
        slots["direction"] = direction
        slots["n"] = _pick_threshold(rng, spec, lambda n: _count_groups(spec, n, direction, quant))
        text["cmp"] = _CMP_WORD[direction]
    elif tid in ("R5", "R6"):
        slots["label1"], slots["label2"] = rng.sample(gl, 2)
    elif tid == "R9":
        slots["extreme"] = rng.choice(_r9_directions(spec))
        text["extreme"] = _EXTREME_WORD[slots["extreme"]]
    elif tid == "R10":
        cells = [(g, s) for g in range(spec.n_groups) for s in range(spec.n_series)]
        (g1, s1), (g2, s2) = rng.sample(cells, 2)
        slots.update(label1=gl[g1], series1=sl[s1], label2=gl[g2], series2=sl[s2])
        slots["direction"] = rng.choice(("above", "below"))
        text["cmp"] = _CMP_WORD[slots["direction"]]
    for k, v in slots.items():
        if k == "n":
            text[k] = _fmt(spec.scale.real(v), spec)
        elif isinstance(v, str) and k not in ("direction", "extreme"):
            text.setdefault(k, v)
    return slots, text


def _variant(slots: dict[str, Any]) -> str | None:
    return slots.get("direction") or slots.get("extreme")


def classify(record: QARecord, spec: ChartSpec) -> tuple[str, bool, bool]:
    """Family plus chart-specific question/answer flags by exact label membership."""
    labels = spec.labels
    family = TEMPLATE_BY_ID[record.template_id].family
    csq = any(tok in labels for tok in tokenize(record.question))
    csa = record.answer in labels
    return family, csq, csa


def instantiate(template: Template, spec: ChartSpec, meta: ChartMetadata | None, rng: Stream) -> QARecord:
    """Phrase ``template`` for this chart and attach its oracle answer."""
    slots, text = _slots(template, spec, meta, rng)
    question = phrase(template, spec, _variant(slots)).format(**text)
    answer = answer_oracle(template, spec, slots)
    rec = QARecord(
        question_id=f"{spec.id}-{template.id}",
        chart_id=spec.id,
        template_id=template.id,
        question=question,
        answer=answer,
        family=template.family,
        split=spec.split,
        slots=slots,
    )
    rec.family, rec.chart_specific_question, rec.chart_specific_answer = classify(rec, spec)
    if rec.chart_specific_answer and meta is not None:
        rec.answer_box = meta.box_for_label(answer)
    return rec


def generate_questions(spec: ChartSpec, meta: ChartMetadata | None, rng: Stream) -> list[QARecord]:
    """One record per applicable template, in catalog order."""
    return [instantiate(t, spec, meta, rng) for t in applicable_templates(spec, meta)]


# ---------------------------------------------------------------- balancing


def balance(records: Iterable[QARecord], rng: Stream) -> list[QARecord]:
    """Drop random records until balanced answers are equally frequent.

    Yes/no templates end with exactly as many "yes" as "no" records (the
    larger class is cut down).  Count templates marked "top-two" get their two
    most frequent answers equalized the same way.  Groups are keyed by
    (split, template) and visited in sorted order, so the result depends only
    on the input records and the stream.
    """
    records = list(records)
    groups: dict[tuple[str, str], list[int]] = defaultdict(list)
    for i, r in enumerate(records):
        groups[(r.split, r.template_id)].append(i)
    drop: set[int] = set()
    for key in sorted(groups):
        template = TEMPLATE_BY_ID[key[1]]
        if template.balance == "none":
            continue
        by_answer: dict[str, list[int]] = defaultdict(list)
        for i in groups[key]:
            by_answer[records[i].answer].append(i)
        if template.balance == "yes-no":
            a, b = by_answer.get("yes", []), by_answer.get("no", [])
        else:
            ranked = sorted(by_answer.items(), key=lambda kv: (-len(kv[1]), kv[0]))
            if len(ranked) < 2:
                continue
            a, b = ranked[0][1], ranked[1][1]
        big, small = (a, b) if len(a) >= len(b) else (b, a)
        excess = len(big) - len(small)
        if excess:
            drop.update(rng.sample(sorted(big), excess))
    return [r for i, r in enumerate(records) if i not in drop]


# ------------------------------------------------------------------ catalog


def _phrase_strings() -> list[str]:
    out = [t.pattern for t in TEMPLATES]
    for table in PHRASES.values():
        for entry in table.values():
            out.extend(entry.values() if isinstance(entry, dict) else [entry])
    return out


def template_vocabulary() -> frozenset[str]:
    """Every token a question can contain that is not a chart label or number."""
    words = set()
    for s in _phrase_strings():
        words.update(tokenize(re.sub(r"\{[a-z0-9]+\}", " ", s)))
    words.update(ORDINALS)
    words.update(("left", "bottom", "larger", "smaller", "largest", "smallest"))
    words.update(default_table().names)
    return frozenset(words)


def template_catalog() -> list[dict[str, Any]]:
    """Stable, serializable description of all templates and their phrasings."""
    return [
        {
            "id": t.id,
            "family": t.family,
            "answer_kind": t.answer_kind,
            "balance": t.balance,
            "pattern": t.pattern,
            "phrasings": PHRASES.get(t.id, {}),
        }
        for t in TEMPLATES
    ]
