"""Accuracy breakdowns and box-localization tables for QA predictions."""

from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

from .layout import PixelBox
from .questions import QARecord

MODES = ("exact", "edit1")
EDIT1_SCOPES = ("all", "chart-specific")
CELLS = (
    "structure",
    "data-retrieval",
    "reasoning",
    "overall",
    "chart-specific-question",
    "generic-question",
    "chart-specific-answer",
    "generic-answer",
)
IOU_THRESHOLDS = (0.2, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)
DISTANCE_THRESHOLDS = (1, 8, 16, 32, 64)


class ScoringError(ValueError):
    """Bad input; ``line`` is the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance with unit costs, case-sensitive."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def normalize(answer: str) -> str:
    return answer.strip().lower()


@dataclass(frozen=True)
class Prediction:
    question_id: str
    answer: str
    predicted_box: PixelBox | None = None

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> Prediction:
        box = d.get("predicted_box")
        return cls(str(d["question_id"]), str(d["answer"]), PixelBox.from_dict(box) if box else None)

    def to_dict(self) -> dict[str, Any]:
        return {
            "question_id": self.question_id,
            "answer": self.answer,
            "predicted_box": self.predicted_box.to_dict() if self.predicted_box else None,
        }


@dataclass
class Cell:
    correct: int = 0
    total: int = 0

    @property
    def accuracy(self) -> float:
        return round(100.0 * self.correct / self.total, 2) if self.total else 0.0


@dataclass
class EvalReport:
    mode: str
    edit1_scope: str
    cells: dict[str, dict[str, Cell]]
    missing: list[str] = field(default_factory=list)

    def accuracy(self, cell: str, split: str = "all") -> float:
        return self.cells[split][cell].accuracy

    def to_dict(self) -> dict[str, Any]:
        return {
            "mode": self.mode,
            "edit1_scope": self.edit1_scope,
            "splits": {
                split: {
                    name: {"correct": c.correct, "total": c.total, "accuracy": c.accuracy}
                    for name, c in cells.items()
                }
                for split, cells in self.cells.items()
            },
            "missing": list(self.missing),
        }

    def to_text(self) -> str:
        short = {"structure": "Struct", "data-retrieval": "Data", "reasoning": "Reason", "overall": "Overall",
                 "chart-specific-question": "CS-Q", "generic-question": "Gen-Q",
                 "chart-specific-answer": "CS-A", "generic-answer": "Gen-A"}
        head = f"{'split':<14}" + "".join(f"{short[c]:>9}" for c in CELLS) + f"{'n':>8}"
        lines = [f"mode: {self.mode}" + (f" (scope: {self.edit1_scope})" if self.mode == "edit1" else ""), head]
        for split, cells in self.cells.items():
            row = f"{split:<14}" + "".join(
                f"{cells[c].accuracy:>9.2f}" if cells[c].total else f"{'-':>9}" for c in CELLS
            )
            lines.append(row + f"{cells['overall'].total:>8}")
        if self.missing:
            shown = ", ".join(self.missing[:10]) + (" ..." if len(self.missing) > 10 else "")
            lines.append(f"missing predictions ({len(self.missing)}, counted wrong): {shown}")
        return "\n".join(lines) + "\n"


def is_correct(pred: str, gold: QARecord, mode: str = "exact", edit1_scope: str = "all") -> bool:
    p, g = normalize(pred), normalize(gold.answer)
    if p == g:
        return True
    if mode == "edit1" and (edit1_scope == "all" or gold.chart_specific_answer):
        return edit_distance(p, g) <= 1
    return False


def _index_predictions(preds: Iterable[Prediction], gold_ids: set[str]) -> dict[str, Prediction]:
    out: dict[str, Prediction] = {}
    for p in preds:
        if p.question_id in out:
            raise ScoringError(f"duplicate prediction id {p.question_id!r}")
        if p.question_id not in gold_ids:
            raise ScoringError(f"unknown question id {p.question_id!r}")
        out[p.question_id] = p
    return out


def score(
    preds: Iterable[Prediction],
    gold: Sequence[QARecord],
    mode: str = "exact",
    edit1_scope: str = "all",
) -> EvalReport:
    """Accuracy per split and cell; missing predictions count as wrong."""
    if mode not in MODES:
        raise ScoringError(f"unknown mode {mode!r}")
    if edit1_scope not in EDIT1_SCOPES:
        raise ScoringError(f"unknown edit1 scope {edit1_scope!r}")
    by_id = _index_predictions(preds, {g.question_id for g in gold})
    cells: dict[str, dict[str, Cell]] = defaultdict(lambda: {c: Cell() for c in CELLS})
    missing = []
    for g in sorted(gold, key=lambda r: r.question_id):
        p = by_id.get(g.question_id)
        if p is None:
            missing.append(g.question_id)
        ok = p is not None and is_correct(p.answer, g, mode, edit1_scope)
        names = (
            g.family,
            "overall",
            "chart-specific-question" if g.chart_specific_question else "generic-question",
            "chart-specific-answer" if g.chart_specific_answer else "generic-answer",
        )
        for split in (g.split or "unknown", "all"):
            for name in names:
                cell = cells[split][name]
                cell.total += 1
                cell.correct += ok
    ordered = {k: cells[k] for k in sorted(cells) if k != "all"}
    ordered["all"] = cells["all"]
    return EvalReport(mode, edit1_scope, ordered, missing)


# ------------------------------------------------------------- localization


def iou(a: PixelBox, b: PixelBox) -> float:
    ix = max(0.0, min(a.right, b.right) - max(a.x, b.x))
    iy = max(0.0, min(a.bottom, b.bottom) - max(a.y, b.y))
    inter = ix * iy
    union = a.area + b.area - inter
    return inter / union if union > 0 else 0.0


def center_distance(a: PixelBox, b: PixelBox) -> float:
    (ax, ay), (bx, by) = a.center, b.center
    return math.hypot(ax - bx, ay - by)


@dataclass
class LocalizationReport:
    count: int
    iou_rows: dict[float, float]
    distance_rows: dict[int, float]

    def to_dict(self) -> dict[str, Any]:
        return {
            "count": self.count,
            "iou_at_least": {str(k): v for k, v in self.iou_rows.items()},
            "center_distance_at_most": {str(k): v for k, v in self.distance_rows.items()},
        }

    def to_text(self) -> str:
        lines = [f"boxes scored: {self.count}", "IOU >=   % boxes"]
        lines += [f"{t:<8} {v:>8.2f}" for t, v in self.iou_rows.items()]
        lines.append("dist <=  % boxes")
        lines += [f"{t:<8} {v:>8.2f}" for t, v in self.distance_rows.items()]
        return "\n".join(lines) + "\n"


def localization_report(preds: Iterable[Prediction], gold: Sequence[QARecord]) -> LocalizationReport:
    """IOU and center-distance tables over records that have boxes on both sides."""
    gold_boxes = {g.question_id: g.answer_box for g in gold if g.answer_box is not None}
    pairs = [(p.predicted_box, gold_boxes[p.question_id]) for p in preds
             if p.predicted_box is not None and p.question_id in gold_boxes]
    n = len(pairs)

    def pct(hits: int) -> float:
        return round(100.0 * hits / n, 2) if n else 0.0

    ious = [iou(p, g) for p, g in pairs]
    dists = [center_distance(p, g) for p, g in pairs]
    return LocalizationReport(
        n,
        {t: pct(sum(1 for v in ious if v >= t - 1e-9)) for t in IOU_THRESHOLDS},
        {d: pct(sum(1 for v in dists if v <= d + 1e-9)) for d in DISTANCE_THRESHOLDS},
    )


# ------------------------------------------------------------------ file io


def _read_jsonl(path: str | Path, parse) -> list:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                out.append(parse(json.loads(line)))
            except (ValueError, KeyError, TypeError) as exc:
                raise ScoringError(f"{path}: malformed record ({exc})", lineno) from None
    return out


def load_gold(path: str | Path) -> list[QARecord]:
    return _read_jsonl(path, QARecord.from_dict)


def load_predictions(path: str | Path) -> list[Prediction]:
    return _read_jsonl(path, Prediction.from_dict)
