"""Chart-local word dictionaries and the hybrid local/global index space.

A chart's text boxes are ordered by a spatial chain: the lower-left-most box
gets index 0, then each next index goes to the unassigned box nearest the one
just assigned.  Question and answer tokens that occur on the chart are encoded
by that local index, which lets a model answer with words it never saw in
training.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .layout import ChartMetadata, PixelBox, text_width

MAX_LOCAL = 30
LOCAL_SLOTS = 31  # indices 0..30; at most MAX_LOCAL are ever filled
UNKNOWN = "<unk>"
OCR_MIN_CONFIDENCE = 50.0


class LocalDictionaryOverflow(ValueError):
    pass


class EmptySlotError(ValueError):
    pass


@dataclass(frozen=True)
class LocalEntry:
    index: int
    word: str
    box: PixelBox


@dataclass(frozen=True)
class LocalDictionary:
    entries: tuple[LocalEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(e.word for e in self.entries)

    def index_of(self, word: str) -> int | None:
        for e in self.entries:
            if e.word == word:
                return e.index
        return None

    def to_jsonl(self) -> str:
        return "".join(
            json.dumps({"index": e.index, "word": e.word, "box": e.box.to_dict()}) + "\n" for e in self.entries
        )


def _start_key(box: PixelBox) -> tuple[float, float]:
    cx, cy = box.center
    return (cx, -cy)


def build_local_dictionary(boxes: Sequence[tuple[str, PixelBox]]) -> LocalDictionary:
    """Order boxes by the nearest-neighbour chain starting at the lower-left corner.

    The start box has the smallest center x, ties going to the larger center y
    (lower on the page).  Distances are between box centers; equal distances
    go to the smaller center x, then the smaller center y.
    """
    if len(boxes) > MAX_LOCAL:
        raise LocalDictionaryOverflow(f"local dictionary overflow: {len(boxes)} boxes > {MAX_LOCAL}")
    remaining = list(boxes)
    if not remaining:
        return LocalDictionary(())
    first = min(remaining, key=lambda wb: _start_key(wb[1]))
    order = [first]
    remaining.remove(first)
    while remaining:
        px, py = order[-1][1].center

        def key(wb):
            cx, cy = wb[1].center
            return ((cx - px) ** 2 + (cy - py) ** 2, cx, cy)

        nxt = min(remaining, key=key)
        order.append(nxt)
        remaining.remove(nxt)
    return LocalDictionary(tuple(LocalEntry(i, w, b) for i, (w, b) in enumerate(order)))


def word_boxes(meta: ChartMetadata) -> list[tuple[str, PixelBox]]:
    """Per-word boxes from the chart's text boxes (oracle OCR).

    Multi-word texts are cut at the spaces in proportion to glyph advances;
    vertical text (rotated 90 degrees) reads upward, so its first word is at
    the bottom.
    """
    out = []
    for t in meta.text_boxes:
        words = t.text.split()
        if len(words) == 1:
            out.append((words[0], t.box))
            continue
        total = text_width(t.text, t.font_size)
        pos = 0.0
        offsets = []
        for i, w in enumerate(words):
            ww = text_width(w, t.font_size)
            offsets.append((pos, ww))
            pos += ww + (text_width(" ", t.font_size) if i < len(words) - 1 else 0)
        for w, (start, ww) in zip(words, offsets):
            if t.rotation == 90:
                lo = t.box.bottom - (start + ww) / total * t.box.height
                box = PixelBox(t.box.x, lo, t.box.width, ww / total * t.box.height)
            else:
                box = PixelBox(t.box.x + start / total * t.box.width, t.box.y, ww / total * t.box.width, t.box.height)
            out.append((w, box.rounded()))
    return out


def local_dictionary_for(meta: ChartMetadata) -> LocalDictionary:
    return build_local_dictionary(word_boxes(meta))


def filter_ocr_boxes(items: Iterable[tuple[str, PixelBox, float]]) -> list[tuple[str, PixelBox]]:
    """Keep OCR words that are alphabetic, at least two letters and confidence >= 50."""
    return [
        (w, b)
        for w, b, conf in items
        if w.isalpha() and len(w) > 1 and conf >= OCR_MIN_CONFIDENCE
    ]


@dataclass(frozen=True)
class HybridIndexSpace:
    """Local slots 0..30, then one slot per global word, then one unknown slot."""

    global_words: tuple[str, ...]
    local_slots: int = LOCAL_SLOTS

    @property
    def global_start(self) -> int:
        return self.local_slots

    @property
    def unknown_index(self) -> int:
        return self.local_slots + len(self.global_words)

    @property
    def size(self) -> int:
        return self.unknown_index + 1

    @cached_property
    def _lookup(self) -> dict[str, int]:
        return {w: i for i, w in reversed(list(enumerate(self.global_words)))}

    def is_local(self, slot: int) -> bool:
        return 0 <= slot < self.local_slots

    def is_global(self, slot: int) -> bool:
        return self.global_start <= slot < self.unknown_index

    def encode(self, token: str, local: LocalDictionary) -> int:
        i = local.index_of(token)
        if i is not None:
            return i
        if token in self._lookup:
            return self.global_start + self._lookup[token]
        return self.unknown_index

    def decode(self, slot: int, local: LocalDictionary) -> str:
        if self.is_local(slot):
            if slot >= len(local):
                raise EmptySlotError(f"empty local slot {slot} (dictionary has {len(local)} entries)")
            return local.entries[slot].word
        if self.is_global(slot):
            return self.global_words[slot - self.global_start]
        if slot == self.unknown_index:
            return UNKNOWN
        raise IndexError(f"slot {slot} outside index space of size {self.size}")


def encode_question(tokens: Sequence[str], global_vocab: Sequence[str], local: LocalDictionary) -> list[int]:
    space = HybridIndexSpace(tuple(global_vocab))
    return [space.encode(t, local) for t in tokens]


def encode_answer(answer: str, global_answers: Sequence[str], local: LocalDictionary) -> int:
    return HybridIndexSpace(tuple(global_answers)).encode(answer, local)


def decode_answer(slot: int, local: LocalDictionary, global_answers: Sequence[str]) -> str:
    return HybridIndexSpace(tuple(global_answers)).decode(slot, local)
