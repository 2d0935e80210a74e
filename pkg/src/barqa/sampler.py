"""Seeded sampling of chart styles, data tables, labels and title themes.

Reproducibility rule (stream version ``barqa-v1``): each chart slot gets its
own 64-bit seed, the first 8 bytes (big endian) of
``blake2b("barqa-v1|<master>|<split>|<index>|<attempt>")``.  That seed feeds a
:class:`random.Random` (MT19937), and every draw is built from
``Random.random()`` alone, the one method whose output Python guarantees to
stay fixed across versions for a given integer seed.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, fields, replace
from importlib import resources
from pathlib import Path
from typing import Sequence

from .colors import hex_to_rgb
from .model import (
    SPLITS,
    ChartSpec,
    ContextTheme,
    DataScale,
    HATCHES,
    StyleSpec,
    THEMES,
)

STREAM_VERSION = "barqa-v1"
FAMILIAR_COUNT = 1000
NOVEL_COUNT = 500


def derive_seed(master_seed: int, split: str, index: int, attempt: int = 0) -> int:
    key = f"{STREAM_VERSION}|{master_seed}|{split}|{index}|{attempt}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")


class Stream:
    """Deterministic draws layered on ``random.Random.random()``."""

    def __init__(self, seed: int):
        self._r = random.Random(seed)

    def random(self) -> float:
        return self._r.random()

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("empty range")
        return min(int(self._r.random() * n), n - 1)

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def chance(self, p: float) -> bool:
        return self._r.random() < p

    def choice(self, seq: Sequence):
        return seq[self.below(len(seq))]

    def shuffle(self, items: list) -> list:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items

    def sample(self, seq: Sequence, k: int) -> list:
        pool = list(seq)
        if k > len(pool):
            raise ValueError("sample larger than population")
        for i in range(k):
            j = i + self.below(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]


@dataclass(frozen=True)
class GeneratorConfig:
    master_seed: int = 2018
    train_count: int = 1000
    test_familiar_count: int = 250
    test_novel_count: int = 250
    vertical_frac: float = 0.70
    stacked_frac: float = 0.20
    hatch_frac: float = 0.20
    legend_outside_frac: float = 0.40
    linear_frac: float = 0.70
    percentage_frac: float = 0.25
    exponential_frac: float = 0.05
    negative_frac: float = 0.10
    zero_frac: float = 0.10
    normalized_percentage_frac: float = 0.50
    multi_series_frac: float = 0.50
    grid_frac: float = 0.50
    per_bar_flag_prob: float = 0.20
    max_attempts: int = 50

    def count(self, split: str) -> int:
        return {
            "train": self.train_count,
            "test-familiar": self.test_familiar_count,
            "test-novel": self.test_novel_count,
        }[split]

    def problems(self) -> list[str]:
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name.endswith("_frac") or f.name == "per_bar_flag_prob":
                if not 0.0 <= v <= 1.0:
                    out.append(f"{f.name} outside [0, 1]")
            elif f.name.endswith("_count") and v < 0:
                out.append(f"{f.name} negative")
        total = self.linear_frac + self.percentage_frac + self.exponential_frac
        if abs(total - 1.0) > 1e-9:
            out.append("data-type fractions do not sum to 1")
        if self.max_attempts < 1:
            out.append("max_attempts must be positive")
        return out

    def to_text(self) -> str:
        return "".join(f"{f.name} = {getattr(self, f.name)}\n" for f in fields(self))

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


class ConfigError(ValueError):
    pass


def parse_config(text: str) -> GeneratorConfig:
    """Parse flat ``key = value`` text; ``#`` starts a comment."""
    types = {f.name: f.type for f in fields(GeneratorConfig)}
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, val = (p.strip() for p in line.split("=", 1))
        if key not in types:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            values[key] = float(val) if types[key] == "float" else int(val)
        except ValueError:
            raise ConfigError(f"line {lineno}: bad value for {key}: {val!r}") from None
    config = GeneratorConfig(**values)
    problems = config.problems()
    if problems:
        raise ConfigError("; ".join(problems))
    return config


def load_config(path: str | Path) -> GeneratorConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------- vocabulary


class VocabularyError(ValueError):
    pass


@dataclass(frozen=True)
class Vocabulary:
    familiar_words: tuple[str, ...]
    novel_words: tuple[str, ...]
    question_vocab: tuple[str, ...] = ()
    answer_vocab: tuple[str, ...] = ()

    def words_for(self, split: str) -> tuple[str, ...]:
        return self.novel_words if split == "test-novel" else self.familiar_words

    def with_globals(self, question_vocab, answer_vocab) -> Vocabulary:
        return replace(self, question_vocab=tuple(question_vocab), answer_vocab=tuple(answer_vocab))


def _read_words(path) -> list[str]:
    if path is None:
        raise VocabularyError("missing word list")
    if not hasattr(path, "read_text"):
        path = Path(path)
    text = path.read_text(encoding="utf-8")
    return [w.strip() for w in text.splitlines() if w.strip()]


def load_vocabulary(familiar_path=None, novel_path=None) -> Vocabulary:
    data = resources.files("barqa.data")
    familiar = _read_words(familiar_path or data.joinpath("familiar_words.txt"))
    novel = _read_words(novel_path or data.joinpath("novel_words.txt"))
    for w in familiar + novel:
        if not (w.isascii() and w.isalpha() and w.islower()):
            raise VocabularyError(f"non-alphabetic entry {w!r}")
    if len(set(familiar)) != len(familiar) or len(set(novel)) != len(novel):
        raise VocabularyError("duplicate entry in word list")
    overlap = sorted(set(familiar) & set(novel))
    if overlap:
        raise VocabularyError(f"vocabulary overlap: {', '.join(overlap[:5])}")
    if len(familiar) != FAMILIAR_COUNT or len(novel) != NOVEL_COUNT:
        raise VocabularyError(
            f"wrong count: familiar={len(familiar)} (want {FAMILIAR_COUNT}), "
            f"novel={len(novel)} (want {NOVEL_COUNT})"
        )
    return Vocabulary(tuple(familiar), tuple(novel))


# ------------------------------------------------------------------ styling

PALETTES: dict[str, tuple[str, ...]] = {
    "tab": ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"),
    "set1": ("#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628", "#f781bf"),
    "pastel": ("#fbb4ae", "#b3cde3", "#ccebc5", "#decbe4", "#fed9a6", "#e5d8bd"),
    "dark2": ("#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02"),
    "ggplot": ("#e24a33", "#348abd", "#988ed5", "#777777", "#fbc15e", "#8eba42"),
    "named": ("#9370db", "#ff6347", "#2e8b57", "#4682b4", "#daa520", "#da70d6", "#cd853f"),
    "blues": ("#08306b", "#2171b5", "#6baed6", "#c6dbef"),
    "greys": ("#252525", "#636363", "#969696", "#cccccc"),
}

TITLES = {
    "algorithm-accuracy": (("Accuracy of different algorithms", "Accuracy"), ("Algorithm accuracy", "Accuracy")),
    "object-preference": (("Most preferred objects", "{people}"), ("Object preference", "{people}")),
    "item-sales": (("Sales statistics of different items", "Units sold"), ("Item sales", "Units sold")),
    "generic": (("Title", "Values"), ("Title", "Values")),
}


def _theme(rng: Stream, scale: DataScale) -> ContextTheme:
    theme = rng.choice(THEMES)
    title, axis = rng.choice(TITLES[theme])
    axis = axis.format(people="Percent of people" if scale.is_percentage else "Number of people")
    return ContextTheme(theme, title, axis)


def _composition(rng: Stream, parts: int, allow_zero: bool, flag_prob: float) -> list[int]:
    """Split 100 into ``parts`` multiples of ten."""
    units = [1] * parts
    for _ in range(10 - parts):
        units[rng.below(parts)] += 1
    if allow_zero:
        for i in range(parts):
            if rng.chance(flag_prob) and units[i] and sum(1 for u in units if u) > 1:
                j = rng.choice([k for k in range(parts) if k != i and units[k]])
                units[j] += units[i]
                units[i] = 0
    return [10 * u for u in units]


def _zeroed_composition(rng: Stream, parts: int, flag_prob: float) -> list[int]:
    units = [u // 10 for u in _composition(rng, parts, True, flag_prob)]
    if 0 not in units:
        i = rng.below(parts)
        j = rng.choice([k for k in range(parts) if k != i])
        units[j] += units[i]
        units[i] = 0
    return [10 * u for u in units]


def _base_value(rng: Stream, kind: str) -> int:
    if kind == "linear":
        return rng.integer(1, 10)
    if kind == "percentage":
        return 10 * rng.integer(1, 10)
    return rng.integer(1, 10)  # exponent


def _apply_flag(rng: Stream, values: list[list[int]], prob: float, op, keep=lambda v: False) -> None:
    # ``keep`` shields cells an earlier flag already changed
    cells = [(g, s) for g in range(len(values)) for s in range(len(values[0])) if not keep(values[g][s])]
    if not cells:
        # everything shielded: reuse shielded cells but leave one untouched
        cells = [(g, s) for g in range(len(values)) for s in range(len(values[0]))][1:]
    hit = [c for c in cells if rng.chance(prob)]
    if not hit:
        hit = [rng.choice(cells)]
    for g, s in hit:
        values[g][s] = op(values[g][s])


def sample_chart(config: GeneratorConfig, vocab: Vocabulary, split: str, index: int, attempt: int = 0) -> ChartSpec:
    """Draw one chart spec for slot ``(split, index)``; pure in its arguments."""
    if split not in SPLITS:
        raise ValueError(f"unknown split {split!r}")
    rng = Stream(derive_seed(config.master_seed, split, index, attempt))

    orientation = "vertical" if rng.chance(config.vertical_frac) else "horizontal"
    u = rng.random()
    if u < config.linear_frac:
        kind = "linear"
    elif u < config.linear_frac + config.percentage_frac:
        kind = "percentage"
    else:
        kind = "exponential"

    multi = rng.chance(config.multi_series_frac)
    if multi:
        n_groups, n_series = rng.integer(2, 5), rng.integer(2, 4)
        if kind == "percentage" and rng.chance(config.normalized_percentage_frac):
            kind = "percentage-normalized"
    else:
        n_groups, n_series = rng.integer(2, 10), 1

    if not multi:
        grouping = "single"
    elif kind in ("linear", "percentage-normalized") and rng.chance(config.stacked_frac):
        grouping = "stacked-additive" if kind == "linear" else "stacked-fractional"
    else:
        grouping = "grouped"

    negative = kind == "linear" and not grouping.startswith("stacked") and rng.chance(config.negative_frac)
    missing = kind != "exponential" and rng.chance(config.zero_frac)
    scale = DataScale(kind, allow_negative=negative, allow_missing=missing)

    if kind == "percentage-normalized":
        values = [_composition(rng, n_series, missing, config.per_bar_flag_prob) for _ in range(n_groups)]
        if missing and not any(0 in row for row in values):
            values[rng.below(n_groups)] = _zeroed_composition(rng, n_series, config.per_bar_flag_prob)
    else:
        values = [[_base_value(rng, kind) for _ in range(n_series)] for _ in range(n_groups)]
        if negative:
            _apply_flag(rng, values, config.per_bar_flag_prob, lambda v: -v)
        if missing:
            _apply_flag(rng, values, config.per_bar_flag_prob, lambda v: 0, keep=lambda v: v < 0)
            if all(v == 0 for row in values for v in row):
                values[0][0] = _base_value(rng, kind)

    words = rng.sample(vocab.words_for(split), n_groups + (n_series if multi else 0))
    group_labels = tuple(words[:n_groups])
    series_labels = tuple(words[n_groups:])

    theme = _theme(rng, scale)
    hatch = rng.choice(HATCHES) if rng.chance(config.hatch_frac) else None
    family = rng.choice(sorted(PALETTES))
    palette = rng.shuffle([hex_to_rgb(c) for c in PALETTES[family]])
    if multi:
        if rng.chance(config.legend_outside_frac):
            legend = rng.choice(("below", "right"))
        else:
            legend = "inside"
    else:
        legend = "none"
    style = StyleSpec(
        grid_lines=rng.chance(config.grid_frac),
        hatch=hatch,
        palette=tuple(palette[: max(n_series, 1)]),
        legend_position=legend,
        bar_width_ratio=rng.choice((0.5, 0.6, 0.7, 0.8, 0.9)),
        font_size=float(rng.choice((9, 10, 11, 12))),
    )
    return ChartSpec(
        id=f"{split}-{index:06d}",
        title_context=theme,
        orientation=orientation,
        grouping=grouping,
        scale=scale,
        group_labels=group_labels,
        series_labels=series_labels,
        values=tuple(tuple(r) for r in values),
        style=style,
        split=split,
    )
