"""End-to-end dataset generation: charts, renderings, QA records and manifest.

Output layout::

    <out>/manifest.json
    <out>/config.cfg                    config snapshot (regenerates the data)
    <out>/templates.json                template catalog
    <out>/question_vocab.txt            global question tokens (train split)
    <out>/answer_vocab.txt              global answers (train split)
    <out>/<split>/<chart_id>.svg
    <out>/<split>/<chart_id>.json       metadata, with the chart spec embedded
    <out>/<split>/qa.jsonl              balanced QA records

Everything is first written to a staging directory next to ``<out>`` and
moved into place only when the whole run succeeded.
"""

from __future__ import annotations

import hashlib
import json
import os
import shutil
import tempfile
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .dem import MAX_LOCAL, word_boxes
from .layout import ChartMetadata, Discarded, layout
from .model import SPLITS, ChartSpec, validate_spec
from .questions import QARecord, balance, generate_questions, template_catalog, tokenize
from .sampler import STREAM_VERSION, GeneratorConfig, Stream, Vocabulary, derive_seed, load_vocabulary, sample_chart
from .svg import render_svg

DATASET_VERSION = "1.0"
DISCARD_DEM_OVERFLOW = "local-dictionary-overflow"


class GenerationError(RuntimeError):
    pass


@dataclass
class Chart:
    spec: ChartSpec
    meta: ChartMetadata
    attempt: int


@dataclass
class SplitResult:
    split: str
    charts: list[Chart]
    records: list[QARecord]
    discards: Counter = field(default_factory=Counter)


def build_chart(config: GeneratorConfig, vocab: Vocabulary, split: str, index: int, discards: Counter | None = None) -> Chart:
    """Sample and lay out chart ``index``, resampling discarded attempts."""
    for attempt in range(config.max_attempts):
        spec = sample_chart(config, vocab, split, index, attempt)
        result = validate_spec(spec, vocab)
        if not result.ok:
            raise GenerationError(f"{spec.id}: sampler produced an invalid spec: {result.rules()}")
        meta = layout(spec)
        reason = meta.reason if isinstance(meta, Discarded) else None
        if reason is None and len(word_boxes(meta)) > MAX_LOCAL:
            reason = DISCARD_DEM_OVERFLOW
        if reason is None:
            return Chart(spec, meta, attempt)
        if discards is not None:
            discards[reason] += 1
    raise GenerationError(f"{split}-{index:06d}: no acceptable chart in {config.max_attempts} attempts")


def question_stream(config: GeneratorConfig, split: str, index: int, attempt: int) -> Stream:
    return Stream(derive_seed(config.master_seed, f"{split}/questions", index, attempt))


def balance_stream(config: GeneratorConfig, split: str) -> Stream:
    return Stream(derive_seed(config.master_seed, f"{split}/balance", 0))


def generate_split(config: GeneratorConfig, vocab: Vocabulary, split: str) -> SplitResult:
    discards: Counter = Counter()
    charts, records = [], []
    for index in range(config.count(split)):
        chart = build_chart(config, vocab, split, index, discards)
        charts.append(chart)
        records.extend(generate_questions(chart.spec, chart.meta, question_stream(config, split, index, chart.attempt)))
    records = balance(records, balance_stream(config, split))
    return SplitResult(split, charts, records, discards)


def global_vocabularies(train_records: list[QARecord]) -> tuple[list[str], list[str]]:
    """Question tokens and answers seen in training, sorted."""
    questions = sorted({tok for r in train_records for tok in tokenize(r.question)})
    answers = sorted({r.answer for r in train_records})
    return questions, answers


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _split_summary(res: SplitResult) -> dict[str, Any]:
    per_template = Counter(r.template_id for r in res.records)
    per_family = Counter(r.family for r in res.records)
    return {
        "images": len(res.charts),
        "questions": len(res.records),
        "unique_answers": len({r.answer for r in res.records}),
        "questions_per_family": dict(sorted(per_family.items())),
        "questions_per_template": {k: per_template[k] for k in sorted(per_template, key=_template_order)},
        "discarded": dict(sorted(res.discards.items())),
        "chart_specific_answers": sum(r.chart_specific_answer for r in res.records),
        "chart_specific_questions": sum(r.chart_specific_question for r in res.records),
    }


def _template_order(tid: str) -> tuple[str, int]:
    return ("SDR".index(tid[0]), int(tid[1:]))


def write_dataset(config: GeneratorConfig, results: list[SplitResult], root: Path) -> dict[str, Any]:
    """Write all files under ``root`` and return the manifest dict."""
    _write(root / "config.cfg", config.to_text())
    _write(root / "templates.json", json.dumps(template_catalog(), indent=1) + "\n")
    train = next((r for r in results if r.split == "train"), None)
    qv, av = global_vocabularies(train.records if train else [])
    _write(root / "question_vocab.txt", "".join(w + "\n" for w in qv))
    _write(root / "answer_vocab.txt", "".join(w + "\n" for w in av))
    for res in results:
        d = root / res.split
        for chart in res.charts:
            doc = chart.meta.to_dict()
            doc["spec"] = chart.spec.to_dict()
            doc["attempt"] = chart.attempt
            _write(d / f"{chart.spec.id}.json", json.dumps(doc, indent=1) + "\n")
            _write(d / f"{chart.spec.id}.svg", render_svg(chart.meta, chart.spec))
        _write(d / "qa.jsonl", "".join(r.to_json() + "\n" for r in res.records))

    files = sorted(p for p in root.rglob("*") if p.is_file() and p.name != "manifest.json")
    manifest = {
        "dataset_version": DATASET_VERSION,
        "stream_version": STREAM_VERSION,
        "master_seed": config.master_seed,
        "config": config.to_dict(),
        "splits": {res.split: _split_summary(res) for res in results},
        "global_vocabulary": {"questions": len(qv), "answers": len(av)},
        "files": [
            {"path": p.relative_to(root).as_posix(), "sha256": _sha256(p), "bytes": p.stat().st_size} for p in files
        ],
    }
    _write(root / "manifest.json", json.dumps(manifest, indent=1) + "\n")
    return manifest


def generate(config: GeneratorConfig, out_dir: str | Path, vocab: Vocabulary | None = None) -> dict[str, Any]:
    """Generate every split into ``out_dir`` (which must be absent or empty)."""
    problems = config.problems()
    if problems:
        raise GenerationError("invalid config: " + "; ".join(problems))
    out = Path(out_dir)
    if out.exists() and (not out.is_dir() or any(out.iterdir())):
        raise GenerationError(f"output directory {out} exists and is not empty")
    vocab = vocab or load_vocabulary()
    out.parent.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=f".{out.name}.staging-", dir=out.parent))
    try:
        results = [generate_split(config, vocab, split) for split in SPLITS]
        manifest = write_dataset(config, results, staging)
        if out.exists():
            out.rmdir()
        os.replace(staging, out)
    except BaseException:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    return manifest


def verify_manifest(root: str | Path) -> list[str]:
    """Files whose checksum or presence disagrees with the manifest."""
    root = Path(root)
    manifest = json.loads((root / "manifest.json").read_text(encoding="utf-8"))
    bad = []
    listed = set()
    for entry in manifest["files"]:
        p = root / entry["path"]
        listed.add(entry["path"])
        if not p.is_file():
            bad.append(f"missing {entry['path']}")
        elif _sha256(p) != entry["sha256"]:
            bad.append(f"checksum mismatch {entry['path']}")
    for p in root.rglob("*"):
        rel = p.relative_to(root).as_posix()
        if p.is_file() and rel != "manifest.json" and rel not in listed:
            bad.append(f"unlisted {rel}")
    return bad


def load_chart(path: str | Path) -> tuple[ChartMetadata, ChartSpec | None]:
    """Metadata file written by :func:`write_dataset`; the spec is optional."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    spec = ChartSpec.from_dict(doc["spec"]) if "spec" in doc else None
    return ChartMetadata.from_dict(doc), spec
