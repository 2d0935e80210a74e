"""The ten acceptance criteria, one test each.

Every test records its verdict in ``conftest.ACCEPTANCE`` before asserting,
so the terminal summary prints one PASS/FAIL line per criterion.
"""

from __future__ import annotations

import json
import random
import time
import xml.etree.ElementTree as ET
from collections import Counter, defaultdict

from _oracle import brute_force_answer
from conftest import ACCEPTANCE
from test_colors import SHARMA_PAIRS, brute_force_name
from test_evaluation import rec

from barqa.colors import default_table, delta_e_2000, name_color
from barqa.dem import LOCAL_SLOTS, build_local_dictionary, decode_answer, encode_answer, local_dictionary_for, word_boxes
from barqa.evaluation import DISTANCE_THRESHOLDS, IOU_THRESHOLDS, Prediction, iou, localization_report, score
from barqa.layout import CANVAS, ChartMetadata, PixelBox, layout, validate_metadata
from barqa.model import SPLITS
from barqa.pipeline import generate, load_chart, verify_manifest
from barqa.questions import TEMPLATE_BY_ID, QARecord, generate_questions
from barqa.sampler import GeneratorConfig, Stream, sample_chart


def record(n: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[n] = (bool(ok), detail)


def load_records(root, split):
    return [QARecord.from_dict(json.loads(x)) for x in (root / split / "qa.jsonl").read_text().splitlines()]


def load_charts(root, split):
    return [load_chart(p) for p in sorted((root / split).glob("*.json"))]


# 1 -------------------------------------------------------------------------
def test_criterion_01_distribution(config, vocab):
    t0 = time.perf_counter()
    n = 10_000
    specs = [sample_chart(config, vocab, "train", i) for i in range(n)]
    elapsed = time.perf_counter() - t0
    multi = [s for s in specs if not s.is_single]
    eligible = [s for s in multi if s.scale.kind in ("linear", "percentage-normalized")]
    kinds = Counter("percentage" if s.scale.is_percentage else s.scale.kind for s in specs)
    got = {
        "vertical": (sum(s.orientation == "vertical" for s in specs) / n, 0.70, 0.02),
        "hatched": (sum(s.style.hatch is not None for s in specs) / n, 0.20, 0.02),
        "legend-outside": (sum(s.style.legend_position in ("right", "below") for s in multi) / len(multi), 0.40, 0.03),
        "stacked": (sum(s.is_stacked for s in eligible) / len(eligible), 0.20, 0.02),
        "linear": (kinds["linear"] / n, 0.70, 0.02),
        "percentage": (kinds["percentage"] / n, 0.25, 0.02),
        "exponential": (kinds["exponential"] / n, 0.05, 0.02),
    }
    bad = [k for k, (v, want, tol) in got.items() if abs(v - want) > tol]
    ok = not bad and elapsed < 60
    detail = ", ".join(f"{k}={v:.3f}" for k, (v, _, _) in got.items()) + f"; {elapsed:.1f}s"
    record(1, ok, detail)
    assert not bad, bad
    assert elapsed < 60


# 2 -------------------------------------------------------------------------
def test_criterion_02_balance(desk_dataset):
    root, _, _ = desk_dataset
    worst = 0
    structure = Counter()
    for split in SPLITS:
        per_template: dict[str, Counter] = defaultdict(Counter)
        for r in load_records(root, split):
            if TEMPLATE_BY_ID[r.template_id].answer_kind == "yes-no":
                per_template[r.template_id][r.answer] += 1
                if r.family == "structure":
                    structure[(split, r.answer)] += 1
        for c in per_template.values():
            worst = max(worst, abs(c["yes"] - c["no"]))
    symmetric = all(structure[(s, "yes")] == structure[(s, "no")] for s in SPLITS)
    ok = worst <= 1 and symmetric
    train_yes, train_no = structure[("train", "yes")], structure[("train", "no")]
    record(2, ok, f"max |yes-no| per template={worst}; train structure yes/no={train_yes}/{train_no}")
    assert worst <= 1
    assert symmetric


# 3 -------------------------------------------------------------------------
def test_criterion_03_oracle(config, vocab):
    total = agree = charts = 0
    i = 0
    while charts < 200:
        spec = sample_chart(config, vocab, "train", 50_000 + i)
        i += 1
        meta = layout(spec)
        if not isinstance(meta, ChartMetadata):
            continue
        charts += 1
        for r in generate_questions(spec, meta, Stream(i)):
            total += 1
            agree += r.answer == brute_force_answer(spec, r.template_id, r.slots)
    record(3, agree == total, f"{agree}/{total} answers on {charts} charts match brute force")
    assert agree == total


# 4 -------------------------------------------------------------------------
def test_criterion_04_vocabulary(desk_dataset, vocab):
    root, _, _ = desk_dataset
    familiar = set(vocab.familiar_words)
    novel_labels = set()
    for _, spec in load_charts(root, "test-novel"):
        novel_labels |= spec.labels
    label_overlap = novel_labels & familiar
    familiar_answers = {r.answer for s in ("train", "test-familiar") for r in load_records(root, s)}
    novel_label_answers = {r.answer for r in load_records(root, "test-novel") if r.chart_specific_answer}
    answer_overlap = novel_label_answers & familiar_answers
    ok = not label_overlap and not answer_overlap
    record(4, ok, f"label overlap={len(label_overlap)}, answer overlap={len(answer_overlap)} "
                  f"({len(novel_labels)} novel labels)")
    assert not label_overlap
    assert not answer_overlap


# 5 -------------------------------------------------------------------------
def test_criterion_05_geometry(desk_dataset):
    root, _, _ = desk_dataset
    n = 0
    problems = []
    min_fraction = 1.0
    for split in SPLITS:
        for meta, spec in load_charts(root, split):
            n += 1
            min_fraction = min(min_fraction, meta.plot_fraction)
            problems += [f"{meta.chart_id}: {p}" for p in validate_metadata(meta, tolerance=0.5)]
            svg = ET.parse(root / split / f"{meta.chart_id}.svg").getroot()
            if (svg.get("width"), svg.get("height")) != (str(CANVAS), str(CANVAS)):
                problems.append(f"{meta.chart_id}: svg canvas {svg.get('width')}x{svg.get('height')}")
    record(5, not problems, f"{n} charts, {len(problems)} violations, min plot fraction {min_fraction:.3f}")
    assert not problems, problems[:5]


# 6 -------------------------------------------------------------------------
def test_criterion_06_colors():
    t0 = time.perf_counter()
    table = default_table()
    self_ok = sum(name_color(rgb) == name for name, rgb in table.entries)
    rnd = random.Random(2018)
    rgbs = [(rnd.randrange(256), rnd.randrange(256), rnd.randrange(256)) for _ in range(500)]
    rand_ok = sum(name_color(c) == brute_force_name(c) for c in rgbs)
    pair_err = max(abs(delta_e_2000(a, b) - d) for a, b, d in SHARMA_PAIRS)
    elapsed = time.perf_counter() - t0
    ok = self_ok == len(table) == 138 and rand_ok == 500 and pair_err <= 1e-4 and elapsed < 5
    record(6, ok, f"self-map {self_ok}/{len(table)}, random {rand_ok}/500, "
                  f"max CIEDE2000 error {pair_err:.1e} over {len(SHARMA_PAIRS)} pairs; {elapsed:.2f}s")
    assert self_ok == len(table) == 138
    assert rand_ok == 500
    assert pair_err <= 1e-4
    assert elapsed < 5


# 7 -------------------------------------------------------------------------
def test_criterion_07_dem(desk_dataset):
    root, _, _ = desk_dataset
    answers = (root / "answer_vocab.txt").read_text().splitlines()
    charts = load_charts(root, "train")[:250] + load_charts(root, "test-novel")[:250]
    by_chart = defaultdict(list)
    for split in ("train", "test-novel"):
        for r in load_records(root, split):
            by_chart[r.chart_id].append(r)
    failures = []
    trips = 0
    for meta, spec in charts:
        boxes = word_boxes(meta)
        local = local_dictionary_for(meta)
        if local != build_local_dictionary(list(reversed(boxes))):
            failures.append(f"{meta.chart_id}: order depends on input order")
        if sorted(local.words) != sorted(w for w, _ in boxes) or [e.index for e in local.entries] != list(
            range(len(boxes))
        ):
            failures.append(f"{meta.chart_id}: not a bijection")
        start = local.entries[0].box.center
        if any((b.center[0], -b.center[1]) < (start[0], -start[1]) for _, b in boxes):
            failures.append(f"{meta.chart_id}: start is not lower-left-most")
        targets = [r.answer for r in by_chart[meta.chart_id] if r.chart_specific_answer]
        if spec.split == "test-novel":
            targets += list(spec.labels)
        for word in targets:
            slot = encode_answer(word, answers, local)
            trips += 1
            if slot >= LOCAL_SLOTS or decode_answer(slot, local, answers) != word:
                failures.append(f"{meta.chart_id}: {word!r} does not round-trip")
    record(7, not failures, f"{len(charts)} charts, {trips} round trips, {len(failures)} failures")
    assert not failures, failures[:5]


# 8 -------------------------------------------------------------------------
def test_criterion_08_scoring():
    checks = {}
    gold = [rec("a", "yes"), rec("b", "no"), rec("c", "two"), rec("d", "list", "data-retrieval", csa=True)]
    preds = [Prediction("a", "yes"), Prediction("b", "no"), Prediction("c", "two"), Prediction("d", "lisit")]
    checks["3-of-4 exact=75.00"] = score(preds, gold, "exact").accuracy("overall") == 75.0
    checks["3-of-4 edit1=100.00"] = score(preds, gold, "edit1").accuracy("overall") == 100.0

    yn = [rec(f"q{i}", "yes" if i % 2 else "no") for i in range(1000)]
    checks["constant yes=50.00"] = score([Prediction(g.question_id, "yes") for g in yn], yn).accuracy("structure") == 50.0

    checks["iou 1/3"] = abs(iou(PixelBox(0, 0, 10, 10), PixelBox(5, 0, 10, 10)) - 1 / 3) < 1e-12
    boxes = [PixelBox(10 + 30 * i, 40, 20, 12) for i in range(6)]
    g = [rec(f"b{i}", "ant", csa=True, box=b) for i, b in enumerate(boxes)]
    shifted = [Prediction(x.question_id, "ant", PixelBox(x.answer_box.x, x.answer_box.y + 20, 20, 12)) for x in g]
    rep = localization_report(shifted, g)
    checks["20px shift"] = [rep.distance_rows[d] for d in DISTANCE_THRESHOLDS] == [0.0, 0.0, 0.0, 100.0, 100.0]
    same = localization_report([Prediction(x.question_id, "ant", x.answer_box) for x in g], g)
    checks["identical boxes"] = all(v == 100.0 for v in same.iou_rows.values())

    rnd = random.Random(8)
    rand_boxes = lambda: PixelBox(rnd.uniform(0, 400), rnd.uniform(0, 400), rnd.uniform(1, 40), rnd.uniform(1, 40))  # noqa: E731
    g = [rec(f"r{i}", "ant", csa=True, box=rand_boxes()) for i in range(300)]
    near = [Prediction(x.question_id, "ant", PixelBox(x.answer_box.x + rnd.uniform(-30, 30),
                                                      x.answer_box.y + rnd.uniform(-30, 30),
                                                      x.answer_box.width, x.answer_box.height)) for x in g]
    rep = localization_report(near, g)
    ious = [rep.iou_rows[t] for t in IOU_THRESHOLDS]
    dists = [rep.distance_rows[d] for d in DISTANCE_THRESHOLDS]
    checks["monotone"] = ious == sorted(ious, reverse=True) and dists == sorted(dists)

    failed = [k for k, v in checks.items() if not v]
    record(8, not failed, f"{len(checks) - len(failed)}/{len(checks)} fixtures" + (f"; failed: {failed}" if failed else ""))
    assert not failed


# 9 -------------------------------------------------------------------------
def test_criterion_09_determinism(desk_dataset, tmp_path):
    root, manifest, _ = desk_dataset
    again = generate(GeneratorConfig(), tmp_path / "again")
    t0 = time.perf_counter()
    same_manifest = (root / "manifest.json").read_bytes() == (tmp_path / "again" / "manifest.json").read_bytes()
    differing = [e["path"] for e in manifest["files"]
                 if (root / e["path"]).read_bytes() != (tmp_path / "again" / e["path"]).read_bytes()]
    checksum_problems = verify_manifest(tmp_path / "again")
    elapsed = time.perf_counter() - t0
    ok = same_manifest and again == manifest and not differing and not checksum_problems and elapsed < 30
    record(9, ok, f"{len(manifest['files'])} files, {len(differing)} differ, manifests identical={same_manifest}; "
                  f"comparison {elapsed:.1f}s")
    assert same_manifest and again == manifest
    assert not differing and not checksum_problems
    assert elapsed < 30


# 10 ------------------------------------------------------------------------
def test_criterion_10_end_to_end(desk_dataset, tmp_path):
    root, manifest, gen_time = desk_dataset
    t0 = time.perf_counter()
    counts = [manifest["splits"][s]["images"] for s in SPLITS]
    violations = 0
    for split in SPLITS:
        for meta, spec in load_charts(root, split):
            violations += len(validate_metadata(meta))
            if layout(spec) != meta:
                violations += 1
    gold = [r for s in SPLITS for r in load_records(root, s)]
    preds = [Prediction(r.question_id, r.answer, r.answer_box) for r in gold]
    report = score(preds, gold)
    overall = report.accuracy("overall")
    total = gen_time + time.perf_counter() - t0
    ok = counts == [1000, 250, 250] and violations == 0 and overall == 100.0 and total < 600
    record(10, ok, f"charts {counts}, {len(gold)} questions, {violations} violations, "
                   f"self-score {overall:.2f}%; {total:.1f}s")
    assert counts == [1000, 250, 250]
    assert violations == 0
    assert overall == 100.0
    assert total < 600
