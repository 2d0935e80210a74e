from __future__ import annotations

import xml.etree.ElementTree as ET

import pytest
from test_model import make_spec

from barqa.colors import rgb_to_hex
from barqa.layout import ChartMetadata, layout
from barqa.sampler import sample_chart
from barqa.svg import render_svg

NS = "{http://www.w3.org/2000/svg}"


def bar_rects(root, meta):
    """Solid-fill rectangles without a stroke, minus the white background."""
    fills = {rgb_to_hex(b.rgb) for b in meta.bars}
    out = []
    for r in root.iter(NS + "rect"):
        if r.get("fill") in fills and r.get("stroke") is None and r.get("width") != "448":
            out.append(tuple(float(r.get(k)) for k in ("x", "y", "width", "height")))
    return out


def render(spec):
    meta = layout(spec)
    assert isinstance(meta, ChartMetadata)
    return meta, render_svg(meta, spec)


def test_root_is_448_square():
    _, doc = render(make_spec([[3], [7], [2]]))
    root = ET.fromstring(doc)
    assert (root.get("width"), root.get("height"), root.get("viewBox")) == ("448", "448", "0 0 448 448")


def test_zero_bar_draws_no_rectangle():
    meta, doc = render(make_spec([[3], [0], [5]], missing=True))
    rects = bar_rects(ET.fromstring(doc), meta)
    assert len(rects) == 2


def test_rectangles_match_metadata_exactly(config, vocab):
    checked = 0
    for i in range(60):
        spec = sample_chart(config, vocab, "train", i)
        meta = layout(spec)
        if not isinstance(meta, ChartMetadata):
            continue
        rects = sorted(bar_rects(ET.fromstring(render_svg(meta, spec)), meta))
        expected = sorted((b.box.x, b.box.y, b.box.width, b.box.height) for b in meta.bars if b.box)
        assert rects == expected
        checked += 1
    assert checked > 50


def test_text_centered_in_boxes():
    meta, doc = render(make_spec([[3, 4], [2, 2]], grouping="grouped", series=("aa", "bb"), legend="right"))
    texts = list(ET.fromstring(doc).iter(NS + "text"))
    assert len(texts) == len(meta.text_boxes)
    for el, t in zip(texts, meta.text_boxes):
        assert el.text == t.text
        assert el.get("data-role") == t.role
        cx, cy = t.box.center
        assert float(el.get("x")) == pytest.approx(cx, abs=0.01)
        assert float(el.get("y")) == pytest.approx(cy, abs=0.01)


def test_hatch_is_a_pattern_fill():
    meta, doc = render(make_spec([[3], [7]], hatch="stripes"))
    root = ET.fromstring(doc)
    assert root.find(f"{NS}defs/{NS}pattern") is not None
    assert sum(1 for r in root.iter(NS + "rect") if r.get("fill") == "url(#hatch)") == 2


def test_rerender_is_byte_identical():
    spec = make_spec([[3], [7], [2]])
    meta, doc = render(spec)
    assert render_svg(meta, spec) == doc
    assert render_svg(ChartMetadata.from_json(meta.to_json()), spec) == doc
