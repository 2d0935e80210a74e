from __future__ import annotations

import hashlib
import random
from importlib import resources

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from skimage.color import deltaE_ciede2000, rgb2lab

from barqa.colors import (
    NamedColorTable,
    default_table,
    delta_e_2000,
    hex_to_rgb,
    name_color,
    parse_color_table,
    rgb_to_hex,
    srgb_to_lab,
)

# Published CIEDE2000 verification data (Sharma, Wu & Dalal test set).
SHARMA_PAIRS = [
    ((50.0000, 2.6772, -79.7751), (50.0000, 0.0000, -82.7485), 2.0425),
    ((50.0000, 3.1571, -77.2803), (50.0000, 0.0000, -82.7485), 2.8615),
    ((50.0000, 2.8361, -74.0200), (50.0000, 0.0000, -82.7485), 3.4412),
    ((50.0000, -1.3802, -84.2814), (50.0000, 0.0000, -82.7485), 1.0000),
    ((50.0000, -1.1848, -84.8006), (50.0000, 0.0000, -82.7485), 1.0000),
    ((50.0000, -0.9009, -85.5211), (50.0000, 0.0000, -82.7485), 1.0000),
    ((50.0000, 0.0000, 0.0000), (50.0000, -1.0000, 2.0000), 2.3669),
    ((50.0000, -1.0000, 2.0000), (50.0000, 0.0000, 0.0000), 2.3669),
    ((50.0000, 2.4900, -0.0010), (50.0000, -2.4900, 0.0009), 7.1792),
    ((50.0000, 2.4900, -0.0010), (50.0000, -2.4900, 0.0010), 7.1792),
    ((50.0000, 2.4900, -0.0010), (50.0000, -2.4900, 0.0011), 7.2195),
    ((50.0000, 2.4900, -0.0010), (50.0000, -2.4900, 0.0012), 7.2195),
    ((50.0000, -0.0010, 2.4900), (50.0000, 0.0009, -2.4900), 4.8045),
    ((50.0000, -0.0010, 2.4900), (50.0000, 0.0010, -2.4900), 4.8045),
    ((50.0000, -0.0010, 2.4900), (50.0000, 0.0011, -2.4900), 4.7461),
    ((50.0000, 2.5000, 0.0000), (50.0000, 0.0000, -2.5000), 4.3065),
    ((50.0000, 2.5000, 0.0000), (73.0000, 25.0000, -18.0000), 27.1492),
    ((50.0000, 2.5000, 0.0000), (61.0000, -5.0000, 29.0000), 22.8977),
    ((50.0000, 2.5000, 0.0000), (56.0000, -27.0000, -3.0000), 31.9030),
    ((50.0000, 2.5000, 0.0000), (58.0000, 24.0000, 15.0000), 19.4535),
    ((50.0000, 2.5000, 0.0000), (50.0000, 3.1736, 0.5854), 1.0000),
    ((50.0000, 2.5000, 0.0000), (50.0000, 3.2972, 0.0000), 1.0000),
    ((50.0000, 2.5000, 0.0000), (50.0000, 1.8634, 0.5757), 1.0000),
    ((50.0000, 2.5000, 0.0000), (50.0000, 3.2592, 0.3350), 1.0000),
    ((60.2574, -34.0099, 36.2677), (60.4626, -34.1751, 39.4387), 1.2644),
    ((63.0109, -31.0961, -5.8663), (62.8187, -29.7946, -4.0864), 1.2630),
    ((61.2901, 3.7196, -5.3901), (61.4292, 2.2480, -4.9620), 1.8731),
    ((35.0831, -44.1164, 3.7933), (35.0232, -40.0716, 1.5901), 1.8645),
    ((22.7233, 20.0904, -46.6940), (23.0331, 14.9730, -42.5619), 2.0373),
    ((36.4612, 47.8580, 18.3852), (36.2715, 50.5065, 21.2231), 1.4146),
    ((90.8027, -2.0831, 1.4410), (91.1528, -1.6435, 0.0447), 1.4441),
    ((90.9257, -0.5406, -0.9208), (88.6381, -0.8985, -0.7239), 1.5381),
    ((6.7747, -0.2908, -2.4247), (5.8714, -0.0985, -2.2286), 0.6377),
    ((2.0776, 0.0795, -1.1350), (0.9033, -0.0636, -0.5514), 0.9082),
]

TABLE_SHA256 = "7754491d8603d3930791fc232876667536ab172b88aa9bfb87c07aab4bf7fa98"


def brute_force_name(rgb):
    """Nearest table entry using skimage's vectorized CIEDE2000; first index wins ties."""
    table = default_table()
    ref = np.array([tuple(srgb_to_lab(c)) for _, c in table.entries])
    lab = np.array(tuple(srgb_to_lab(rgb)))
    d = deltaE_ciede2000(np.broadcast_to(lab, ref.shape), ref)
    return table.names[int(np.argmin(d))]


@pytest.mark.parametrize("lab1,lab2,expected", SHARMA_PAIRS)
def test_sharma_pairs(lab1, lab2, expected):
    assert delta_e_2000(lab1, lab2) == pytest.approx(expected, abs=1e-4)


def test_table_file_is_pinned():
    raw = resources.files("barqa.data").joinpath("css3_colors.csv").read_bytes()
    assert hashlib.sha256(raw).hexdigest() == TABLE_SHA256


def test_table_has_138_distinct_colors():
    table = default_table()
    assert len(table) == 138
    assert len({rgb for _, rgb in table.entries}) == 138
    # one spelling kept per alias pair
    assert "gray" in table.names and "grey" not in table.names
    assert "aqua" in table.names and "cyan" not in table.names
    assert "fuchsia" in table.names and "magenta" not in table.names


def test_every_named_color_maps_to_itself():
    table = default_table()
    for name, rgb in table.entries:
        assert name_color(rgb) == name


def test_lab_reference_points():
    assert tuple(srgb_to_lab((255, 255, 255))) == pytest.approx((100.0, 0.0, 0.0), abs=1e-3)
    assert tuple(srgb_to_lab((0, 0, 0))) == pytest.approx((0.0, 0.0, 0.0), abs=1e-9)
    # sRGB red under D65
    assert tuple(srgb_to_lab((255, 0, 0))) == pytest.approx((53.2408, 80.0925, 67.2032), abs=2e-3)


def test_lab_agrees_with_skimage():
    rng = np.random.default_rng(7)
    rgbs = rng.integers(0, 256, size=(300, 3))
    ref = rgb2lab(rgbs[None].astype(float) / 255.0)[0]
    for rgb, lab in zip(rgbs, ref):
        # the two use slightly different sRGB->XYZ matrices
        assert tuple(srgb_to_lab(tuple(int(c) for c in rgb))) == pytest.approx(tuple(lab), abs=1e-2)


def test_delta_e_agrees_with_skimage():
    rng = np.random.default_rng(11)
    for _ in range(300):
        a = rng.uniform([0, -100, -100], [100, 100, 100])
        b = rng.uniform([0, -100, -100], [100, 100, 100])
        assert delta_e_2000(a, b) == pytest.approx(float(deltaE_ciede2000(a, b)), abs=1e-9)


def test_random_colors_match_brute_force():
    rnd = random.Random(5)
    for _ in range(200):
        rgb = (rnd.randrange(256), rnd.randrange(256), rnd.randrange(256))
        assert name_color(rgb) == brute_force_name(rgb)


def test_known_palette_names():
    assert name_color((148, 103, 189)) == "mediumpurple"
    assert name_color((147, 112, 219)) == "mediumpurple"
    assert name_color((255, 0, 0)) == "red"


def test_ties_go_to_first_entry():
    table = NamedColorTable((("first", (10, 10, 10)), ("second", (10, 10, 10))))
    assert name_color((10, 10, 10), table) == "first"


def test_hex_round_trip_and_errors():
    assert hex_to_rgb("#9370db") == (147, 112, 219)
    assert rgb_to_hex((147, 112, 219)) == "#9370db"
    with pytest.raises(ValueError):
        hex_to_rgb("#12345")


def test_parse_color_table_rejects_duplicate_names():
    with pytest.raises(ValueError):
        parse_color_table("name,hex\nred,#ff0000\nred,#fe0000\n")


lab_values = st.tuples(
    st.floats(0, 100, allow_nan=False), st.floats(-128, 127, allow_nan=False), st.floats(-128, 127, allow_nan=False)
)


@settings(max_examples=200, deadline=None)
@given(lab_values, lab_values)
def test_delta_e_symmetric_and_nonnegative(a, b):
    d = delta_e_2000(a, b)
    assert d >= 0
    assert d == pytest.approx(delta_e_2000(b, a), abs=1e-6)
    assert delta_e_2000(a, a) == pytest.approx(0.0, abs=1e-9)
