"""Nearest named color under CIEDE2000.

Colors are converted from 8-bit sRGB to CIE L*a*b* (D65, 2 degree observer)
and compared against the 138 distinct CSS3/X11 named colors.  The table keeps
one spelling per RGB triple: names are taken in alphabetical order and any
later name with an already-seen RGB (cyan, magenta and the ``grey`` spellings)
is dropped.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

RGB = tuple[int, int, int]

# D65 reference white, 2 degree observer
_WHITE = (0.95047, 1.0, 1.08883)
_EPS = 216 / 24389
_KAPPA = 24389 / 27


@dataclass(frozen=True)
class LabColor:
    L: float
    a: float
    b: float

    def __iter__(self):
        return iter((self.L, self.a, self.b))


@dataclass(frozen=True)
class NamedColorTable:
    entries: tuple[tuple[str, RGB], ...]

    def __post_init__(self):
        names = [n for n, _ in self.entries]
        if len(set(names)) != len(names):
            raise ValueError("duplicate color names in table")

    def __len__(self) -> int:
        return len(self.entries)

    def rgb(self, name: str) -> RGB:
        for n, rgb in self.entries:
            if n == name:
                return rgb
        raise KeyError(name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.entries)


def hex_to_rgb(value: str) -> RGB:
    value = value.lstrip("#")
    if len(value) != 6:
        raise ValueError(f"bad hex color {value!r}")
    return (int(value[0:2], 16), int(value[2:4], 16), int(value[4:6], 16))


def rgb_to_hex(rgb: RGB) -> str:
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def parse_color_table(text: str) -> NamedColorTable:
    reader = csv.DictReader(io.StringIO(text))
    return NamedColorTable(tuple((row["name"], hex_to_rgb(row["hex"])) for row in reader))


@lru_cache(maxsize=1)
def default_table() -> NamedColorTable:
    text = resources.files("barqa.data").joinpath("css3_colors.csv").read_text(encoding="utf-8")
    return parse_color_table(text)


def _linearize(c: float) -> float:
    c = c / 255.0
    return c / 12.92 if c <= 0.04045 else ((c + 0.055) / 1.055) ** 2.4


def _f(t: float) -> float:
    return t ** (1 / 3) if t > _EPS else (_KAPPA * t + 16) / 116


def srgb_to_lab(rgb: RGB) -> LabColor:
    r, g, b = (_linearize(c) for c in rgb)
    x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b
    y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b
    z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b
    fx, fy, fz = _f(x / _WHITE[0]), _f(y / _WHITE[1]), _f(z / _WHITE[2])
    return LabColor(116 * fy - 16, 500 * (fx - fy), 200 * (fy - fz))


def delta_e_2000(c1, c2, kL: float = 1.0, kC: float = 1.0, kH: float = 1.0) -> float:
    """CIEDE2000 color difference between two L*a*b* colors.

    Accepts :class:`LabColor` or any ``(L, a, b)`` sequence.  Hue angles follow
    the Sharma, Wu and Dalal conventions: ``h' = 0`` when ``a' = b = 0`` and the
    mean hue is the plain sum when either chroma is zero.
    """
    L1, a1, b1 = c1
    L2, a2, b2 = c2
    c_bar = (math.hypot(a1, b1) + math.hypot(a2, b2)) / 2
    c_bar7 = c_bar**7
    g = 0.5 * (1 - math.sqrt(c_bar7 / (c_bar7 + 25.0**7)))
    a1p, a2p = (1 + g) * a1, (1 + g) * a2
    c1p, c2p = math.hypot(a1p, b1), math.hypot(a2p, b2)
    h1p = math.degrees(math.atan2(b1, a1p)) % 360 if (a1p or b1) else 0.0
    h2p = math.degrees(math.atan2(b2, a2p)) % 360 if (a2p or b2) else 0.0

    dLp = L2 - L1
    dCp = c2p - c1p
    if c1p * c2p == 0:
        dhp = 0.0
    else:
        dhp = h2p - h1p
        if dhp > 180:
            dhp -= 360
        elif dhp < -180:
            dhp += 360
    dHp = 2 * math.sqrt(c1p * c2p) * math.sin(math.radians(dhp) / 2)

    Lp_bar = (L1 + L2) / 2
    Cp_bar = (c1p + c2p) / 2
    if c1p * c2p == 0:
        hp_bar = h1p + h2p
    elif abs(h1p - h2p) <= 180:
        hp_bar = (h1p + h2p) / 2
    elif h1p + h2p < 360:
        hp_bar = (h1p + h2p + 360) / 2
    else:
        hp_bar = (h1p + h2p - 360) / 2

    t = (
        1
        - 0.17 * math.cos(math.radians(hp_bar - 30))
        + 0.24 * math.cos(math.radians(2 * hp_bar))
        + 0.32 * math.cos(math.radians(3 * hp_bar + 6))
        - 0.20 * math.cos(math.radians(4 * hp_bar - 63))
    )
    d_theta = 30 * math.exp(-(((hp_bar - 275) / 25) ** 2))
    cp_bar7 = Cp_bar**7
    r_c = 2 * math.sqrt(cp_bar7 / (cp_bar7 + 25.0**7))
    s_l = 1 + 0.015 * (Lp_bar - 50) ** 2 / math.sqrt(20 + (Lp_bar - 50) ** 2)
    s_c = 1 + 0.045 * Cp_bar
    s_h = 1 + 0.015 * Cp_bar * t
    r_t = -math.sin(math.radians(2 * d_theta)) * r_c

    tl = dLp / (kL * s_l)
    tc = dCp / (kC * s_c)
    th = dHp / (kH * s_h)
    return math.sqrt(max(0.0, tl * tl + tc * tc + th * th + r_t * tc * th))


@lru_cache(maxsize=8)
def _table_labs(table: NamedColorTable) -> tuple[LabColor, ...]:
    return tuple(srgb_to_lab(rgb) for _, rgb in table.entries)


def name_color(rgb: RGB, table: NamedColorTable | None = None) -> str:
    """Name of the table entry with the lowest CIEDE2000 distance.

    Exact ties go to the entry listed first in the table.
    """
    table = table or default_table()
    return _name_color(tuple(int(c) for c in rgb), table)


@lru_cache(maxsize=4096)
def _name_color(rgb: RGB, table: NamedColorTable) -> str:
    lab = srgb_to_lab(rgb)
    best_name, best = None, math.inf
    for (name, _), ref in zip(table.entries, _table_labs(table)):
        d = delta_e_2000(lab, ref)
        if d < best:
            best_name, best = name, d
    return best_name
