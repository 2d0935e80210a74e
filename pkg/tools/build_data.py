"""Regenerate the static data files bundled in ``barqa/data``.

This is a one-off maintenance script, not part of the package.  It needs
``matplotlib``, ``fonttools``, ``wonderwords`` and ``wordfreq`` which are *not* runtime
dependencies.  The generated files are committed; the package never runs this.

    python tools/build_data.py
"""

from __future__ import annotations

import json
import os
import re
from pathlib import Path

import matplotlib
import matplotlib.colors as mcolors
from fontTools.ttLib import TTFont
import wonderwords
import wordfreq

DATA = Path(__file__).resolve().parents[1] / "src" / "barqa" / "data"

# Words that the noun list carries but that read as function words, verbs,
# names, brands, or sensitive topics.  Also anything a question template uses.
STOP = set(
    """
    can will other first well way most right being going still down might doing
    thought anything nothing making means thanks due possible yourself talking
    thinking outside inside running worth simple safe die waiting tonight
    tomorrow beyond favorite nobody opening sick somebody till forever anywhere
    hello plenty usual guilty familiar aside anybody latter valuable relative
    stable formal ideal checking reveal min vol bother briefly choosing rip wont
    con sub max bob smith jack nick ford howard arthur carter robin warren
    oxford amazon twitter android chuck babe eve someone everyone anyone self
    god death killing suicide racist racism lesbian slave slavery breast drug
    crime abuse assault gun weapon violence criminal prison killer devil terror
    bombing invasion riot missile rifle bullet witch divorce cancer diabetes
    illness disease syndrome alcohol smoking tobacco casino guilt lover mama
    daddy dude guy democrat senator senate congress sex sexy porn hell damn
    kill murder rape war army military combat enemy victim torture blood
    funeral dying dead bomb shot shooting police cop gang fraud theft
    value values bar bars chart charts label labels group groups item items
    store stores dataset datasets algorithm algorithms object objects category
    categories people percent percentage accuracy units unit sum total
    difference element elements color colors colour scale number person zero
    hundred thousand million billion dozen second fifth quarter sold most
    least each single solid pattern patterns legend title stack stacks yes no
    one two three four five six seven eight nine ten eleven twelve many much
    left bottom top above below largest smallest highest lowest stacked
    horizontal vertical negative logarithmic chart whole average mean median
    sample samples maybe full weird opposite equal affect resist stole contrary
    wasting meantime freak savage hatred curse demon poison gambling men
    """.split()
)


def _asset(name: str) -> list[str]:
    d = os.path.join(os.path.dirname(wonderwords.__file__), "assets")
    with open(os.path.join(d, name)) as fh:
        return [w.strip() for w in fh]


def build_colors() -> list[str]:
    table = {k: v.lower() for k, v in mcolors.CSS4_COLORS.items() if k != "rebeccapurple"}
    seen: dict[str, str] = {}
    rows = []
    for name in sorted(table):
        if table[name] in seen:
            continue
        seen[table[name]] = name
        rows.append(f"{name},{table[name]}")
    assert len(rows) == 138
    (DATA / "css3_colors.csv").write_text("name,hex\n" + "\n".join(rows) + "\n")
    return sorted(table)


def build_words(color_names: list[str]) -> None:
    banned = set(_asset("profanitylist.txt")) | set(_asset("verblist.txt"))
    banned |= set(_asset("adjectivelist.txt")) | STOP | set(color_names)
    words = []
    for w in dict.fromkeys(_asset("nounlist.txt")):
        if re.fullmatch(r"[a-z]{3,8}", w) and w not in banned:
            words.append(w)
    words.sort(key=lambda w: (-wordfreq.word_frequency(w, "en"), w))
    (DATA / "familiar_words.txt").write_text("\n".join(words[:1000]) + "\n")
    (DATA / "novel_words.txt").write_text("\n".join(words[1000:1500]) + "\n")


def build_glyphs() -> None:
    """Advance widths of DejaVu Sans (the font matplotlib ships) for printable ASCII."""
    path = Path(matplotlib.get_data_path()) / "fonts" / "ttf" / "DejaVuSans.ttf"
    font = TTFont(path)
    upem = font["head"].unitsPerEm
    cmap, hmtx = font.getBestCmap(), font["hmtx"]
    advances = {}
    for code in range(32, 127):
        adv = hmtx[cmap[code]][0]
        advances[chr(code)] = round(adv * 1000 / upem)
    table = {
        "font": "DejaVu Sans",
        "units_per_em": 1000,
        "default_advance": advances["M"],
        "line_height": 1.2,
        "advances": advances,
    }
    (DATA / "glyph_widths.json").write_text(json.dumps(table, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    build_words(build_colors())
    build_glyphs()
