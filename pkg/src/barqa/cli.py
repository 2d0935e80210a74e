"""Command line entry point: ``barqa generate|score|inspect|color-name``."""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

from .colors import hex_to_rgb, name_color, rgb_to_hex
from .dem import local_dictionary_for
from .evaluation import (
    EDIT1_SCOPES,
    MODES,
    ScoringError,
    load_gold,
    load_predictions,
    localization_report,
    score,
)
from .layout import layout, validate_metadata
from .model import validate_spec
from .pipeline import GenerationError, generate, load_chart
from .sampler import ConfigError, GeneratorConfig, VocabularyError, load_config

SEED_ENV = "BARQA_SEED"
EXIT_FORMAT = 2


def _config(path: str | None) -> GeneratorConfig:
    config = load_config(path) if path else GeneratorConfig()
    seed = os.environ.get(SEED_ENV)
    if seed:
        try:
            config = dataclasses.replace(config, master_seed=int(seed))
        except ValueError:
            raise ConfigError(f"{SEED_ENV} must be an integer, got {seed!r}") from None
    return config


def cmd_generate(args) -> int:
    try:
        config = _config(args.config)
        manifest = generate(config, args.out)
    except (ConfigError, VocabularyError, GenerationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for split, info in manifest["splits"].items():
        print(f"{split:<14} images={info['images']:<6} questions={info['questions']:<7} "
              f"unique_answers={info['unique_answers']}")
    print(f"wrote {len(manifest['files']) + 1} files to {args.out}")
    return 0


def cmd_score(args) -> int:
    try:
        gold = [rec for path in args.gold for rec in load_gold(path)]
        preds = load_predictions(args.pred)
        report = score(preds, gold, args.mode, args.edit1_scope)
    except (ScoringError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    print(report.to_text(), end="")
    out = {"accuracy": report.to_dict()}
    if any(p.predicted_box is not None for p in preds):
        loc = localization_report(preds, gold)
        print(loc.to_text(), end="")
        out["localization"] = loc.to_dict()
    if args.report:
        Path(args.report).write_text(json.dumps(out, indent=1) + "\n", encoding="utf-8")
    return 0


def cmd_inspect(args) -> int:
    try:
        meta, spec = load_chart(args.metadata)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: cannot parse {args.metadata}: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    if args.what == "dem":
        sys.stdout.write(local_dictionary_for(meta).to_jsonl())
        return 0
    if args.what == "colors":
        for bar in meta.bars:
            print(f"bar group={bar.group} series={bar.series} {rgb_to_hex(bar.rgb)} → {bar.color_name}")
        for lg in meta.legend_boxes:
            print(f"legend series={lg.series} {rgb_to_hex(lg.rgb)} → {lg.color_name}")
        return 0
    problems = validate_metadata(meta)
    for bar in meta.bars:
        if name_color(bar.rgb) != bar.color_name:
            problems.append(f"bar ({bar.group},{bar.series}) color name {bar.color_name!r} is stale")
    if spec is not None:
        problems += [f"spec: {v}" for v in validate_spec(spec).violations]
        if layout(spec) != meta:
            problems.append("metadata differs from a fresh layout of the embedded spec")
    for p in problems:
        print(p)
    print(f"{len(problems)} violations")
    return 1 if problems else 0


def _parse_rgb(text: str):
    if "," in text:
        parts = [int(p) for p in text.split(",")]
        if len(parts) != 3 or not all(0 <= p <= 255 for p in parts):
            raise ValueError("expected r,g,b with components in 0..255")
        return tuple(parts)
    return hex_to_rgb(text)


def cmd_color_name(args) -> int:
    for text in args.colors:
        try:
            rgb = _parse_rgb(text)
        except ValueError as exc:
            print(f"error: {text}: {exc}", file=sys.stderr)
            return EXIT_FORMAT
        print(f"{rgb_to_hex(rgb)} → {name_color(rgb)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="barqa", description="Synthetic bar-chart QA toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate charts, QA records and a manifest")
    g.add_argument("--config", help="key = value config file (defaults apply when omitted)")
    g.add_argument("--out", required=True, help="output directory (must be absent or empty)")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("score", help="score predictions against gold QA records")
    s.add_argument("--gold", required=True, nargs="+", help="gold qa.jsonl file(s)")
    s.add_argument("--pred", required=True, help="predictions JSON Lines file")
    s.add_argument("--mode", choices=MODES, default="exact")
    s.add_argument("--edit1-scope", choices=EDIT1_SCOPES, default="all",
                   help="answers the edit1 tolerance applies to")
    s.add_argument("--report", help="also write the report as JSON to this path")
    s.set_defaults(func=cmd_score)

    i = sub.add_parser("inspect", help="inspect a chart metadata file")
    i.add_argument("metadata")
    i.add_argument("what", choices=("dem", "colors", "validate"))
    i.set_defaults(func=cmd_inspect)

    c = sub.add_parser("color-name", help="nearest named color for hex or r,g,b values")
    c.add_argument("colors", nargs="+")
    c.set_defaults(func=cmd_color_name)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
