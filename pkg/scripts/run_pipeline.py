"""Run extract -> share -> generate -> realize on the bundled samples and
print the summary counts, coverage and case-study texts."""

import argparse
import tempfile
from pathlib import Path

from fngrammar.applications import data_path
from fngrammar.cli import main


def step(*argv):
    code = main([str(a) for a in argv])
    if code:
        raise SystemExit(code)


def run(out: Path, derive_passive: bool):
    frames = data_path("frames.jsonl")
    for lang in ("en", "sv"):
        step("extract", "--corpus", data_path(f"sample_{lang}.jsonl"), "--frames", frames,
             "--out", out / f"patterns_{lang}.jsonl")
    share = ["share", out / "patterns_en.jsonl", out / "patterns_sv.jsonl", "--out", out / "shared.jsonl"]
    step(*share, *(["--derive-passive"] if derive_passive else []))
    step("stats", out / "shared.jsonl")
    step("coverage", out / "shared.jsonl", "--corpus", data_path("coverage_probe_en.jsonl"), "--frames", frames)
    step("generate", out / "shared.jsonl", "--lexicon", data_path("lexicon_en.jsonl"),
         "--lexicon", data_path("lexicon_sv.jsonl"), "--out", out / "grammar")
    if derive_passive:
        return  # the demo trees are written against the observed-only grammar
    for lang in ("en", "sv"):
        step("realize", out / "grammar", data_path(f"demo/painting_{lang}.jsonl"), "--lang", lang)
        step("realize", out / "grammar", data_path(f"demo/phrasebook_{lang}.jsonl"), "--lang", lang,
             "--lowercase", "--lines")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", help="output directory (default: a temporary one)")
    ap.add_argument("--derive-passive", action="store_true")
    args = ap.parse_args()
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        run(Path(args.out), args.derive_passive)
    else:
        with tempfile.TemporaryDirectory() as tmp:
            run(Path(tmp), args.derive_passive)
