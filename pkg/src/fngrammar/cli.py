"""Command-line entry point: extract, share, generate, stats, coverage, realize, demo.

Exit codes: 0 success, 1 bad input, 2 internal invariant failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path

from .codegen import (
    GrammarBundle,
    NamingError,
    TemplateError,
    compile_grammar,
    load_bundle,
    load_lexicon,
    roundtrip_problems,
    write_bundle,
)
from .corpus_model import CorpusError, load_corpus
from .extraction import DEFAULT_TABLE, extract_all, load_table, read_patterns, write_patterns, write_skips
from .grammar_syntax import GrammarSyntaxError
from .pattern_algebra import (
    coverage,
    derive_passive,
    filter_once_used,
    format_stats,
    shared_set,
    stats,
    stats_records,
)
from .realizer import RealizationError, Tense, load_trees, mk_text, realize_sentence

LANGS = ("en", "sv")


class InputError(Exception):
    pass


class InternalError(Exception):
    pass


@dataclass
class PipelineConfig:
    corpora: list[Path] = field(default_factory=list)
    frames: Path | None = None
    ptypes: Path | None = None
    min_freq: list[int] = field(default_factory=list)
    derive_passive: bool = False
    out: Path | None = None
    langs: tuple[str, ...] = LANGS

    def __post_init__(self):
        bad = set(self.langs) - set(LANGS)
        if bad:
            raise InputError(f"unsupported language(s): {', '.join(sorted(bad))}")

    def min_freq_for(self, i: int) -> int:
        if not self.min_freq:
            return 1
        return self.min_freq[i] if i < len(self.min_freq) else self.min_freq[-1]


def _table(cfg: PipelineConfig):
    return load_table(cfg.ptypes) if cfg.ptypes else DEFAULT_TABLE


def run_extract(cfg: PipelineConfig, corpus: Path, min_freq: int = 1):
    if cfg.frames is None:
        raise InputError("--frames is required")
    table = _table(cfg)
    res = extract_all(load_corpus(corpus, cfg.frames, table), table)
    ps = filter_once_used(res.patterns, min_freq) if min_freq > 1 else res.patterns
    return ps, res


def run_share(pattern_sets, derive: bool = False):
    if len(pattern_sets) < 2:
        raise InputError("share needs at least two pattern sets")
    shared = pattern_sets[0]
    for other in pattern_sets[1:]:
        shared = shared_set(shared, other)
    return derive_passive(shared) if derive else shared


def share_summary(ps) -> str:
    return f"{len(ps)} patterns covering {len(ps.frames)} frames"


def run_generate(shared, lexicon_paths, langs=LANGS, name="FrameNet") -> GrammarBundle:
    lexicon = [e for p in lexicon_paths for e in load_lexicon(p)]
    bundle = compile_grammar(shared, lexicon, langs, name)
    problems = roundtrip_problems(bundle) + bundle.check()
    if problems:
        raise InternalError("round-trip self-check failed: " + "; ".join(problems))
    return bundle


def cmd_extract(a) -> int:
    cfg = PipelineConfig([Path(a.corpus)], Path(a.frames), Path(a.ptypes) if a.ptypes else None, [a.min_freq])
    ps, res = run_extract(cfg, cfg.corpora[0], a.min_freq)
    out = Path(a.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_patterns(ps, out)
    write_skips(res.skips, out.with_name(out.stem + ".skips.jsonl"))
    print(f"{len(ps)} patterns from {res.total} sentences, {len(res.skips)} skipped ({res.skip_rate:.1%})")
    return 0


def cmd_share(a) -> int:
    shared = run_share([read_patterns(p) for p in a.patterns], a.derive_passive)
    out = Path(a.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_patterns(shared, out)
    print(share_summary(shared))
    return 0


def cmd_generate(a) -> int:
    langs = tuple(a.lang) if a.lang else LANGS
    bundle = run_generate(read_patterns(a.shared), a.lexicon, langs, a.name)
    written = write_bundle(bundle, a.out)
    print(f"{len(bundle.functions)} frame functions; wrote {', '.join(sorted(written))}")
    return 0


def cmd_stats(a) -> int:
    rows = stats(read_patterns(a.patterns))
    if a.json:
        for r in stats_records(rows):
            print(json.dumps(r))
    else:
        sys.stdout.write(format_stats(rows))
    return 0


def cmd_coverage(a) -> int:
    table = load_table(a.ptypes) if a.ptypes else DEFAULT_TABLE
    shared = read_patterns(a.shared)
    corpus = load_corpus(a.corpus, a.frames, table)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        value = coverage(shared, corpus, table)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    print(f"coverage {value:.4f}")
    return 0


def cmd_realize(a) -> int:
    bundle = load_bundle(a.bundle)
    trees = load_trees(a.trees, a.lang)
    if a.tense:
        trees = [replace(t, tense=Tense(a.tense)) for t in trees]
    sentences = [realize_sentence(t, bundle, a.lang, capitalized=not a.lowercase) for t in trees]
    print(mk_text(sentences) if not a.lines else "\n".join(sentences))
    return 0


def cmd_demo(a) -> int:
    from .applications import LE_GENERAL_BONAPARTE, PHRASEBOOK_DEMO, demo_bundle, realize_painting, realize_phrasebook

    bundle = demo_bundle()
    if a.out:
        write_bundle(bundle, a.out)
    print(share_summary_from_bundle(bundle))
    for lang in LANGS:
        print(f"[{lang}]")
        for action in PHRASEBOOK_DEMO[lang]:
            print(realize_phrasebook(action, lang, bundle))
        print(realize_painting(LE_GENERAL_BONAPARTE[lang], lang, bundle))
    return 0


def share_summary_from_bundle(b: GrammarBundle) -> str:
    frames = {d.frame for d in b.functions}
    return f"{len(b.functions)} patterns covering {len(frames)} frames"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fngrammar", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="extract valence patterns from an annotated corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--frames", required=True)
    p.add_argument("--ptypes", help="phrase-type generalization table (JSON)")
    p.add_argument("--min-freq", type=int, default=1, help="drop patterns seen fewer times")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("share", help="compute the shared pattern set")
    p.add_argument("patterns", nargs="+")
    p.add_argument("--derive-passive", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_share)

    p = sub.add_parser("generate", help="compile a shared set into grammar files")
    p.add_argument("shared")
    p.add_argument("--lexicon", action="append", default=[], required=True)
    p.add_argument("--lang", action="append", choices=LANGS)
    p.add_argument("--name", default="FrameNet")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("stats", help="count patterns per syntactic skeleton")
    p.add_argument("patterns")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("coverage", help="fraction of corpus sentences covered by a shared set")
    p.add_argument("shared")
    p.add_argument("--corpus", required=True)
    p.add_argument("--frames", required=True)
    p.add_argument("--ptypes")
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("realize", help="linearize frame trees")
    p.add_argument("bundle")
    p.add_argument("trees")
    p.add_argument("--lang", required=True, choices=LANGS)
    p.add_argument("--tense", choices=[t.value for t in Tense])
    p.add_argument("--lowercase", action="store_true", help="do not capitalize sentences")
    p.add_argument("--lines", action="store_true", help="one sentence per line instead of a paragraph")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("demo", help="build the bundled demo grammar and print the case studies")
    p.add_argument("--out")
    p.set_defaults(func=cmd_demo)
    return ap


INPUT_ERRORS = (InputError, CorpusError, GrammarSyntaxError, RealizationError, OSError, json.JSONDecodeError,
                KeyError, ValueError)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InternalError, TemplateError, NamingError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    except INPUT_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
