"""Skeleton statistics for a pattern file, or for the synthetic one-pattern-per-row
set used in the tests when no file is given."""

import argparse
from pathlib import Path

from fngrammar.extraction import PatternSet, ValencePattern, read_patterns
from fngrammar.pattern_algebra import format_stats, stats

SYNTHETIC = Path(__file__).resolve().parents[1] / "tests" / "data" / "skeleton_patterns.txt"

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("patterns", nargs="?", help="pattern file (JSONL)")
    args = ap.parse_args()
    if args.patterns:
        ps = read_patterns(args.patterns)
    else:
        ps = PatternSet.from_patterns("skeletons", [ValencePattern.parse(line)
                                                 for line in SYNTHETIC.read_text().splitlines()])
    rows = stats(ps)
    print(format_stats(rows), end="")
    print(f"{len(rows)} skeletons over {len(ps)} patterns")
