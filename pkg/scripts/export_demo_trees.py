"""Write the case-study frame trees as JSONL so `fngrammar realize` can replay them."""

import argparse
import json
from pathlib import Path

from fngrammar.applications import (
    LE_GENERAL_BONAPARTE,
    PHRASEBOOK_DEMO,
    demo_bundle,
    painting_trees,
    phrasebook_tree,
)
from fngrammar.realizer import tree_to_record


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "src/fngrammar/data/demo"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    bundle = demo_bundle()
    for lang in ("en", "sv"):
        sets = {
            f"painting_{lang}.jsonl": painting_trees(LE_GENERAL_BONAPARTE[lang], lang, bundle),
            f"phrasebook_{lang}.jsonl": [phrasebook_tree(a, lang, bundle) for a in PHRASEBOOK_DEMO[lang]],
        }
        for name, trees in sets.items():
            with open(out / name, "w", encoding="utf-8") as fh:
                for t in trees:
                    fh.write(json.dumps(tree_to_record(t), ensure_ascii=False, sort_keys=True) + "\n")
            print(out / name)


if __name__ == "__main__":
    main()
