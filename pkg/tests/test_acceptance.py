"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import hashlib
import random
import re
import time

import pytest

from fngrammar.applications import (
    LE_GENERAL_BONAPARTE,
    PHRASEBOOK_DEMO,
    data_path,
    realize_painting,
    realize_phrasebook,
)
from fngrammar.cli import main
from fngrammar.codegen import (
    bundle_sources,
    compile_grammar,
    gen_abstract,
    gen_concrete,
    merge_bundles,
    name_functions,
    parse_grammar,
)
from fngrammar.corpus_model import PhraseCat, SynRole, VerbType, Voice
from fngrammar.extraction import FERealization, PatternSet, ValencePattern, canonical_fes, extract_all, extract_pattern
from fngrammar.pattern_algebra import coverage, shared_set, stats, subsumes
from fngrammar.realizer import AdvPhrase, Tense, apply_frame_function, interpret_lin, mk_clause, np
from conftest import DATA, golden
from oracles import coverage_oracle, shared_set_oracle, subsumes_oracle
from strategies import random_args


@pytest.fixture
def report(capsys):
    def _report(n: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
        assert ok, detail
    return _report


def random_pattern(rnd: random.Random) -> ValencePattern:
    fes, used = [], set()
    for _ in range(rnd.randint(0, 5)):
        cat = rnd.choice(list(PhraseCat))
        role = SynRole.None_
        if cat is PhraseCat.NP:
            free = [r for r in (SynRole.Subj, SynRole.DObj, SynRole.IObj, SynRole.Agent) if r not in used]
            if not free:
                continue
            role = rnd.choice(free)
            used.add(role)
        fes.append(FERealization(rnd.choice("ABCD"), cat, role))
    return ValencePattern(rnd.choice(["F", "G"]), rnd.choice(list(VerbType)), rnd.choice(list(Voice)),
                          canonical_fes(fes))


def random_pair(rnd: random.Random):
    a = random_pattern(rnd)
    if rnd.random() < 0.5:
        # a sub-multiset of a, sometimes with the head perturbed
        b = ValencePattern(a.frame, a.verb_type, a.voice, tuple(r for r in a.fes if rnd.random() < 0.6))
        if rnd.random() < 0.2:
            b = ValencePattern(a.frame, rnd.choice(list(VerbType)), rnd.choice(list(Voice)), b.fes)
        return a, b
    return a, random_pattern(rnd)


def test_1_subsumption_oracle(report):
    rnd = random.Random(20240601)
    pairs = [random_pair(rnd) for _ in range(10_000)]
    start = time.perf_counter()
    mismatches = sum(subsumes(a, b) != subsumes_oracle(a, b) for a, b in pairs)
    elapsed = time.perf_counter() - start
    positives = sum(subsumes(a, b) for a, b in pairs)
    report(1, mismatches == 0 and elapsed < 10.0,
           f"10000 pairs ({positives} subsuming), {mismatches} mismatches, {elapsed:.2f}s (< 10s)")


def test_2_shared_set(report, corpus_en, corpus_sv):
    s1, s2 = extract_all(corpus_en).patterns, extract_all(corpus_sv).patterns
    frames = s1.frames | s2.frames
    shared = shared_set(s1, s2)
    oracle = shared_set_oracle(s1.counts, s2.counts)
    antichain = all(p == q or not subsumes(p, q) for p in shared.counts for q in shared.counts)
    needed = {"Desiring", "Giving", "Hear", "Request", "Suasion", "Residence", "Motion", "Possession",
              "Create_physical_artwork", "Dimension", "Being_located"}
    ok = shared.counts == oracle and antichain and needed <= shared.frames and len(frames) >= 10
    report(2, ok, f"{len(corpus_en) + len(corpus_sv)} sentences, {len(shared)} shared patterns over "
                  f"{len(shared.frames)} frames; equals oracle={shared.counts == oracle}, antichain={antichain}")


def test_3_skeleton_reproduction(report):
    rows = (DATA / "skeleton_rows.txt").read_text().splitlines()
    pats = [ValencePattern.parse(line) for line in (DATA / "skeleton_patterns.txt").read_text().splitlines()]
    got = sorted(str(sk) for sk, _ in stats(PatternSet.from_patterns("skeletons", pats)))
    agents = sum(r.role is SynRole.Agent for p in pats for r in p.fes)
    report(3, got == sorted(rows) and len(got) == 20,
           f"{len(got)} skeletons from {len(pats)} patterns ({agents} Agent slots shown as Adv)")


def _norm(text: str) -> list[str]:
    return re.findall(r"[()]|[^\s()]+", text)


def test_4_desiring_goldens(report):
    pats = [ValencePattern.parse(t) for t in [
        "Desiring/V_Act Experiencer/NP_Subj Focal_participant/Adv",
        "Desiring/V2_Act Experiencer/NP_Subj Focal_participant/NP_DObj",
        "Desiring/V2_Pass Experiencer/NP_Agent Focal_participant/NP_Subj",
        "Desiring/VV_Act Event/VP Experiencer/NP_Subj",
    ]]
    decls = name_functions(PatternSet.from_patterns("d", pats))
    funs = [line for line in gen_abstract(decls).splitlines() if line.startswith("fun ")]
    sig_ok = [_norm(f) for f in funs] == [_norm(f) for f in golden("desiring_abstract.txt").splitlines()]
    lin_re = r"^lin \w+ [^=]*= \{.*?\}$"
    lins = re.findall(lin_re, gen_concrete(decls, "en"), flags=re.M | re.S)
    want = re.findall(lin_re, golden("desiring_concrete.txt"), flags=re.M | re.S)
    lin_ok = [_norm(x) for x in lins] == [_norm(x) for x in want]
    passive = "mkVP (passiveVP v2) (mkAdv by8agent_Prep (fromMaybe NP experiencer))" in gen_concrete(decls, "en")
    report(4, sig_ok and lin_ok and passive,
           f"signatures match={sig_ok}, linearizations match={lin_ok}, passive structure={passive}")


def _bundles_under_test(bundle, lexicon):
    reference = [ValencePattern.parse(line) for line in (DATA / "skeleton_patterns.txt").read_text().splitlines()]
    desiring = [p for p in bundle.functions if p.frame == "Desiring"]
    return {
        "demo": bundle,
        "skeletons": compile_grammar(PatternSet.from_patterns("t", reference), lexicon),
        "desiring": compile_grammar(PatternSet.from_patterns("d", [d.pattern for d in desiring]), lexicon, ("en",)),
        "empty": compile_grammar(PatternSet("e"), [], ("sv",)),
    }


def test_5_round_trip(report, bundle, lexicon):
    failed = []
    bundles = _bundles_under_test(bundle, lexicon)
    for name, b in bundles.items():
        parsed = merge_bundles(parse_grammar(src) for src in bundle_sources(b).values())
        if parsed != b:
            failed.append(name)
    report(5, not failed, f"{len(bundles)} bundles re-parsed, mismatches: {failed or 'none'}")


def test_6_realizer_goldens(report, bundle):
    start = time.perf_counter()
    want_v2 = apply_frame_function(bundle.function("Desiring_V2_Act"),
                                   {"Experiencer_NP": np("she"), "Focal_participant_NP": np("a protector")},
                                   bundle.lexical("want_V2_Desiring", "en"))
    yearn = apply_frame_function(bundle.function("Desiring_V"),
                                 {"Experiencer_NP": np("Dexter"), "Focal_participant_Adv": AdvPhrase("for a cigarette")},
                                 bundle.lexical("yearn_V_Desiring", "en"))
    got = {
        "a1": mk_clause(want_v2, Tense.Pres, capitalized=False),
        "a2": mk_clause(yearn, Tense.Past),
        "b_en": [realize_phrasebook(a, "en", bundle) for a in PHRASEBOOK_DEMO["en"]],
        "b_sv": [realize_phrasebook(a, "sv", bundle) for a in PHRASEBOOK_DEMO["sv"]],
        "c_en": realize_painting(LE_GENERAL_BONAPARTE["en"], "en", bundle),
        "c_sv": realize_painting(LE_GENERAL_BONAPARTE["sv"], "sv", bundle),
    }
    elapsed = time.perf_counter() - start
    want = {
        "a1": "she wants a protector",
        "a2": "Dexter yearned for a cigarette",
        "b_en": golden("phrasebook_en.txt").splitlines(),
        "b_sv": golden("phrasebook_sv.txt").splitlines(),
        "c_en": golden("painting_en.txt"),
        "c_sv": golden("painting_sv.txt"),
    }
    wrong = [k for k in want if got[k] != want[k]]
    report(6, not wrong and elapsed < 1.0, f"{len(want)} golden groups, wrong: {wrong or 'none'}, {elapsed * 1000:.1f} ms")


def test_7_codegen_realizer_agreement(report, bundle):
    rnd = random.Random(7)
    checked = mismatches = 0
    for decl in bundle.functions:
        for lang in ("en", "sv"):
            verbs = [e for e in bundle.lexicons[lang] if e.verb_type is decl.verb_type]
            intrans = [e for e in bundle.lexicons[lang] if e.verb_type is VerbType.V]
            lin = bundle.concretes[lang][decl.name]
            for _ in range(100):
                verb = rnd.choice(verbs)
                args = random_args(decl, lang, rnd, intrans)
                direct = apply_frame_function(decl, args, verb)
                via = interpret_lin(lin, decl.arg_categories, args, verb)
                tense = rnd.choice(list(Tense))
                checked += 1
                if direct != via or mk_clause(direct, tense) != mk_clause(via, tense):
                    mismatches += 1
    report(7, mismatches == 0,
           f"{len(bundle.functions)} functions x 2 languages x 100 assignments = {checked}, {mismatches} mismatches")


def test_8_coverage(report, frames, corpus_en, corpus_sv, probe_corpus):
    shared = shared_set(extract_all(corpus_en).patterns, extract_all(corpus_sv).patterns)
    per_corpus = {}
    for c in (corpus_en, corpus_sv, probe_corpus):
        got = coverage(shared, c)
        per_corpus[c.fn_id] = (got, coverage_oracle(shared.counts, c, lambda s: extract_pattern(s, frames)))
    agree = all(a == b for a, b in per_corpus.values())
    probe = coverage(shared, probe_corpus)
    skip_rate = extract_all(corpus_en).skip_rate
    report(8, agree and probe == 0.96 and skip_rate == 0.04,
           f"oracle agreement={agree}, probe coverage={probe} (want 0.96), English skip rate={skip_rate} (want 0.04)")


def _full_run(out, capsys):
    frames = data_path("frames.jsonl")
    for lang in ("en", "sv"):
        assert main(["extract", "--corpus", str(data_path(f"sample_{lang}.jsonl")), "--frames", str(frames),
                     "--out", str(out / f"{lang}.jsonl")]) == 0
    assert main(["share", str(out / "en.jsonl"), str(out / "sv.jsonl"), "--out", str(out / "shared.jsonl")]) == 0
    assert main(["share", str(out / "en.jsonl"), str(out / "sv.jsonl"), "--derive-passive",
                 "--out", str(out / "shared_passive.jsonl")]) == 0
    assert main(["generate", str(out / "shared.jsonl"), "--lexicon", str(data_path("lexicon_en.jsonl")),
                 "--lexicon", str(data_path("lexicon_sv.jsonl")), "--out", str(out / "grammar")]) == 0
    for lang in ("en", "sv"):
        for demo in ("painting", "phrasebook"):
            assert main(["realize", str(out / "grammar"), str(data_path(f"demo/{demo}_{lang}.jsonl")),
                         "--lang", lang]) == 0
            (out / f"{demo}_{lang}.txt").write_text(capsys.readouterr().out, encoding="utf-8")
    capsys.readouterr()
    h = hashlib.sha256()
    for p in sorted(out.rglob("*")):
        if p.is_file():
            h.update(p.relative_to(out).as_posix().encode())
            h.update(p.read_bytes())
    return h.hexdigest(), sum(1 for p in out.rglob("*") if p.is_file())


def test_9_determinism(report, tmp_path, capsys):
    (tmp_path / "a").mkdir()
    (tmp_path / "b").mkdir()
    ha, n = _full_run(tmp_path / "a", capsys)
    hb, _ = _full_run(tmp_path / "b", capsys)
    report(9, ha == hb, f"{n} artifacts per run, sha256 {ha[:12]} vs {hb[:12]}")
