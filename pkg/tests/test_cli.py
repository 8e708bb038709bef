import hashlib

import pytest

from fngrammar.applications import data_path
from fngrammar.cli import main
from fngrammar.extraction import extract_all, read_patterns
from fngrammar.pattern_algebra import shared_set
from conftest import golden

FRAMES = str(data_path("frames.jsonl"))


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def pipeline(tmp, capsys):
    for lang in ("en", "sv"):
        code, _, _ = run(capsys, "extract", "--corpus", data_path(f"sample_{lang}.jsonl"), "--frames", FRAMES,
                         "--out", tmp / f"{lang}.jsonl")
        assert code == 0
    code, out, _ = run(capsys, "share", tmp / "en.jsonl", tmp / "sv.jsonl", "--out", tmp / "shared.jsonl")
    assert code == 0 and out.strip() == "19 patterns covering 11 frames"
    code, _, _ = run(capsys, "generate", tmp / "shared.jsonl", "--lexicon", data_path("lexicon_en.jsonl"),
                     "--lexicon", data_path("lexicon_sv.jsonl"), "--out", tmp / "grammar")
    assert code == 0
    texts = {}
    for lang in ("en", "sv"):
        code, out, _ = run(capsys, "realize", tmp / "grammar", data_path(f"demo/painting_{lang}.jsonl"),
                           "--lang", lang)
        assert code == 0
        texts[lang] = out
    return texts


def digest(root):
    return {p.relative_to(root).as_posix(): hashlib.sha256(p.read_bytes()).hexdigest()
            for p in sorted(root.rglob("*")) if p.is_file()}


def test_full_pipeline(tmp_path, capsys):
    texts = pipeline(tmp_path, capsys)
    assert texts["en"].rstrip("\n") == golden("painting_en.txt")
    assert texts["sv"].rstrip("\n") == golden("painting_sv.txt")
    assert (tmp_path / "en.skips.jsonl").read_text() == '{"id": "en25", "reason": "UnmappablePhraseType"}\n'
    names = sorted(p.name for p in (tmp_path / "grammar").iterdir())
    assert names == ["FrameNetAbstract.txt", "FrameNetEng.txt", "FrameNetSwe.txt", "LexiconEng.txt",
                     "LexiconSwe.txt", "bundle.jsonl"]


def test_pipeline_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir(), b.mkdir()
    assert pipeline(a, capsys) == pipeline(b, capsys)
    assert digest(a) == digest(b)


def test_share_composes_with_extract(tmp_path, capsys, corpus_en, corpus_sv):
    pipeline(tmp_path, capsys)
    direct = shared_set(extract_all(corpus_en).patterns, extract_all(corpus_sv).patterns)
    assert read_patterns(tmp_path / "shared.jsonl").counts == direct.counts


def test_min_freq(tmp_path, capsys):
    out = tmp_path / "p.jsonl"
    assert run(capsys, "extract", "--corpus", data_path("sample_sv.jsonl"), "--frames", FRAMES,
               "--min-freq", "2", "--out", out)[0] == 0
    assert all(n >= 2 for n in read_patterns(out).counts.values())


def test_derive_passive_flag(tmp_path, capsys):
    pipeline(tmp_path, capsys)
    code, out, _ = run(capsys, "share", tmp_path / "en.jsonl", tmp_path / "sv.jsonl", "--derive-passive",
                       "--out", tmp_path / "d.jsonl")
    assert code == 0 and out.strip() == "20 patterns covering 11 frames"
    lines = (tmp_path / "d.jsonl").read_text().splitlines()
    derived = [line for line in lines if '"derived": true' in line]
    assert len(derived) == 1 and '"voice": "Pass"' in derived[0]


def test_share_needs_two(tmp_path, capsys):
    pipeline(tmp_path, capsys)
    code, _, err = run(capsys, "share", tmp_path / "en.jsonl", "--out", tmp_path / "x.jsonl")
    assert code == 1 and "two" in err


def test_disjoint_share(tmp_path, capsys):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    a.write_text('{"frame": "A", "vtype": "V", "voice": "Act", "fes": [], "freq": 1}\n')
    b.write_text('{"frame": "B", "vtype": "V", "voice": "Act", "fes": [], "freq": 1}\n')
    assert run(capsys, "share", a, b, "--out", tmp_path / "s.jsonl")[1].strip() == "0 patterns covering 0 frames"


def test_corrupt_corpus(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text(data_path("sample_en.jsonl").read_text().splitlines()[0] + "\n{not json\n")
    code, _, err = run(capsys, "extract", "--corpus", bad, "--frames", FRAMES, "--out", tmp_path / "o.jsonl")
    assert code == 1 and ":2:" in err


def test_empty_generate(tmp_path, capsys):
    empty = tmp_path / "e.jsonl"
    empty.write_text("")
    code, _, _ = run(capsys, "generate", empty, "--lexicon", data_path("lexicon_en.jsonl"), "--lang", "en",
                     "--out", tmp_path / "g")
    assert code == 0
    assert (tmp_path / "g" / "FrameNetAbstract.txt").read_text().startswith("abstract FrameNet = {")
    assert (tmp_path / "g" / "FrameNetEng.txt").read_text() == "concrete FrameNetEng of FrameNet = {\n}\n"


def test_generate_desiring_signatures(tmp_path, capsys):
    pipeline(tmp_path, capsys)
    abstract = (tmp_path / "grammar" / "FrameNetAbstract.txt").read_text()
    for line in golden("desiring_abstract.txt").splitlines():
        assert line in abstract


def test_template_failure_is_internal(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"frame": "A", "vtype": "V", "voice": "Act", '
                   '"fes": [{"fe": "X", "cat": "NP", "role": "DObj"}], "freq": 1}\n')
    code, _, err = run(capsys, "generate", bad, "--lexicon", data_path("lexicon_en.jsonl"), "--out", tmp_path / "g")
    assert code == 2 and "internal" in err


def test_stats_and_coverage(tmp_path, capsys):
    pipeline(tmp_path, capsys)
    code, out, _ = run(capsys, "stats", tmp_path / "shared.jsonl")
    assert code == 0 and out.splitlines()[0].startswith("Verb")
    code, out, _ = run(capsys, "stats", tmp_path / "shared.jsonl", "--json")
    assert code == 0 and len(out.splitlines()) == 10
    code, out, _ = run(capsys, "coverage", tmp_path / "shared.jsonl", "--corpus",
                       data_path("coverage_probe_en.jsonl"), "--frames", FRAMES)
    assert code == 0 and out.strip() == "coverage 0.9600"


def test_empty_stats_and_coverage(tmp_path, capsys):
    empty = tmp_path / "e.jsonl"
    empty.write_text("")
    assert run(capsys, "stats", empty)[:2] == (0, "")
    code, out, err = run(capsys, "coverage", empty, "--corpus", data_path("sample_en.jsonl"), "--frames", FRAMES)
    assert code == 0 and out.strip() == "coverage 0.0000" and "warning" in err


def test_realize_phrasebook_and_malformed(tmp_path, capsys):
    pipeline(tmp_path, capsys)
    code, out, _ = run(capsys, "realize", tmp_path / "grammar", data_path("demo/phrasebook_sv.jsonl"),
                       "--lang", "sv", "--lowercase", "--lines")
    assert code == 0 and out == golden("phrasebook_sv.txt")
    bad = tmp_path / "t.jsonl"
    bad.write_text('{"function": "Nope", "verb": "x"}\n')
    assert run(capsys, "realize", tmp_path / "grammar", bad, "--lang", "en")[0] == 1
    bad.write_text('{"function": "Residence_V"\n')
    assert run(capsys, "realize", tmp_path / "grammar", bad, "--lang", "en")[0] == 1


def test_demo(tmp_path, capsys):
    code, out, _ = run(capsys, "demo", "--out", tmp_path)
    assert code == 0
    assert golden("painting_sv.txt") in out and "I want to go to a museum" in out
    assert (tmp_path / "bundle.jsonl").exists()


def test_unsupported_language(capsys):
    with pytest.raises(SystemExit):
        main(["realize", "b", "t", "--lang", "de"])
