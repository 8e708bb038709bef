import json

import pytest
from hypothesis import given, settings, strategies as st

from fngrammar.corpus_model import (
    AnnotatedSentence,
    Corpus,
    CorpusError,
    FESpan,
    FrameDef,
    PhraseCat,
    SynRole,
    VerbType,
    Voice,
    load_corpus,
    load_frames,
    sentence_from_record,
    sentence_to_record,
    validate_sentence,
    write_corpus,
    write_frames,
)
from fngrammar.extraction import DEFAULT_TABLE

DESIRING = FrameDef("Desiring", frozenset({"Event", "Experiencer", "Focal_participant"}),
                    frozenset({"Degree", "Time"}))
FRAMES = {"Desiring": DESIRING}


def sentence(spans, sid="s1", voice=Voice.Act, pos="v", frame="Desiring"):
    return AnnotatedSentence(sid, "en", frame, "want", pos, voice, "she wants a protector", tuple(spans))


def record(sid="s1", **over):
    rec = {"id": sid, "lang": "en", "frame": "Desiring", "target_lemma": "want", "target_pos": "v",
           "voice": "act", "text": "she wants a protector",
           "spans": [{"fe": "Experiencer", "ptype": "NP", "role": "Subj"},
                     {"fe": "Focal_participant", "ptype": "NP", "role": "DObj"}]}
    rec.update(over)
    return rec


def write_jsonl(path, recs):
    path.write_text("".join(json.dumps(r) + "\n" for r in recs), encoding="utf-8")
    return path


def test_enums_are_closed():
    assert [c.value for c in PhraseCat] == ["NP", "Adv", "S", "VP"]
    assert [r.value for r in SynRole] == ["Subj", "DObj", "IObj", "Agent", "None"]
    assert [v.value for v in Voice] == ["Act", "Pass"]
    assert [v.value for v in VerbType] == ["V", "V2", "V3", "VV", "VS", "V2V", "V2S"]


def test_frame_def_invariants():
    with pytest.raises(ValueError):
        FrameDef("X", frozenset())
    with pytest.raises(ValueError):
        FrameDef("X", frozenset({"A"}), frozenset({"A"}))


def test_valid_desiring_sentence():
    s = sentence([FESpan("Experiencer", "NP", SynRole.Subj), FESpan("Focal_participant", "NP", SynRole.DObj)])
    assert validate_sentence(s, FRAMES) == []


def test_unknown_fe():
    s = sentence([FESpan("Nope", "NP", SynRole.Subj)])
    assert any("unknown FE" in v for v in validate_sentence(s, FRAMES))


def test_unknown_frame():
    s = sentence([], frame="Flying")
    assert any("unknown frame" in v for v in validate_sentence(s, FRAMES))


def test_role_on_non_np():
    s = sentence([FESpan("Focal_participant", "PP", SynRole.DObj)])
    assert any("role on non-NP" in v for v in validate_sentence(s, FRAMES))


def test_duplicate_role_and_fe():
    s = sentence([FESpan("Experiencer", "NP", SynRole.Subj), FESpan("Focal_participant", "NP", SynRole.Subj)])
    assert any("duplicate role" in v for v in validate_sentence(s, FRAMES))
    s = sentence([FESpan("Experiencer", "NP", SynRole.Subj), FESpan("Experiencer", "PP")])
    assert any("duplicate FE" in v for v in validate_sentence(s, FRAMES))


def test_load_two_sentences(tmp_path):
    frames = tmp_path / "frames.jsonl"
    write_frames(FRAMES, frames)
    path = write_jsonl(tmp_path / "c.jsonl", [record("a"), record("b")])
    c = load_corpus(path, frames)
    assert [s.id for s in c.sentences] == ["a", "b"]
    assert c.fn_id == "c" and c.lang == "en"


def test_two_subjects_rejected(tmp_path):
    bad = record(spans=[{"fe": "Experiencer", "ptype": "NP", "role": "Subj"},
                        {"fe": "Focal_participant", "ptype": "NP", "role": "Subj"}])
    path = write_jsonl(tmp_path / "c.jsonl", [record("ok"), bad])
    with pytest.raises(CorpusError) as err:
        load_corpus(path, FRAMES)
    assert err.value.line == 2 and "duplicate role" in str(err.value)


def test_parse_error_has_line(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text(json.dumps(record()) + "\n{oops\n", encoding="utf-8")
    with pytest.raises(CorpusError) as err:
        load_corpus(path, FRAMES)
    assert err.value.line == 2


@pytest.mark.parametrize("field,value", [("extra", 1), ("voice", "middle")])
def test_bad_fields_rejected(tmp_path, field, value):
    path = write_jsonl(tmp_path / "c.jsonl", [record(**{field: value})])
    with pytest.raises(CorpusError):
        load_corpus(path, FRAMES)


def test_missing_field_rejected():
    rec = record()
    del rec["text"]
    with pytest.raises(ValueError):
        sentence_from_record(rec)


def test_mixed_languages_rejected(tmp_path):
    path = write_jsonl(tmp_path / "c.jsonl", [record("a"), record("b", lang="sv")])
    with pytest.raises(CorpusError):
        load_corpus(path, FRAMES)


def test_frames_file(tmp_path, frames):
    write_frames(frames, tmp_path / "f.jsonl")
    assert load_frames(tmp_path / "f.jsonl") == frames
    write_jsonl(tmp_path / "dup.jsonl", [{"name": "A", "core": ["x"]}] * 2)
    with pytest.raises(CorpusError):
        load_frames(tmp_path / "dup.jsonl")


def test_bundled_samples_load(corpus_en, corpus_sv, frames):
    assert len(corpus_en) == 25 and len(corpus_sv) == 30
    assert {s.frame for s in corpus_en.sentences} | {s.frame for s in corpus_sv.sentences} <= set(frames)


# -- properties ----------------------------------------------------------

FE_POOL = sorted(DESIRING.all_fes) + ["Bogus"]
PTYPES = ["NP", "PP", "Sfin", "Sub", "VPto", "QUO", "N"]
ROLES = list(SynRole)

span_st = st.builds(FESpan, st.sampled_from(FE_POOL), st.sampled_from(PTYPES), st.sampled_from(ROLES))
sentence_st = st.builds(
    AnnotatedSentence,
    id=st.text("abc123", min_size=1, max_size=4),
    lang=st.just("en"),
    frame=st.sampled_from(["Desiring", "Unknown"]),
    target_lemma=st.text(min_size=1, max_size=6),
    target_pos=st.sampled_from(["v", "n"]),
    voice=st.sampled_from(list(Voice)),
    text=st.text(max_size=20),
    spans=st.lists(span_st, max_size=4).map(tuple),
)


@given(sentence_st)
def test_validation_is_total(s):
    assert isinstance(validate_sentence(s, FRAMES), list)


@given(sentence_st)
def test_accepted_roles_are_nps(s):
    if not validate_sentence(s, FRAMES):
        for sp in s.spans:
            if sp.role.is_grammatical:
                assert DEFAULT_TABLE.generalize(sp.ptype) is PhraseCat.NP


@settings(max_examples=50)
@given(st.lists(sentence_st, max_size=6, unique_by=lambda s: s.id))
def test_corpus_round_trip(tmp_path_factory, sents):
    valid = tuple(s for s in sents if not validate_sentence(s, FRAMES))
    path = tmp_path_factory.mktemp("rt") / "c.jsonl"
    write_corpus(Corpus("c", "en", FRAMES, valid), path)
    assert load_corpus(path, FRAMES).sentences == valid
    for s in valid:
        assert sentence_from_record(sentence_to_record(s)) == s
