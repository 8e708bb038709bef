"""Corpus interchange format, frame inventory, and sentence validation.

Corpora are line-delimited JSON files, one annotated sentence per line.  The
frame inventory lives in a separate file so several corpora can share it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping


class PhraseCat(str, Enum):
    # PPs are folded into Adv
    NP = "NP"
    Adv = "Adv"
    S = "S"
    VP = "VP"


class SynRole(str, Enum):
    Subj = "Subj"
    DObj = "DObj"
    IObj = "IObj"
    Agent = "Agent"
    None_ = "None"

    @property
    def is_grammatical(self) -> bool:
        return self is not SynRole.None_


class Voice(str, Enum):
    Act = "Act"
    Pass = "Pass"


class VerbType(str, Enum):
    V = "V"
    V2 = "V2"
    V3 = "V3"
    VV = "VV"
    VS = "VS"
    V2V = "V2V"
    V2S = "V2S"


class CorpusError(ValueError):
    """Raised when a corpus or inventory file cannot be loaded."""

    def __init__(self, message: str, line: int | None = None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


@dataclass(frozen=True)
class FrameDef:
    name: str
    core: frozenset[str]
    noncore: frozenset[str] = frozenset()

    def __post_init__(self):
        if not self.core:
            raise ValueError(f"frame {self.name}: core FE set is empty")
        overlap = self.core & self.noncore
        if overlap:
            raise ValueError(f"frame {self.name}: FEs both core and non-core: {sorted(overlap)}")

    @property
    def all_fes(self) -> frozenset[str]:
        return self.core | self.noncore


@dataclass(frozen=True)
class FESpan:
    fe: str
    ptype: str
    role: SynRole = SynRole.None_


@dataclass(frozen=True)
class AnnotatedSentence:
    id: str
    lang: str
    frame: str
    target_lemma: str
    target_pos: str
    voice: Voice
    text: str
    spans: tuple[FESpan, ...] = ()


@dataclass(frozen=True)
class Corpus:
    fn_id: str
    lang: str
    frames: Mapping[str, FrameDef]
    sentences: tuple[AnnotatedSentence, ...] = field(default_factory=tuple)

    def __len__(self):
        return len(self.sentences)


_SENTENCE_FIELDS = {"id", "lang", "frame", "target_lemma", "target_pos", "voice", "text", "spans"}
_SPAN_FIELDS = {"fe", "ptype", "role"}
_FRAME_FIELDS = {"name", "core", "noncore"}
_VOICES = {"act": Voice.Act, "pass": Voice.Pass}


def _check_fields(rec, allowed: set[str], required: set[str], what: str) -> None:
    if not isinstance(rec, dict):
        raise ValueError(f"{what} must be an object")
    unknown = set(rec) - allowed
    if unknown:
        raise ValueError(f"unknown {what} field(s): {', '.join(sorted(unknown))}")
    missing = required - set(rec)
    if missing:
        raise ValueError(f"missing {what} field(s): {', '.join(sorted(missing))}")


def _iter_records(path: Path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"parse error: {exc.msg} (column {exc.colno})", lineno, path) from None


def frame_from_record(rec) -> FrameDef:
    _check_fields(rec, _FRAME_FIELDS, {"name", "core"}, "frame")
    return FrameDef(rec["name"], frozenset(rec["core"]), frozenset(rec.get("noncore", ())))


def frame_to_record(frame: FrameDef) -> dict:
    return {"name": frame.name, "core": sorted(frame.core), "noncore": sorted(frame.noncore)}


def load_frames(path) -> dict[str, FrameDef]:
    path = Path(path)
    frames: dict[str, FrameDef] = {}
    for lineno, rec in _iter_records(path):
        try:
            frame = frame_from_record(rec)
        except (ValueError, TypeError) as exc:
            raise CorpusError(str(exc), lineno, path) from None
        if frame.name in frames:
            raise CorpusError(f"duplicate frame {frame.name}", lineno, path)
        frames[frame.name] = frame
    return frames


def sentence_from_record(rec) -> AnnotatedSentence:
    _check_fields(rec, _SENTENCE_FIELDS, _SENTENCE_FIELDS, "sentence")
    voice = _VOICES.get(rec["voice"])
    if voice is None:
        raise ValueError(f"voice must be 'act' or 'pass', got {rec['voice']!r}")
    spans = []
    for span in rec["spans"]:
        _check_fields(span, _SPAN_FIELDS, _SPAN_FIELDS, "span")
        role = span["role"]
        spans.append(FESpan(span["fe"], span["ptype"], SynRole("None" if role is None else role)))
    return AnnotatedSentence(
        id=str(rec["id"]),
        lang=rec["lang"],
        frame=rec["frame"],
        target_lemma=rec["target_lemma"],
        target_pos=rec["target_pos"],
        voice=voice,
        text=rec["text"],
        spans=tuple(spans),
    )


def sentence_to_record(s: AnnotatedSentence) -> dict:
    return {
        "id": s.id,
        "lang": s.lang,
        "frame": s.frame,
        "target_lemma": s.target_lemma,
        "target_pos": s.target_pos,
        "voice": s.voice.value.lower(),
        "text": s.text,
        "spans": [
            {"fe": sp.fe, "ptype": sp.ptype, "role": None if sp.role is SynRole.None_ else sp.role.value}
            for sp in s.spans
        ],
    }


def validate_sentence(s: AnnotatedSentence, frames: Mapping[str, FrameDef], table=None) -> list[str]:
    """Return the invariant violations of ``s``; an empty list means valid.

    ``table`` is the phrase-type generalization table used for the
    role-on-non-NP check (defaults to the shipped table).
    """
    if table is None:
        from .extraction import DEFAULT_TABLE as table
    violations = []
    frame = frames.get(s.frame)
    if frame is None:
        violations.append(f"unknown frame {s.frame!r}")
    seen_roles: set[SynRole] = set()
    seen_fes: set[str] = set()
    for span in s.spans:
        if frame is not None and span.fe not in frame.all_fes:
            violations.append(f"unknown FE {span.fe!r} for frame {s.frame}")
        if span.fe in seen_fes:
            violations.append(f"duplicate FE {span.fe!r}")
        seen_fes.add(span.fe)
        if span.role.is_grammatical:
            if span.role in seen_roles:
                violations.append(f"duplicate role {span.role.value}")
            seen_roles.add(span.role)
            if table.generalize(span.ptype) is not PhraseCat.NP:
                violations.append(f"role on non-NP: {span.fe} has role {span.role.value} but ptype {span.ptype!r}")
    return violations


def load_corpus(path, frames, table=None, fn_id: str | None = None) -> Corpus:
    """Load and validate a corpus file.

    ``frames`` is either a frame inventory mapping or a path to an inventory
    file.  The corpus id defaults to the file stem.
    """
    path = Path(path)
    if not isinstance(frames, Mapping):
        frames = load_frames(frames)
    sentences = []
    ids: set[str] = set()
    langs: set[str] = set()
    for lineno, rec in _iter_records(path):
        try:
            s = sentence_from_record(rec)
        except (ValueError, TypeError, KeyError) as exc:
            raise CorpusError(str(exc), lineno, path) from None
        problems = validate_sentence(s, frames, table)
        if problems:
            raise CorpusError(f"sentence {s.id}: " + "; ".join(problems), lineno, path)
        if s.id in ids:
            raise CorpusError(f"duplicate sentence id {s.id}", lineno, path)
        ids.add(s.id)
        langs.add(s.lang)
        sentences.append(s)
    if len(langs) > 1:
        raise CorpusError(f"mixed languages in one corpus: {sorted(langs)}", path=path)
    return Corpus(
        fn_id=fn_id or path.stem,
        lang=langs.pop() if langs else "",
        frames=dict(frames),
        sentences=tuple(sentences),
    )


def write_corpus(corpus: Corpus, path) -> None:
    _write_records(path, (sentence_to_record(s) for s in corpus.sentences))


def write_frames(frames: Mapping[str, FrameDef], path) -> None:
    _write_records(path, (frame_to_record(frames[k]) for k in sorted(frames)))


def _write_records(path, records: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")
