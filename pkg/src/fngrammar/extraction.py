"""Valence-pattern extraction from annotated sentences."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

from .corpus_model import (
    AnnotatedSentence,
    Corpus,
    CorpusError,
    FrameDef,
    PhraseCat,
    SynRole,
    VerbType,
    Voice,
)


class Unmappable:
    """Sentinel for raw phrase types missing from the generalization table."""

    def __repr__(self):
        return "UNMAPPABLE"


UNMAPPABLE = Unmappable()


@dataclass(frozen=True)
class TableEntry:
    cat: PhraseCat
    that_compatible: bool = False


class GeneralizationTable:
    """Maps corpus-specific phrase-type labels onto the four phrase categories."""

    def __init__(self, entries: Mapping[str, TableEntry] | None = None):
        self.entries: dict[str, TableEntry] = dict(entries or {})

    def generalize(self, raw_label: str):
        entry = self.entries.get(raw_label)
        if entry is None:
            return UNMAPPABLE
        # subclauses that cannot take "that" are handled as adverbials
        if entry.cat is PhraseCat.S and not entry.that_compatible:
            return PhraseCat.Adv
        return entry.cat

    def extended(self, entries: Mapping[str, TableEntry]) -> "GeneralizationTable":
        merged = dict(self.entries)
        merged.update(entries)
        return GeneralizationTable(merged)

    def __contains__(self, label):
        return label in self.entries


def _e(cat, that=False):
    return TableEntry(PhraseCat(cat), that)


DEFAULT_TABLE = GeneralizationTable({
    # noun phrases
    "NP": _e("NP"),
    "N": _e("NP"),
    "Poss": _e("NP"),
    # prepositional phrases, incl. prepositions over wh-clauses and gerunds
    "PP": _e("Adv"),
    "PPing": _e("Adv"),
    "PPinterrog": _e("Adv"),
    "AVP": _e("Adv"),
    # subclauses
    "Sfin": _e("S", True),
    "Sfin-that": _e("S", True),
    "Sinterrog": _e("S"),
    "Swhether": _e("S"),
    "Sub": _e("S"),
    # finite and gerundive VPs
    "VPfin": _e("VP"),
    "VPing": _e("VP"),
    "VPto": _e("VP"),
    "VPbrst": _e("VP"),
})


def load_table(path, base: GeneralizationTable | None = DEFAULT_TABLE) -> GeneralizationTable:
    """Read a generalization table file; entries extend ``base``."""
    entries = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                unknown = set(rec) - {"raw_label", "cat", "that_compatible"}
                if unknown:
                    raise ValueError(f"unknown field(s): {', '.join(sorted(unknown))}")
                entries[rec["raw_label"]] = TableEntry(PhraseCat(rec["cat"]), bool(rec.get("that_compatible", False)))
            except (ValueError, KeyError, TypeError) as exc:
                raise CorpusError(f"bad table record: {exc}", lineno, path) from None
    if base is None:
        return GeneralizationTable(entries)
    return base.extended(entries)


def generalize_phrase_type(raw_label: str, table: GeneralizationTable = DEFAULT_TABLE):
    return table.generalize(raw_label)


@dataclass(frozen=True, order=True)
class FERealization:
    fe: str
    cat: PhraseCat
    role: SynRole = SynRole.None_

    def __post_init__(self):
        if self.role.is_grammatical and self.cat is not PhraseCat.NP:
            raise ValueError(f"{self.fe}: role {self.role.value} requires NP, got {self.cat.value}")

    @property
    def sort_key(self):
        return (self.fe, self.cat.value, self.role.value)

    @property
    def category(self) -> str:
        """FE category name as used in the generated grammar, e.g. ``Experiencer_NP``."""
        return f"{self.fe}_{self.cat.value}"

    def __str__(self):
        if self.role.is_grammatical:
            return f"{self.fe}/{self.cat.value}_{self.role.value}"
        return f"{self.fe}/{self.cat.value}"

    @classmethod
    def parse(cls, text: str) -> "FERealization":
        fe, _, typ = text.partition("/")
        cat, _, role = typ.partition("_")
        return cls(fe, PhraseCat(cat), SynRole(role) if role else SynRole.None_)


def canonical_fes(fes: Iterable[FERealization]) -> tuple[FERealization, ...]:
    return tuple(sorted(fes, key=lambda r: r.sort_key))


@dataclass(frozen=True)
class ValencePattern:
    """Frame + verb type + voice + FE realizations.

    Identity is the first four fields; ``freq`` rides along and is ignored by
    ``==`` and ``hash`` so patterns can key a frequency map.
    """

    frame: str
    verb_type: VerbType
    voice: Voice
    fes: tuple[FERealization, ...]
    freq: int = field(default=1, compare=False)

    def __post_init__(self):
        roles = Counter(r.role for r in self.fes if r.role.is_grammatical)
        dup = [role.value for role, n in roles.items() if n > 1]
        if dup:
            raise ValueError(f"pattern has repeated role(s): {dup}")

    def canonical(self) -> "ValencePattern":
        fes = canonical_fes(self.fes)
        if fes == self.fes:
            return self
        return replace(self, fes=fes)

    @property
    def is_canonical(self) -> bool:
        return canonical_fes(self.fes) == self.fes

    @property
    def sort_key(self):
        return (self.frame, self.verb_type.value, self.voice.value, tuple(r.sort_key for r in self.fes))

    def __str__(self):
        head = f"{self.frame}/{self.verb_type.value}_{self.voice.value}"
        return " ".join([head, *(str(r) for r in self.fes)])

    @classmethod
    def parse(cls, text: str, freq: int = 1) -> "ValencePattern":
        """Parse the ``Frame/VT_Voice FE/Cat_Role ...`` notation."""
        head, *rest = text.split()
        frame, _, vv = head.rpartition("/")
        vt, _, voice = vv.partition("_")
        fes = canonical_fes(FERealization.parse(t) for t in rest)
        return cls(frame, VerbType(vt), Voice(voice), fes, freq)


class SkipReason(str, Enum):
    UnmappablePhraseType = "UnmappablePhraseType"
    NonVerbTarget = "NonVerbTarget"
    RoleConflict = "RoleConflict"
    NonCoreOnly = "NonCoreOnly"


@dataclass(frozen=True)
class SkipReport:
    sentence_id: str
    reason: SkipReason

    def to_record(self):
        return {"id": self.sentence_id, "reason": self.reason.value}


def deduce_verb_type(fes: Iterable[FERealization], voice: Voice) -> VerbType:
    fes = list(fes)
    cats = {r.cat for r in fes}
    roles = {r.role for r in fes}
    has_vp = PhraseCat.VP in cats
    has_s = PhraseCat.S in cats
    has_dobj = SynRole.DObj in roles
    has_iobj = SynRole.IObj in roles

    if has_vp and has_iobj:
        return VerbType.V2V
    if has_vp:
        return VerbType.VV
    if has_s and (has_dobj or has_iobj):
        return VerbType.V2S
    if has_s:
        return VerbType.VS
    if has_iobj:
        # with or without an expressed direct object
        return VerbType.V3
    if has_dobj:
        return VerbType.V2
    if voice is Voice.Pass:
        # a promoted object implies a transitive verb
        return VerbType.V2
    return VerbType.V


def is_verb_pos(pos: str) -> bool:
    return pos.lower() in {"v", "verb", "vb"}


def extract_pattern(s: AnnotatedSentence, frames: Mapping[str, FrameDef],
                    table: GeneralizationTable = DEFAULT_TABLE):
    """Return the sentence's ValencePattern (freq 1) or a SkipReport."""
    if not is_verb_pos(s.target_pos):
        return SkipReport(s.id, SkipReason.NonVerbTarget)
    frame = frames[s.frame]
    fes = []
    for span in s.spans:
        if span.fe not in frame.core:
            continue
        cat = table.generalize(span.ptype)
        if cat is UNMAPPABLE:
            return SkipReport(s.id, SkipReason.UnmappablePhraseType)
        if span.role.is_grammatical and cat is not PhraseCat.NP:
            return SkipReport(s.id, SkipReason.RoleConflict)
        if cat is PhraseCat.NP and not span.role.is_grammatical:
            # an NP with no grammatical role has no slot in any template
            return SkipReport(s.id, SkipReason.RoleConflict)
        if span.role is SynRole.Agent and s.voice is not Voice.Pass:
            return SkipReport(s.id, SkipReason.RoleConflict)
        fes.append(FERealization(span.fe, cat, span.role))
    if not fes:
        return SkipReport(s.id, SkipReason.NonCoreOnly)
    return ValencePattern(s.frame, deduce_verb_type(fes, s.voice), s.voice, canonical_fes(fes), 1)


@dataclass
class PatternSet:
    """Canonical patterns with frequencies."""

    fn_id: str
    counts: dict[ValencePattern, int] = field(default_factory=dict)

    @classmethod
    def from_patterns(cls, fn_id: str, patterns: Iterable[ValencePattern]) -> "PatternSet":
        ps = cls(fn_id)
        for p in patterns:
            ps.add(p, p.freq)
        return ps

    def add(self, p: ValencePattern, freq: int = 1) -> None:
        p = replace(p.canonical(), freq=1)
        self.counts[p] = self.counts.get(p, 0) + freq

    def __iter__(self):
        for p in sorted(self.counts, key=lambda q: q.sort_key):
            yield replace(p, freq=self.counts[p])

    def __len__(self):
        return len(self.counts)

    def __contains__(self, p):
        return p in self.counts

    def freq(self, p: ValencePattern) -> int:
        return self.counts[p]

    @property
    def frames(self) -> set[str]:
        return {p.frame for p in self.counts}

    def same_patterns(self, other: "PatternSet") -> bool:
        return self.counts == other.counts


@dataclass
class ExtractionResult:
    patterns: PatternSet
    skips: list[SkipReport]
    total: int

    @property
    def skip_rate(self) -> float:
        return len(self.skips) / self.total if self.total else 0.0


def extract_all(c: Corpus, table: GeneralizationTable = DEFAULT_TABLE) -> ExtractionResult:
    ps = PatternSet(c.fn_id)
    skips = []
    for s in c.sentences:
        res = extract_pattern(s, c.frames, table)
        if isinstance(res, SkipReport):
            skips.append(res)
        else:
            ps.add(res)
    return ExtractionResult(ps, skips, len(c.sentences))


def pattern_to_record(p: ValencePattern) -> dict:
    rec = {
        "frame": p.frame,
        "vtype": p.verb_type.value,
        "voice": p.voice.value,
        "fes": [{"fe": r.fe, "cat": r.cat.value, "role": r.role.value} for r in p.fes],
        "freq": p.freq,
    }
    if p.freq == 0:
        rec["derived"] = True  # added by rule, never observed
    return rec


def pattern_from_record(rec) -> ValencePattern:
    unknown = set(rec) - {"frame", "vtype", "voice", "fes", "freq", "derived"}
    if unknown:
        raise ValueError(f"unknown pattern field(s): {', '.join(sorted(unknown))}")
    fes = canonical_fes(FERealization(f["fe"], PhraseCat(f["cat"]), SynRole(f["role"])) for f in rec["fes"])
    return ValencePattern(rec["frame"], VerbType(rec["vtype"]), Voice(rec["voice"]), fes, int(rec["freq"]))


def write_patterns(ps: PatternSet, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for p in ps:
            fh.write(json.dumps(pattern_to_record(p), ensure_ascii=False) + "\n")


def read_patterns(path, fn_id: str | None = None) -> PatternSet:
    path = Path(path)
    ps = PatternSet(fn_id or path.stem)
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                p = pattern_from_record(json.loads(line))
            except (ValueError, KeyError, TypeError) as exc:
                raise CorpusError(f"bad pattern record: {exc}", lineno, path) from None
            ps.add(p, p.freq)
    return ps


def write_skips(skips: Iterable[SkipReport], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for sk in skips:
            fh.write(json.dumps(sk.to_record()) + "\n")
