"""Subsumption, shared-set computation and pattern statistics."""

from __future__ import annotations

import warnings
from collections import Counter, defaultdict
from dataclasses import dataclass, replace
from typing import Iterable

from .corpus_model import Corpus, PhraseCat, SynRole, VerbType, Voice
from .extraction import (
    DEFAULT_TABLE,
    FERealization,
    GeneralizationTable,
    PatternSet,
    SkipReport,
    ValencePattern,
    canonical_fes,
    extract_pattern,
)

__all__ = [
    "PatternSet",
    "SyntacticSkeleton",
    "subsumes",
    "filter_once_used",
    "shared_set",
    "derive_passive",
    "coverage",
    "stats",
    "format_stats",
]


def _bucket_key(p: ValencePattern):
    return (p.frame, p.verb_type, p.voice)


def subsumes(a: ValencePattern, b: ValencePattern) -> bool:
    """True iff ``a`` subsumes ``b``: same frame, verb type and voice, and
    ``b``'s FE realizations form a sub-multiset of ``a``'s."""
    if _bucket_key(a) != _bucket_key(b):
        return False
    if len(b.fes) > len(a.fes):
        return False
    have = Counter(a.fes)
    need = Counter(b.fes)
    return all(have[r] >= n for r, n in need.items())


def strictly_subsumes(a: ValencePattern, b: ValencePattern) -> bool:
    return a != b and subsumes(a, b)


def filter_once_used(s: PatternSet, min_freq: int = 2) -> PatternSet:
    return PatternSet(s.fn_id, {p: n for p, n in s.counts.items() if n >= min_freq})


def _buckets(ps: PatternSet) -> dict:
    out = defaultdict(list)
    for p in ps.counts:
        out[_bucket_key(p)].append(p)
    return out


def shared_set(s1: PatternSet, s2: PatternSet) -> PatternSet:
    """Patterns of either set subsumed by some pattern of the other set,
    reduced to the maximal elements under strict subsumption."""
    b1, b2 = _buckets(s1), _buckets(s2)
    candidates: Counter = Counter()
    for mine, theirs, src in ((b1, b2, s1), (b2, b1, s2)):
        for key, pats in mine.items():
            others = theirs.get(key, ())
            for p in pats:
                if any(subsumes(q, p) for q in others):
                    candidates[p] += src.counts[p]

    by_key = defaultdict(list)
    for p in candidates:
        by_key[_bucket_key(p)].append(p)
    result = {}
    for pats in by_key.values():
        for p in pats:
            if not any(strictly_subsumes(q, p) for q in pats):
                result[p] = candidates[p]
    fn_id = "+".join(sorted((s1.fn_id, s2.fn_id)))
    return PatternSet(fn_id, result)


def passive_counterpart(p: ValencePattern) -> ValencePattern | None:
    """The passive of a V2 active pattern with both subject and object, else None."""
    if p.verb_type is not VerbType.V2 or p.voice is not Voice.Act:
        return None
    roles = {r.role for r in p.fes}
    if SynRole.Subj not in roles or SynRole.DObj not in roles:
        return None
    fes = []
    for r in p.fes:
        if r.role is SynRole.DObj:
            r = replace(r, role=SynRole.Subj)
        elif r.role is SynRole.Subj:
            r = replace(r, role=SynRole.Agent)
        fes.append(r)
    return ValencePattern(p.frame, p.verb_type, Voice.Pass, canonical_fes(fes), 0)


def derive_passive(s: PatternSet) -> PatternSet:
    """Add freq-0 passive patterns for frames with active V2 patterns but no
    passive V2 pattern."""
    have_pass = {(p.frame, p.verb_type) for p in s.counts if p.voice is Voice.Pass}
    out = dict(s.counts)
    for p in s.counts:
        if (p.frame, p.verb_type) in have_pass:
            continue
        q = passive_counterpart(p)
        if q is not None and q not in out:
            out[q] = 0
    return PatternSet(s.fn_id, out)


def is_derived(ps: PatternSet, p: ValencePattern) -> bool:
    return ps.counts.get(p) == 0


def coverage(shared: PatternSet, c: Corpus, table: GeneralizationTable = DEFAULT_TABLE) -> float:
    """Fraction of (non-skipped) sentences in shared frames whose pattern is
    subsumed by some shared pattern."""
    buckets = _buckets(shared)
    frames = shared.frames
    num = den = 0
    for s in c.sentences:
        if s.frame not in frames:
            continue
        p = extract_pattern(s, c.frames, table)
        if isinstance(p, SkipReport):
            continue
        den += 1
        if any(subsumes(q, p) for q in buckets.get(_bucket_key(p), ())):
            num += 1
    if den == 0:
        warnings.warn("coverage: no corpus sentence belongs to a shared frame; reporting 0.0", stacklevel=2)
        return 0.0
    return num / den


@dataclass(frozen=True)
class SyntacticSkeleton:
    verb_type: VerbType
    voice: Voice
    slots: tuple[tuple[PhraseCat, SynRole], ...]

    @classmethod
    def of(cls, p: ValencePattern) -> "SyntacticSkeleton":
        slots = []
        for r in p.fes:
            if r.role is SynRole.Agent:
                slots.append((PhraseCat.Adv, SynRole.None_))
            else:
                slots.append((r.cat, r.role))
        slots.sort(key=lambda s: (s[0].value, s[1].value))
        return cls(p.verb_type, p.voice, tuple(slots))

    @property
    def slot_text(self) -> str:
        return " ".join(c.value if not r.is_grammatical else f"{c.value}_{r.value}" for c, r in self.slots)

    def __str__(self):
        return f"{self.verb_type.value} {self.voice.value} {self.slot_text}".rstrip()

    @classmethod
    def parse(cls, text: str) -> "SyntacticSkeleton":
        vt, voice, *slots = text.split()
        parsed = []
        for s in slots:
            cat, _, role = s.partition("_")
            parsed.append((PhraseCat(cat), SynRole(role) if role else SynRole.None_))
        parsed.sort(key=lambda s: (s[0].value, s[1].value))
        return cls(VerbType(vt), Voice(voice), tuple(parsed))


def stats(s: PatternSet | Iterable[ValencePattern]) -> list[tuple[SyntacticSkeleton, int]]:
    """Distinct patterns per syntactic skeleton, most frequent first."""
    pats = s.counts if isinstance(s, PatternSet) else set(s)
    counts = Counter(SyntacticSkeleton.of(p) for p in pats)
    return sorted(counts.items(), key=lambda kv: (-kv[1], str(kv[0])))


def format_stats(rows: list[tuple[SyntacticSkeleton, int]]) -> str:
    if not rows:
        return ""
    header = ("Verb", "Voice", "FE types and roles", "Count")
    body = [(sk.verb_type.value, sk.voice.value, sk.slot_text, str(n)) for sk, n in rows]
    widths = [max(len(r[i]) for r in [header, *body]) for i in range(4)]
    lines = []
    for r in [header, *body]:
        lines.append("  ".join([r[0].ljust(widths[0]), r[1].ljust(widths[1]), r[2].ljust(widths[2]), r[3].rjust(widths[3])]))
    return "\n".join(lines) + "\n"


def stats_records(rows) -> list[dict]:
    return [
        {"vtype": sk.verb_type.value, "voice": sk.voice.value, "slots": sk.slot_text, "count": n}
        for sk, n in rows
    ]
