"""Surface realization of generated frame functions for English and Swedish.

Two routes build clause records: :func:`apply_frame_function` works from a
function declaration, :func:`interpret_lin` evaluates the emitted concrete
syntax.  They must agree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any, Mapping, Sequence, Union

from .codegen import FrameFunctionDecl, GrammarBundle, LexiconEntry, order_adverbials
from .corpus_model import PhraseCat, SynRole, VerbType, Voice
from .grammar_syntax import App, Expr, LinDef, Name, Str


class RealizationError(ValueError):
    pass


# -- phrases --------------------------------------------------------------

@dataclass(frozen=True)
class NPhrase:
    surface: str
    number: str = "sg"
    person: int = 3
    object_form: str | None = None

    def __post_init__(self):
        if self.number not in ("sg", "pl") or self.person not in (1, 2, 3):
            raise ValueError(f"bad NP features {self.number}/{self.person}")

    @property
    def is_empty(self) -> bool:
        return not self.surface

    @property
    def obj(self) -> str:
        return self.object_form or self.surface


@dataclass(frozen=True)
class AdvPhrase:
    surface: str = ""


@dataclass(frozen=True)
class SPhrase:
    surface: str = ""


@dataclass(frozen=True)
class VPhrase:
    verb: LexiconEntry | None
    voice: Voice = Voice.Act
    complements: tuple[tuple[PhraseCat, Any], ...] = ()
    adverbials: tuple[AdvPhrase, ...] = ()

    @property
    def is_empty(self) -> bool:
        return self.verb is None and not any(a.surface for a in self.adverbials)


EMPTY_NP = NPhrase("")
EMPTY_ADV = AdvPhrase("")
EMPTY_S = SPhrase("")
EMPTY_VP = VPhrase(None)

Phrase = Union[NPhrase, AdvPhrase, SPhrase, VPhrase]
PHRASE_TYPES = {PhraseCat.NP: NPhrase, PhraseCat.Adv: AdvPhrase, PhraseCat.S: SPhrase, PhraseCat.VP: VPhrase}
EMPTY = {PhraseCat.NP: EMPTY_NP, PhraseCat.Adv: EMPTY_ADV, PhraseCat.S: EMPTY_S, PhraseCat.VP: EMPTY_VP}


@dataclass(frozen=True)
class ClauseRec:
    np: NPhrase
    vp: VPhrase


class Tense(str, Enum):
    Pres = "Pres"
    Past = "Past"


@dataclass(frozen=True)
class SentenceSpec:
    tense: Tense = Tense.Pres
    polarity: str = "Pos"

    def __post_init__(self):
        if self.polarity != "Pos":
            raise ValueError("only positive polarity is supported")


class Sentence(str):
    """A realized sentence; ``empty_subject`` flags subjectless clauses."""

    empty_subject: bool = False


PRONOUNS = {
    "en": {
        "i": ("sg", 1, "me"), "you": ("sg", 2, "you"), "he": ("sg", 3, "him"), "she": ("sg", 3, "her"),
        "it": ("sg", 3, "it"), "we": ("pl", 1, "us"), "they": ("pl", 3, "them"),
    },
    "sv": {
        "jag": ("sg", 1, "mig"), "du": ("sg", 2, "dig"), "han": ("sg", 3, "honom"), "hon": ("sg", 3, "henne"),
        "den": ("sg", 3, "den"), "det": ("sg", 3, "det"), "vi": ("pl", 1, "oss"), "ni": ("pl", 2, "er"),
        "de": ("pl", 3, "dem"),
    },
}

BY_AGENT = {"en": "by", "sv": "av"}
SUBJUNCTION = {"en": "that", "sv": "att"}


def np(text: str, lang: str | None = None, number: str | None = None, person: int | None = None,
       obj: str | None = None) -> NPhrase:
    """Build an NP; personal pronouns get their features from the pronoun table."""
    feats = None
    for lg in ([lang] if lang else sorted(PRONOUNS)):
        feats = PRONOUNS.get(lg, {}).get(text.lower())
        if feats:
            break
    if feats:
        n, p, o = feats
        return NPhrase(text, number or n, person or p, obj or o)
    return NPhrase(text, number or "sg", person or 3, obj)


def from_optional(slot: Phrase | None, kind: PhraseCat) -> Phrase:
    if slot is None:
        return EMPTY[kind]
    if not isinstance(slot, PHRASE_TYPES[kind]):
        raise RealizationError(f"expected {kind.value} phrase, got {type(slot).__name__}")
    return slot


def by_agent(agent: NPhrase, lang: str) -> AdvPhrase:
    if agent.is_empty:
        return EMPTY_ADV
    return AdvPhrase(f"{BY_AGENT[lang]} {agent.obj}")


def attach_adverbial(c: ClauseRec, adv: AdvPhrase) -> ClauseRec:
    return ClauseRec(c.np, replace(c.vp, adverbials=c.vp.adverbials + (adv,)))


def nest_clause_as_vp(c: ClauseRec) -> VPhrase:
    return c.vp


# complements taken by each verb type, before passivization removes one object
_COMPLEMENTS = {
    VerbType.V: (),
    VerbType.V2: (PhraseCat.NP,),
    VerbType.V3: (PhraseCat.NP, PhraseCat.NP),
    VerbType.VV: (PhraseCat.VP,),
    VerbType.VS: (PhraseCat.S,),
    VerbType.V2V: (PhraseCat.NP, PhraseCat.VP),
    VerbType.V2S: (PhraseCat.NP, PhraseCat.S),
}


def complement_kinds(vt: VerbType, voice: Voice) -> tuple[PhraseCat, ...]:
    kinds = _COMPLEMENTS[vt]
    if voice is Voice.Pass and PhraseCat.NP in kinds:
        i = kinds.index(PhraseCat.NP)
        kinds = kinds[:i] + kinds[i + 1:]
    return kinds


def _kind_of(x) -> PhraseCat:
    for kind, cls in PHRASE_TYPES.items():
        if isinstance(x, cls):
            return kind
    raise RealizationError(f"not a phrase: {x!r}")


def make_vp(verb: LexiconEntry, voice: Voice, comps: Sequence[Phrase]) -> VPhrase:
    got = tuple(_kind_of(c) for c in comps)
    want = complement_kinds(verb.verb_type, voice)
    if got != want:
        raise RealizationError(
            f"{verb.name} ({voice.value}) takes complements {[k.value for k in want]}, got {[k.value for k in got]}")
    return VPhrase(verb, voice, tuple(zip(got, comps)))


# -- direct route ---------------------------------------------------------

def _resolve_args(decl: FrameFunctionDecl, args: Mapping[str, Phrase | None]) -> dict:
    by_cat = {a.category: a for a in decl.args}
    unknown = set(args) - set(by_cat)
    if unknown:
        raise RealizationError(f"{decl.name}: unknown argument(s) {sorted(unknown)}")
    out = {}
    for a in decl.args:
        try:
            out[a] = from_optional(args.get(a.category), a.cat)
        except RealizationError as exc:
            raise RealizationError(f"{decl.name}: argument {a.category}: {exc}") from None
    return out


def apply_frame_function(decl: FrameFunctionDecl, args: Mapping[str, Phrase | None],
                         verb: LexiconEntry) -> ClauseRec:
    """Build the clause record of ``decl`` applied to ``args`` (keyed by FE
    category name, e.g. ``Experiencer_NP``) and ``verb``."""
    if verb.verb_type is not decl.verb_type:
        raise RealizationError(f"{decl.name} needs a {decl.verb_type.value} verb, got {verb.name}")
    vals = _resolve_args(decl, args)
    by_role = {a.role: a for a in decl.args if a.role.is_grammatical}

    subj = vals[by_role[SynRole.Subj]] if SynRole.Subj in by_role else EMPTY_NP

    n_objects = _COMPLEMENTS[decl.verb_type].count(PhraseCat.NP)
    if decl.voice is Voice.Pass:
        n_objects = max(n_objects - 1, 0)
    objects = [a for a in decl.args if a.role in (SynRole.IObj, SynRole.DObj)]
    objects.sort(key=lambda a: a.role is SynRole.DObj)
    if len(objects) > n_objects:
        raise RealizationError(f"{decl.name}: too many objects for {decl.verb_type.value}")
    if n_objects == 2:
        slots = [vals[by_role[r]] if r in by_role else EMPTY_NP for r in (SynRole.IObj, SynRole.DObj)]
    elif n_objects == 1:
        if (objects and decl.verb_type is VerbType.V2 and decl.voice is Voice.Act
                and objects[0].role is not SynRole.DObj):
            raise RealizationError(f"{decl.name}: transitive object must be DObj")
        slots = [vals[objects[0]] if objects else EMPTY_NP]
    else:
        slots = []
    clausal_kind = next((k for k in _COMPLEMENTS[decl.verb_type] if k in (PhraseCat.VP, PhraseCat.S)), None)
    clausal = [a for a in decl.args if a.cat in (PhraseCat.VP, PhraseCat.S)]
    if len(clausal) > 1 or any(a.cat is not clausal_kind for a in clausal):
        raise RealizationError(f"{decl.name}: clausal FEs do not fit {decl.verb_type.value}")
    if clausal_kind is not None:
        slots.append(vals[clausal[0]] if clausal else EMPTY[clausal_kind])
    vp = make_vp(verb, decl.voice, slots)

    advs = []
    if SynRole.Agent in by_role:
        if decl.voice is not Voice.Pass:
            raise RealizationError(f"{decl.name}: agent in active voice")
        advs.append(by_agent(vals[by_role[SynRole.Agent]], verb.lang))
    adv_args = [a for a in decl.args if a.cat is PhraseCat.Adv]
    advs.extend(vals[a] for a in order_adverbials(adv_args, verb.lang))
    return ClauseRec(subj, replace(vp, adverbials=tuple(advs)))


# -- concrete-syntax route -----------------------------------------------

@dataclass(frozen=True)
class _VVVerb:
    verb: LexiconEntry


_KINDS = {k.value: k for k in PhraseCat}
_CONSTANTS = {"emptyNP": EMPTY_NP, "emptyAdv": EMPTY_ADV, "emptyS": EMPTY_S, "emptyVP": EMPTY_VP}


def _verb_of(x) -> LexiconEntry:
    if isinstance(x, _VVVerb):
        return x.verb
    if isinstance(x, LexiconEntry):
        return x
    raise RealizationError(f"expected a verb, got {x!r}")


def evaluate(e: Expr, env: Mapping[str, Any], lang: str):
    """Evaluate a linearization expression."""
    if isinstance(e, Str):
        return e.value
    if isinstance(e, Name):
        if e.id in env:
            return env[e.id]
        if e.id in _CONSTANTS:
            return _CONSTANTS[e.id]
        if e.id in _KINDS:
            return _KINDS[e.id]
        if e.id == "by8agent_Prep":
            return BY_AGENT[lang]
        raise RealizationError(f"unbound name {e.id}")
    args = [evaluate(a, env, lang) for a in e.args]
    if e.fn == "fromMaybe":
        kind, val = args
        return from_optional(val, kind)
    if e.fn == "mkVV":
        (verb,) = args
        if not isinstance(verb, LexiconEntry) or verb.verb_type is not VerbType.VV:
            raise RealizationError("mkVV needs a VV verb")
        return _VVVerb(verb)
    if e.fn == "passiveVP":
        return make_vp(_verb_of(args[0]), Voice.Pass, args[1:])
    if e.fn == "mkAdv":
        prep, arg = args
        if prep != BY_AGENT[lang] or not isinstance(arg, NPhrase):
            raise RealizationError("mkAdv supports only by8agent_Prep with an NP")
        return by_agent(arg, lang)
    if e.fn == "mkVP":
        head, rest = args[0], args[1:]
        if isinstance(head, VPhrase):
            if len(rest) != 1 or not isinstance(rest[0], AdvPhrase):
                raise RealizationError("mkVP on a VP takes one adverbial")
            return replace(head, adverbials=head.adverbials + (rest[0],))
        verb = _verb_of(head)
        if verb.verb_type is VerbType.VV and not isinstance(head, _VVVerb):
            raise RealizationError("VV verbs enter mkVP through mkVV")
        return make_vp(verb, Voice.Act, rest)
    raise RealizationError(f"unknown function {e.fn}")


def interpret_lin(lin: LinDef, arg_types: Sequence[str], args: Mapping[str, Phrase | None],
                  verb: LexiconEntry) -> ClauseRec:
    """Evaluate a parsed linearization; ``arg_types`` are the FE categories
    of the abstract signature (without the verb type)."""
    if len(lin.params) != len(arg_types) + 1:
        raise RealizationError(f"{lin.name}: {len(lin.params)} parameters for {len(arg_types)} FE arguments")
    unknown = set(args) - set(arg_types)
    if unknown:
        raise RealizationError(f"{lin.name}: unknown argument(s) {sorted(unknown)}")
    env: dict[str, Any] = {p: args.get(t) for p, t in zip(lin.params, arg_types)}
    env[lin.params[-1]] = verb
    lang = verb.lang
    subj = evaluate(lin.field("np"), env, lang)
    vp = evaluate(lin.field("vp"), env, lang)
    if not isinstance(subj, NPhrase) or not isinstance(vp, VPhrase):
        raise RealizationError(f"{lin.name}: body does not build a clause")
    return ClauseRec(subj, vp)


# -- morphology and word order -------------------------------------------

def _en_be(tense: Tense, subj: NPhrase | None) -> str:
    if subj is None or subj.is_empty:
        return "be" if tense is Tense.Pres else "was"
    if tense is Tense.Pres:
        if subj.number == "sg" and subj.person == 1:
            return "am"
        return "is" if subj.number == "sg" and subj.person == 3 else "are"
    return "was" if subj.number == "sg" and subj.person in (1, 3) else "were"


def verb_forms(verb: LexiconEntry, voice: Voice, tense: Tense | None, subj: NPhrase | None) -> list[str]:
    """Verb group words: finite when ``tense`` is given, else infinitive."""
    inf = verb.inflection
    if verb.lang == "en":
        if voice is Voice.Pass:
            aux = "be" if tense is None else _en_be(tense, subj)
            return [aux, inf.past_participle]
        if tense is None:
            return [inf.base]
        if tense is Tense.Past:
            return [inf.past]
        if subj is not None and not subj.is_empty and subj.number == "sg" and subj.person == 3:
            return [inf.pres3sg]
        return [inf.base]
    if verb.lang == "sv":
        if voice is Voice.Pass:
            # the s-passive infinitive coincides with the present for regular verbs
            return [inf.s_passive_past if tense is Tense.Past else inf.s_passive_present]
        if tense is None:
            return [inf.infinitive]
        return [inf.past if tense is Tense.Past else inf.present]
    raise RealizationError(f"unsupported language {verb.lang}")


def render_vp(vp: VPhrase, lang: str, tense: Tense | None = None, subj: NPhrase | None = None) -> str:
    words = []
    if vp.verb is not None:
        words += verb_forms(vp.verb, vp.voice, tense, subj)
        for kind, payload in vp.complements:
            if kind is PhraseCat.NP:
                if not payload.is_empty:
                    words.append(payload.obj)
            elif kind is PhraseCat.VP:
                inner = render_vp(payload, lang)
                if inner:
                    words += [vp.verb.marker, inner]
            elif kind is PhraseCat.S:
                if payload.surface:
                    words += [SUBJUNCTION[lang], payload.surface]
    words += [a.surface for a in vp.adverbials]
    return " ".join(w for w in words if w)


def capitalize(s: str) -> str:
    return s[:1].upper() + s[1:]


def mk_clause(c: ClauseRec, spec: SentenceSpec | Tense = SentenceSpec(), lang: str | None = None,
              capitalized: bool = True) -> Sentence:
    """Subject + verb group + complements + adverbials, without final period."""
    tense = spec.tense if isinstance(spec, SentenceSpec) else Tense(spec)
    if lang is None:
        if c.vp.verb is None:
            raise RealizationError("language required for a verbless clause")
        lang = c.vp.verb.lang
    if lang not in SUBJUNCTION:
        raise RealizationError(f"unsupported language {lang}")
    text = " ".join(w for w in (c.np.surface, render_vp(c.vp, lang, tense, c.np)) if w)
    out = Sentence(capitalize(text) if capitalized else text)
    out.empty_subject = c.np.is_empty
    return out


def mk_text(sentences: Sequence[str]) -> str:
    return " ".join(f"{s}." for s in sentences)


# -- frame trees ----------------------------------------------------------

@dataclass(frozen=True)
class FrameTree:
    """A frame function applied to FE arguments and a lexical verb.

    Argument values are phrases or nested trees (for VP and S arguments).
    """

    function: str
    args: Mapping[str, Any] = field(default_factory=dict)
    verb: str = ""
    tense: Tense = Tense.Pres
    lang: str | None = None
    adverbials: tuple[AdvPhrase, ...] = ()


_TREE_FIELDS = {"function", "args", "verb", "tense", "lang", "adverbials"}
_PHRASE_FIELDS = {"text", "cat", "number", "person", "obj"}


def phrase_from_record(rec, lang: str | None = None):
    if rec is None:
        return None
    if "function" in rec:
        return tree_from_record(rec, lang)
    unknown = set(rec) - _PHRASE_FIELDS
    if unknown:
        raise RealizationError(f"unknown phrase field(s): {sorted(unknown)}")
    cat = PhraseCat(rec["cat"])
    text = rec["text"]
    if cat is PhraseCat.NP:
        return np(text, lang, rec.get("number"), rec.get("person"), rec.get("obj"))
    if cat is PhraseCat.Adv:
        return AdvPhrase(text)
    if cat is PhraseCat.S:
        return SPhrase(text)
    raise RealizationError("VP arguments must be nested frame trees")


def tree_from_record(rec, lang: str | None = None) -> FrameTree:
    if not isinstance(rec, dict):
        raise RealizationError("frame tree must be an object")
    unknown = set(rec) - _TREE_FIELDS
    if unknown:
        raise RealizationError(f"unknown tree field(s): {sorted(unknown)}")
    try:
        lang = rec.get("lang", lang)
        args = {k: phrase_from_record(v, lang) for k, v in rec.get("args", {}).items()}
        advs = tuple(AdvPhrase(a["text"]) for a in rec.get("adverbials", ()))
        return FrameTree(rec["function"], args, rec["verb"], Tense(rec.get("tense", "Pres")), rec.get("lang"), advs)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, RealizationError):
            raise
        raise RealizationError(f"malformed frame tree: {exc!r}") from None


def load_trees(path, lang: str | None = None) -> list[FrameTree]:
    trees = []
    with open(Path(path), encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                trees.append(tree_from_record(json.loads(line), lang))
            except (json.JSONDecodeError, RealizationError) as exc:
                raise RealizationError(f"{path}:{lineno}: {exc}") from None
    return trees


def realize_tree(tree: FrameTree, bundle: GrammarBundle, lang: str, via: str = "direct") -> ClauseRec:
    """Clause record of a frame tree; ``via="concrete"`` evaluates the
    generated linearization instead of the declaration."""
    lang = tree.lang or lang
    decl = bundle.function(tree.function)
    verb = bundle.lexical(tree.verb, lang)
    args = {}
    for k, v in tree.args.items():
        if isinstance(v, FrameTree):
            inner = realize_tree(v, bundle, lang, via)
            cat = k.rpartition("_")[2]
            if cat == "VP":
                v = nest_clause_as_vp(inner)
            elif cat == "S":
                v = SPhrase(mk_clause(inner, v.tense, lang, capitalized=False))
            else:
                raise RealizationError(f"nested frame in {k}: only VP and S arguments nest")
        args[k] = v
    if via == "concrete":
        lin = bundle.concretes[lang][decl.name]
        clause = interpret_lin(lin, decl.arg_categories, args, verb)
    else:
        clause = apply_frame_function(decl, args, verb)
    for adv in tree.adverbials:
        clause = attach_adverbial(clause, adv)
    return clause


def realize_sentence(tree: FrameTree, bundle: GrammarBundle, lang: str, capitalized: bool = True,
                     via: str = "direct") -> Sentence:
    clause = realize_tree(tree, bundle, lang, via)
    return mk_clause(clause, tree.tense, tree.lang or lang, capitalized)


def phrase_to_record(x) -> dict | None:
    if x is None:
        return None
    if isinstance(x, FrameTree):
        return tree_to_record(x)
    if isinstance(x, NPhrase):
        rec = {"text": x.surface, "cat": "NP", "number": x.number, "person": x.person}
        if x.object_form:
            rec["obj"] = x.object_form
        return rec
    if isinstance(x, AdvPhrase):
        return {"text": x.surface, "cat": "Adv"}
    if isinstance(x, SPhrase):
        return {"text": x.surface, "cat": "S"}
    raise RealizationError(f"cannot serialize {x!r}")


def tree_to_record(t: FrameTree) -> dict:
    rec = {"function": t.function, "args": {k: phrase_to_record(v) for k, v in t.args.items()},
           "verb": t.verb, "tense": t.tense.value}
    if t.lang:
        rec["lang"] = t.lang
    if t.adverbials:
        rec["adverbials"] = [{"text": a.surface} for a in t.adverbials]
    return rec
