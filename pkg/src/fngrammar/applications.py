"""The Phrasebook and Painting case studies on top of the generated grammar."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .codegen import GrammarBundle, compile_grammar, load_lexicon
from .corpus_model import load_corpus, load_frames
from .extraction import extract_all
from .pattern_algebra import shared_set
from .realizer import (
    AdvPhrase,
    FrameTree,
    NPhrase,
    RealizationError,
    Tense,
    mk_text,
    np,
    realize_sentence,
)


def data_path(name: str) -> Path:
    return Path(str(resources.files("fngrammar") / "data" / name))


@lru_cache(maxsize=None)
def demo_bundle() -> GrammarBundle:
    """Grammar compiled from the bundled sample corpora and demo lexicons."""
    frames = load_frames(data_path("frames.jsonl"))
    en = extract_all(load_corpus(data_path("sample_en.jsonl"), frames)).patterns
    sv = extract_all(load_corpus(data_path("sample_sv.jsonl"), frames)).patterns
    lexicon = load_lexicon(data_path("lexicon_en.jsonl")) + load_lexicon(data_path("lexicon_sv.jsonl"))
    return compile_grammar(shared_set(en, sv), lexicon)


def _verb(bundle: GrammarBundle, name: str, lang: str) -> str:
    try:
        bundle.lexical(name, lang)
    except KeyError:
        raise RealizationError(f"missing lexicon entry {name} ({lang})") from None
    return name


# -- Phrasebook -----------------------------------------------------------

class ActionKind(str, Enum):
    ALive = "ALive"
    AWant = "AWant"
    AWantGo = "AWantGo"


@dataclass(frozen=True)
class Person:
    name: NPhrase


@dataclass(frozen=True)
class Place:
    to: AdvPhrase


@dataclass(frozen=True)
class PhrasebookAction:
    kind: ActionKind
    person: Person
    complement: NPhrase | Place

    def __post_init__(self):
        want = Place if self.kind is ActionKind.AWantGo else NPhrase
        if not isinstance(self.complement, want):
            raise ValueError(f"{self.kind.value} takes a {want.__name__} complement")


# shared domain verbs linking per-language lexical units
DOMAIN_VERBS = {
    "live_V": {"en": "live_V_Residence", "sv": "bo_V_Residence"},
    "want_V2": {"en": "want_V2_Desiring"},
    "want_VV": {"en": "want_VV_Desiring", "sv": "vilja_VV_Desiring"},
    "have_V2": {"en": "have_V2_Possession", "sv": "ha_V2_Possession"},
    "go_V": {"en": "go_V_Motion", "sv": "gå_V_Motion"},
}
IN_PREP = {"en": "in", "sv": "i"}


def phrasebook_tree(a: PhrasebookAction, lang: str, bundle: GrammarBundle | None = None) -> FrameTree:
    bundle = bundle or demo_bundle()

    def verb(key):
        name = DOMAIN_VERBS[key].get(lang)
        if name is None:
            raise RealizationError(f"missing lexicon entry for {key} ({lang})")
        return _verb(bundle, name, lang)

    who = a.person.name
    if a.kind is ActionKind.ALive:
        country = AdvPhrase(f"{IN_PREP[lang]} {a.complement.surface}")
        return FrameTree("Residence_V", {"Location_Adv": country, "Resident_NP": who}, verb("live_V"))
    if a.kind is ActionKind.AWant:
        if lang == "sv":
            # vilja needs the auxiliary ha: a nested Possession frame
            have = FrameTree("Possession_V2", {"Owner_NP": None, "Possession_NP": a.complement}, verb("have_V2"))
            return FrameTree("Desiring_VV", {"Event_VP": have, "Experiencer_NP": who}, verb("want_VV"))
        return FrameTree("Desiring_V2_Act", {"Experiencer_NP": who, "Focal_participant_NP": a.complement},
                         verb("want_V2"))
    go = FrameTree("Motion_V_2", {"Goal_Adv": a.complement.to, "Source_Adv": None, "Theme_NP": None}, verb("go_V"))
    return FrameTree("Desiring_VV", {"Event_VP": go, "Experiencer_NP": who}, verb("want_VV"))


def realize_phrasebook(a: PhrasebookAction, lang: str, bundle: GrammarBundle | None = None) -> str:
    bundle = bundle or demo_bundle()
    return realize_sentence(phrasebook_tree(a, lang, bundle), bundle, lang, capitalized=False)


def alive(person: str, country: str, lang: str) -> PhrasebookAction:
    return PhrasebookAction(ActionKind.ALive, Person(np(person, lang)), np(country, lang))


def awant(person: str, obj: str, lang: str) -> PhrasebookAction:
    return PhrasebookAction(ActionKind.AWant, Person(np(person, lang)), np(obj, lang))


def awantgo(person: str, to: str, lang: str) -> PhrasebookAction:
    return PhrasebookAction(ActionKind.AWantGo, Person(np(person, lang)), Place(AdvPhrase(to)))


# -- Painting -------------------------------------------------------------

@dataclass(frozen=True)
class Painter:
    long: NPhrase


@dataclass(frozen=True)
class PaintingRecord:
    painting: NPhrase
    painter: Painter
    year: AdvPhrase
    size: AdvPhrase
    museum: AdvPhrase


@dataclass(frozen=True)
class _PaintingLanguage:
    it: str
    this_work: str
    paint: str
    measure: str
    location_function: str
    locate: str


PAINTING_LANGUAGES = {
    "en": _PaintingLanguage("it", "this work", "paint_V2_Create_physical_artwork", "measure_V_Dimension",
                            "Being_located_V2_Pass", "display_V2_Being_located"),
    # Swedish keeps the active "hänger på" where English is passive
    "sv": _PaintingLanguage("den", "det här verket", "måla_V2_Create_physical_artwork", "mäta_V_Dimension",
                            "Being_located_V", "hänga_V_Being_located"),
}


def painting_trees(r: PaintingRecord, lang: str, bundle: GrammarBundle | None = None) -> list[FrameTree]:
    bundle = bundle or demo_bundle()
    L = PAINTING_LANGUAGES[lang]
    created = FrameTree(
        "Create_physical_artwork_V2_Pass",
        {"Creator_NP": r.painter.long, "Representation_NP": r.painting},
        _verb(bundle, L.paint, lang), Tense.Past,
        adverbials=(r.year,),  # non-core Time, attached after the frame
    )
    measured = FrameTree("Dimension_V", {"Measurement_Adv": r.size, "Object_NP": np(L.it, lang)},
                         _verb(bundle, L.measure, lang))
    located = FrameTree(L.location_function, {"Location_Adv": r.museum, "Theme_NP": np(L.this_work, lang)},
                        _verb(bundle, L.locate, lang))
    return [created, measured, located]


def realize_painting(r: PaintingRecord, lang: str, bundle: GrammarBundle | None = None) -> str:
    bundle = bundle or demo_bundle()
    return mk_text([realize_sentence(t, bundle, lang) for t in painting_trees(r, lang, bundle)])


LE_GENERAL_BONAPARTE = {
    "en": PaintingRecord(
        painting=np("Le Général Bonapart"),
        painter=Painter(np("Jacques-Louis David")),
        year=AdvPhrase("in 1510"),
        size=AdvPhrase("81 by 65 cm"),
        museum=AdvPhrase("at the Musée du Louvre"),
    ),
    "sv": PaintingRecord(
        painting=np("Le Général Bonapart"),
        painter=Painter(np("Jacques-Louis David")),
        year=AdvPhrase("år 1510"),
        size=AdvPhrase("81 gånger 65 cm"),
        museum=AdvPhrase("på Louvren"),
    ),
}

PHRASEBOOK_DEMO = {
    "en": [alive("we", "Sweden", "en"), awant("I", "a pizza", "en"), awantgo("I", "to a museum", "en")],
    "sv": [alive("vi", "Sverige", "sv"), awant("jag", "en pizza", "sv"), awantgo("jag", "till ett museum", "sv")],
}
