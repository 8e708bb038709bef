"""Compile a shared pattern set into grammar source: abstract syntax,
per-language concrete syntaxes and lexicons."""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from .corpus_model import CorpusError, PhraseCat, SynRole, VerbType, Voice
from .extraction import FERealization, PatternSet, ValencePattern, canonical_fes, pattern_from_record, pattern_to_record
from .grammar_syntax import (
    App,
    Expr,
    FunSig,
    LinDef,
    Module,
    Name,
    Str,
    app,
    parse_module,
    render_module,
)

LANG_SUFFIX = {"en": "Eng", "sv": "Swe"}
SUFFIX_LANG = {v: k for k, v in LANG_SUFFIX.items()}


class TemplateError(RuntimeError):
    """An FE realization has no slot in the template for its verb type."""


class NamingError(RuntimeError):
    pass


# -- declarations ---------------------------------------------------------

@dataclass(frozen=True)
class FECategoryDecl:
    fe: str
    cat: PhraseCat

    @property
    def name(self) -> str:
        return f"{self.fe}_{self.cat.value}"


@dataclass(frozen=True)
class FrameFunctionDecl:
    name: str
    frame: str
    verb_type: VerbType
    voice: Voice
    args: tuple[FERealization, ...]
    discriminator: int | None = None

    @property
    def pattern(self) -> ValencePattern:
        return ValencePattern(self.frame, self.verb_type, self.voice, canonical_fes(self.args))

    @property
    def arg_categories(self) -> tuple[str, ...]:
        return tuple(a.category for a in self.args)

    @property
    def verb_param(self) -> str:
        return self.verb_type.value.lower()

    def signature(self) -> FunSig:
        return FunSig(self.name, (*self.arg_categories, self.verb_type.value), "Clause", str(self.pattern))


def ordered_args(fes: Iterable[FERealization]) -> tuple[FERealization, ...]:
    args = tuple(sorted(fes, key=lambda r: r.category))
    cats = [a.category for a in args]
    if len(set(cats)) != len(cats):
        raise TemplateError(f"repeated FE category in {cats}")
    return args


def name_functions(shared: PatternSet | Iterable[ValencePattern]) -> list[FrameFunctionDecl]:
    """One declaration per pattern, named Frame_VT[_Voice][_N]."""
    pats = sorted(shared.counts if isinstance(shared, PatternSet) else set(shared), key=lambda p: p.sort_key)
    voices = defaultdict(set)
    for p in pats:
        voices[(p.frame, p.verb_type)].add(p.voice)
    groups: dict[str, list[ValencePattern]] = defaultdict(list)
    for p in pats:
        base = f"{p.frame}_{p.verb_type.value}"
        if len(voices[(p.frame, p.verb_type)]) > 1:
            base += f"_{p.voice.value}"
        groups[base].append(p)

    decls = []
    for base, members in groups.items():
        for i, p in enumerate(members, 1):
            disc = i if len(members) > 1 else None
            name = base if disc is None else f"{base}_{disc}"
            decls.append(FrameFunctionDecl(name, p.frame, p.verb_type, p.voice, ordered_args(p.fes), disc))
    names = [d.name for d in decls]
    if len(set(names)) != len(names):
        raise NamingError(f"function name collision among {sorted(names)}")
    decls.sort(key=lambda d: d.name)
    return decls


def fe_categories(decls: Iterable[FrameFunctionDecl]) -> list[FECategoryDecl]:
    cats = {FECategoryDecl(a.fe, a.cat) for d in decls for a in d.args}
    return sorted(cats, key=lambda c: c.name)


# -- lexicon --------------------------------------------------------------

@dataclass(frozen=True)
class EnglishInflection:
    base: str
    pres3sg: str
    past: str
    past_participle: str
    pres_participle: str


@dataclass(frozen=True)
class SwedishInflection:
    infinitive: str
    present: str
    past: str
    supine: str
    s_passive_present: str
    s_passive_past: str


INFLECTION_CLASSES = {"en": EnglishInflection, "sv": SwedishInflection}


@dataclass(frozen=True)
class LexiconEntry:
    lemma: str
    verb_type: VerbType
    frame: str
    lang: str
    inflection: EnglishInflection | SwedishInflection
    marker: str = ""

    def __post_init__(self):
        for k, v in vars(self.inflection).items():
            if not v:
                raise ValueError(f"{self.lemma}: empty inflected form {k}")

    @property
    def name(self) -> str:
        return f"{self.lemma}_{self.verb_type.value}_{self.frame}"


def lexicon_entry_from_record(rec) -> LexiconEntry:
    unknown = set(rec) - {"lemma", "vtype", "frame", "lang", "forms", "marker"}
    if unknown:
        raise ValueError(f"unknown lexicon field(s): {', '.join(sorted(unknown))}")
    lang = rec["lang"]
    cls = INFLECTION_CLASSES.get(lang)
    if cls is None:
        raise ValueError(f"unsupported language {lang!r}")
    return LexiconEntry(rec["lemma"], VerbType(rec["vtype"]), rec["frame"], lang, cls(**rec["forms"]), rec.get("marker", ""))


def lexicon_entry_to_record(e: LexiconEntry) -> dict:
    return {
        "lemma": e.lemma,
        "vtype": e.verb_type.value,
        "frame": e.frame,
        "lang": e.lang,
        "forms": dict(vars(e.inflection)),
        "marker": e.marker,
    }


def load_lexicon(path) -> list[LexiconEntry]:
    entries = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                entries.append(lexicon_entry_from_record(json.loads(line)))
            except (ValueError, KeyError, TypeError) as exc:
                raise CorpusError(f"bad lexicon record: {exc}", lineno, path) from None
    return entries


_VERB_CTOR = {
    VerbType.V: None,
    VerbType.V2: "mkV2",
    VerbType.V3: "mkV3",
    VerbType.VV: "mkVV",
    VerbType.VS: "mkVS",
    VerbType.V2V: "mkV2V",
    VerbType.V2S: "mkV2S",
}
_MARKED = {VerbType.VV, VerbType.V2V}


def lexicon_lin(e: LexiconEntry) -> LinDef:
    forms = app("mkV", *(Str(v) for v in vars(e.inflection).values()))
    ctor = _VERB_CTOR[e.verb_type]
    if ctor is None:
        body = forms
    elif e.verb_type in _MARKED:
        body = app(ctor, forms, Str(e.marker))
    else:
        body = app(ctor, forms)
    return LinDef(e.name, (), body=body)


def _split_lexical_name(name: str) -> tuple[str, VerbType, str]:
    parts = name.split("_")
    for i in range(1, len(parts) - 1):
        if parts[i] in VerbType._value2member_map_:
            return "_".join(parts[:i]), VerbType(parts[i]), "_".join(parts[i + 1:])
    raise ValueError(f"not a lexical function name: {name}")


def lexicon_entry_from_lin(lin: LinDef, lang: str) -> LexiconEntry:
    lemma, vt, frame = _split_lexical_name(lin.name)
    body = lin.body
    marker = ""
    if not (isinstance(body, App) and body.fn == "mkV"):
        if not isinstance(body, App) or body.fn != _VERB_CTOR[vt]:
            raise ValueError(f"{lin.name}: expected {_VERB_CTOR[vt] or 'mkV'}")
        if vt in _MARKED:
            body, m = body.args
            marker = m.value
        else:
            (body,) = body.args
    forms = [a.value for a in body.args]
    return LexiconEntry(lemma, vt, frame, lang, INFLECTION_CLASSES[lang](*forms), marker)


def gen_lexicon(entries: Sequence[LexiconEntry], lang: str, name: str = "Lexicon") -> str:
    seen = set()
    for e in entries:
        if e.lang != lang:
            raise ValueError(f"{e.name}: entry language {e.lang} != {lang}")
        if e.name in seen:
            raise ValueError(f"duplicate lexicon entry {e.name}")
        seen.add(e.name)
    m = Module("concrete", f"{name}{LANG_SUFFIX[lang]}", of=name)
    m.lins = [lexicon_lin(e) for e in sorted(entries, key=lambda e: e.name)]
    return render_module(m)


# -- templates ------------------------------------------------------------

_OBJECT_SLOTS = {
    (VerbType.V2, Voice.Act): ((SynRole.DObj,),),
    (VerbType.V3, Voice.Act): ((SynRole.IObj,), (SynRole.DObj,)),
    (VerbType.V2V, Voice.Act): ((SynRole.IObj, SynRole.DObj),),
    (VerbType.V2S, Voice.Act): ((SynRole.IObj, SynRole.DObj),),
    (VerbType.V3, Voice.Pass): ((SynRole.IObj, SynRole.DObj),),
}
_CLAUSE_SLOT = {
    VerbType.VV: PhraseCat.VP,
    VerbType.V2V: PhraseCat.VP,
    VerbType.VS: PhraseCat.S,
    VerbType.V2S: PhraseCat.S,
}
_EMPTY = {PhraseCat.NP: "emptyNP", PhraseCat.S: "emptyS", PhraseCat.VP: "emptyVP", PhraseCat.Adv: "emptyAdv"}

# per-language ordering of adverbial FEs; alphabetical unless overridden
ADV_ORDER: dict[str, Callable[[Sequence[FERealization]], list[FERealization]]] = {}


def order_adverbials(advs: Sequence[FERealization], lang: str | None = None) -> list[FERealization]:
    hook = ADV_ORDER.get(lang) if lang else None
    if hook is not None:
        return list(hook(advs))
    return sorted(advs, key=lambda a: a.category)


def param_names(decl: FrameFunctionDecl) -> dict[FERealization, str]:
    """Lower-cased FE names as linearization parameters, disambiguated when
    one FE occurs with two categories."""
    counts = defaultdict(int)
    for a in decl.args:
        counts[a.fe.lower()] += 1
    names = {}
    reserved = {decl.verb_param, *_EMPTY.values()}
    for a in decl.args:
        n = a.fe.lower()
        if counts[n] > 1 or n in reserved:
            n = f"{n}_{a.cat.value.lower()}"
        names[a] = n
    return names


def _from_maybe(cat: PhraseCat, var: str) -> App:
    return app("fromMaybe", Name(cat.value), Name(var))


def build_lin(decl: FrameFunctionDecl, lang: str | None = None) -> LinDef:
    """Instantiate the syntactic template for one frame function."""
    var = param_names(decl)
    vt, voice = decl.verb_type, decl.voice
    v = Name(decl.verb_param)

    subj = [a for a in decl.args if a.role is SynRole.Subj]
    agent = [a for a in decl.args if a.role is SynRole.Agent]
    objects = [a for a in decl.args if a.role in (SynRole.DObj, SynRole.IObj)]
    clausal = [a for a in decl.args if a.cat in (PhraseCat.S, PhraseCat.VP)]
    advs = [a for a in decl.args if a.cat is PhraseCat.Adv]
    if agent and voice is not Voice.Pass:
        raise TemplateError(f"{decl.name}: agent in active voice")

    np = _from_maybe(PhraseCat.NP, var[subj[0]]) if subj else Name("emptyNP")

    comps: list[Expr] = []
    remaining = list(objects)
    for accepted in _OBJECT_SLOTS.get((vt, voice), ()):
        hit = next((a for a in remaining if a.role in accepted), None)
        if hit is None:
            comps.append(Name("emptyNP"))
        else:
            remaining.remove(hit)
            comps.append(_from_maybe(PhraseCat.NP, var[hit]))
    if remaining:
        raise TemplateError(f"{decl.name}: no slot for object(s) {[str(a) for a in remaining]}")

    want = _CLAUSE_SLOT.get(vt)
    if any(a.cat is not want for a in clausal) or len(clausal) > 1:
        raise TemplateError(f"{decl.name}: no slot for clausal FE(s) {[str(a) for a in clausal]}")
    if want is not None:
        comps.append(_from_maybe(want, var[clausal[0]]) if clausal else Name(_EMPTY[want]))

    if voice is Voice.Pass:
        vp: Expr = app("passiveVP", v, *comps)
    elif vt is VerbType.VV:
        vp = app("mkVP", app("mkVV", v), *comps)
    else:
        vp = app("mkVP", v, *comps)
    for a in agent:
        vp = app("mkVP", vp, app("mkAdv", Name("by8agent_Prep"), _from_maybe(PhraseCat.NP, var[a])))
    for a in order_adverbials(advs, lang):
        vp = app("mkVP", vp, _from_maybe(PhraseCat.Adv, var[a]))

    params = tuple(var[a] for a in decl.args) + (decl.verb_param,)
    return LinDef(decl.name, params, (("np", np), ("vp", vp)))


# -- modules --------------------------------------------------------------

def abstract_module(decls: Sequence[FrameFunctionDecl], cats: Sequence[FECategoryDecl] | None = None,
                    lexical: Iterable[LexiconEntry] = (), name: str = "FrameNet") -> Module:
    if cats is None:
        cats = fe_categories(decls)
    m = Module("abstract", name)
    m.cats = [c.name for c in sorted(cats, key=lambda c: c.name)]
    m.funs = [d.signature() for d in sorted(decls, key=lambda d: d.name)]
    lex = {e.name: e.verb_type.value for e in lexical}
    m.funs += [FunSig(n, (), lex[n]) for n in sorted(lex)]
    return m


def gen_abstract(decls: Sequence[FrameFunctionDecl], cats: Sequence[FECategoryDecl] | None = None,
                 lexical: Iterable[LexiconEntry] = (), name: str = "FrameNet") -> str:
    return render_module(abstract_module(decls, cats, lexical, name))


def concrete_module(decls: Sequence[FrameFunctionDecl], lang: str, name: str = "FrameNet") -> Module:
    m = Module("concrete", f"{name}{LANG_SUFFIX[lang]}", of=name)
    m.lincats = [(c.name, app("Maybe", Name(c.cat.value))) for c in fe_categories(decls)]
    m.lins = [build_lin(d, lang) for d in sorted(decls, key=lambda d: d.name)]
    return m


def gen_concrete(decls: Sequence[FrameFunctionDecl], lang: str, name: str = "FrameNet") -> str:
    return render_module(concrete_module(decls, lang, name))


# -- parsing back ---------------------------------------------------------

@dataclass
class GrammarBundle:
    name: str
    categories: list[FECategoryDecl]
    functions: list[FrameFunctionDecl]
    lexicons: dict[str, list[LexiconEntry]]
    concretes: dict[str, dict[str, LinDef]]
    lexical_signatures: dict[str, VerbType] | None = None

    def function(self, name: str) -> FrameFunctionDecl:
        for d in self.functions:
            if d.name == name:
                return d
        raise KeyError(f"unknown frame function {name}")

    def lexical(self, name: str, lang: str | None = None) -> LexiconEntry:
        langs = [lang] if lang else sorted(self.lexicons)
        for lg in langs:
            for e in self.lexicons.get(lg, ()):
                if e.name == name:
                    return e
        raise KeyError(f"unknown lexicon entry {name}" + (f" for {lang}" if lang else ""))

    def check(self) -> list[str]:
        """Every concrete lin has a declared function and vice versa."""
        problems = []
        declared = {d.name for d in self.functions}
        for lang, lins in self.concretes.items():
            for n in sorted(set(lins) - declared):
                problems.append(f"{lang}: lin {n} has no declaration")
            for n in sorted(declared - set(lins)):
                problems.append(f"{lang}: function {n} has no lin")
        return problems


def _decl_from_sig(sig: FunSig) -> FrameFunctionDecl:
    if sig.pattern is None:
        raise ValueError(f"fun {sig.name} lacks a pattern annotation")
    p = ValencePattern.parse(sig.pattern)
    args = ordered_args(p.fes)
    if tuple(a.category for a in args) != sig.arg_types[:-1] or sig.arg_types[-1:] != (p.verb_type.value,):
        raise ValueError(f"fun {sig.name}: signature disagrees with its pattern annotation")
    tail = sig.name.rsplit("_", 1)[-1]
    disc = int(tail) if tail.isdigit() else None
    return FrameFunctionDecl(sig.name, p.frame, p.verb_type, p.voice, args, disc)


def parse_grammar(src: str):
    """Parse one grammar source file.

    Returns a :class:`GrammarBundle` fragment: an abstract module yields
    categories, function declarations and lexical signatures; a frame
    concrete yields linearizations; a lexicon concrete yields entries.
    """
    m = parse_module(src)
    if m.kind == "abstract":
        funs, lexsig = [], {}
        for sig in m.funs:
            if sig.result == "Clause":
                funs.append(_decl_from_sig(sig))
            else:
                lexsig[sig.name] = VerbType(sig.result)
        cats = []
        for c in m.cats:
            fe, _, cat = c.rpartition("_")
            cats.append(FECategoryDecl(fe, PhraseCat(cat)))
        return GrammarBundle(m.name, cats, funs, {}, {}, lexsig)
    lang = SUFFIX_LANG.get(m.name[-3:])
    if lang is None:
        raise ValueError(f"cannot tell the language of concrete {m.name}")
    base = m.of or m.name[:-3]
    if base == "Lexicon" or (m.lins and all(lin.body is not None for lin in m.lins)):
        entries = [lexicon_entry_from_lin(lin, lang) for lin in m.lins]
        return GrammarBundle(base, [], [], {lang: entries}, {})
    return GrammarBundle(base, [], [], {}, {lang: {lin.name: lin for lin in m.lins}})


def merge_bundles(parts: Iterable[GrammarBundle]) -> GrammarBundle:
    out = GrammarBundle("", [], [], {}, {}, {})
    for b in parts:
        if b.lexical_signatures is not None:  # only abstract fragments carry these
            out.name = b.name
        out.categories += b.categories
        out.functions += b.functions
        for lang, es in b.lexicons.items():
            out.lexicons.setdefault(lang, []).extend(es)
        for lang, lins in b.concretes.items():
            out.concretes.setdefault(lang, {}).update(lins)
        out.lexical_signatures.update(b.lexical_signatures or {})
    return out


# -- bundle assembly and files ------------------------------------------

def compile_grammar(shared: PatternSet, lexicon: Iterable[LexiconEntry], langs: Sequence[str] = ("en", "sv"),
                    name: str = "FrameNet") -> GrammarBundle:
    decls = name_functions(shared)
    lexicons = {lang: sorted((e for e in lexicon if e.lang == lang), key=lambda e: e.name) for lang in langs}
    concretes = {lang: {lin.name: lin for lin in concrete_module(decls, lang, name).lins} for lang in langs}
    return GrammarBundle(name, fe_categories(decls), decls, lexicons, concretes,
                         {e.name: e.verb_type for es in lexicons.values() for e in es})


def bundle_sources(b: GrammarBundle) -> dict[str, str]:
    """File name -> source text for every grammar file of the bundle."""
    all_lex = [e for lang in sorted(b.lexicons) for e in b.lexicons[lang]]
    files = {f"{b.name}Abstract.txt": gen_abstract(b.functions, b.categories, all_lex, b.name)}
    for lang in sorted(b.concretes):
        files[f"{b.name}{LANG_SUFFIX[lang]}.txt"] = gen_concrete(b.functions, lang, b.name)
    for lang in sorted(b.lexicons):
        files[f"Lexicon{LANG_SUFFIX[lang]}.txt"] = gen_lexicon(b.lexicons[lang], lang)
    return files


def bundle_records(b: GrammarBundle) -> list[dict]:
    recs: list[dict] = [{"kind": "grammar", "name": b.name, "langs": sorted(b.concretes)}]
    for d in b.functions:
        recs.append({"kind": "fun", "name": d.name, "discriminator": d.discriminator,
                     "pattern": {k: v for k, v in pattern_to_record(d.pattern).items() if k not in ("freq", "derived")}})
    for lang in sorted(b.lexicons):
        for e in b.lexicons[lang]:
            recs.append({"kind": "lex", **lexicon_entry_to_record(e)})
    return recs


def write_bundle(b: GrammarBundle, out_dir) -> dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = {}
    for fname, text in bundle_sources(b).items():
        p = out_dir / fname
        p.write_text(text, encoding="utf-8")
        written[fname] = p
    p = out_dir / "bundle.jsonl"
    with open(p, "w", encoding="utf-8") as fh:
        for rec in bundle_records(b):
            fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")
    written["bundle.jsonl"] = p
    return written


def load_bundle(path) -> GrammarBundle:
    """Load ``bundle.jsonl`` (or a directory containing it)."""
    path = Path(path)
    if path.is_dir():
        path = path / "bundle.jsonl"
    name, langs = "FrameNet", ["en", "sv"]
    decls, lexicons = [], {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                kind = rec.pop("kind")
                if kind == "grammar":
                    name, langs = rec["name"], rec["langs"]
                elif kind == "fun":
                    p = pattern_from_record({**rec["pattern"], "freq": 1})
                    decls.append(FrameFunctionDecl(rec["name"], p.frame, p.verb_type, p.voice,
                                                   ordered_args(p.fes), rec.get("discriminator")))
                elif kind == "lex":
                    e = lexicon_entry_from_record(rec)
                    lexicons.setdefault(e.lang, []).append(e)
                else:
                    raise ValueError(f"unknown record kind {kind!r}")
            except (ValueError, KeyError, TypeError) as exc:
                raise CorpusError(f"bad bundle record: {exc}", lineno, path) from None
    concretes = {lang: {lin.name: lin for lin in concrete_module(decls, lang, name).lins} for lang in langs}
    return GrammarBundle(name, fe_categories(decls), decls, lexicons, concretes,
                         {e.name: e.verb_type for es in lexicons.values() for e in es})


def read_grammar_dir(path) -> GrammarBundle:
    """Parse every grammar text file of a generated directory."""
    parts = [parse_grammar(p.read_text(encoding="utf-8")) for p in sorted(Path(path).glob("*.txt"))]
    return merge_bundles(parts)


def roundtrip_problems(b: GrammarBundle) -> list[str]:
    """Differences between a bundle and the parse of its own printed sources."""
    parsed = merge_bundles(parse_grammar(src) for src in bundle_sources(b).values())
    return [f"{f} differs after reparsing" for f in
            ("name", "categories", "functions", "lexicons", "concretes", "lexical_signatures")
            if getattr(parsed, f) != getattr(b, f)]
