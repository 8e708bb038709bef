"""Source notation for generated grammars: expression trees, printer and parser.

The notation is a small subset of GF::

    abstract FrameNet = {
    cat Experiencer_NP
    -- pattern Desiring/V2_Act Experiencer/NP_Subj Focal_participant/NP_DObj
    fun Desiring_V2_Act : Experiencer_NP -> Focal_participant_NP -> V2 -> Clause
    fun want_V2_Desiring : V2
    }

    concrete FrameNetEng of FrameNet = {
    lincat Experiencer_NP = Maybe NP
    lin Desiring_V2_Act experiencer focal_participant v2 = {
      np = fromMaybe NP experiencer ;
      vp = mkVP v2 (fromMaybe NP focal_participant) }
    lin want_V2_Desiring = mkV2 (mkV "want" "wants" "wanted" "wanted" "wanting")
    }

Declarations are not terminated; an expression ends at the next keyword,
``;`` or ``}``.  ``-- pattern`` lines annotate the following ``fun`` with the
valence pattern it was compiled from; other ``--`` comments are ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union


class GrammarSyntaxError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: {message}")


@dataclass(frozen=True)
class Name:
    id: str


@dataclass(frozen=True)
class Str:
    value: str


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple["Expr", ...]


Expr = Union[Name, Str, App]


def app(fn: str, *args: Expr) -> App:
    return App(fn, tuple(args))


def render_expr(e: Expr, nested: bool = False) -> str:
    if isinstance(e, Name):
        return e.id
    if isinstance(e, Str):
        return '"' + e.value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if not e.args:
        return e.fn
    text = " ".join([e.fn, *(render_expr(a, True) for a in e.args)])
    return f"({text})" if nested else text


@dataclass(frozen=True)
class FunSig:
    name: str
    arg_types: tuple[str, ...]
    result: str
    pattern: str | None = None


@dataclass(frozen=True)
class LinDef:
    """A linearization.  Frame functions have a record body (``np``/``vp``);
    lexical entries have a plain expression body."""

    name: str
    params: tuple[str, ...]
    fields: tuple[tuple[str, Expr], ...] = ()
    body: Expr | None = None

    def field(self, label: str) -> Expr:
        for k, v in self.fields:
            if k == label:
                return v
        raise KeyError(label)


@dataclass
class Module:
    kind: str  # "abstract" or "concrete"
    name: str
    of: str | None = None
    cats: list[str] = field(default_factory=list)
    funs: list[FunSig] = field(default_factory=list)
    lincats: list[tuple[str, Expr]] = field(default_factory=list)
    lins: list[LinDef] = field(default_factory=list)


# -- printing -------------------------------------------------------------

def render_fun(sig: FunSig) -> str:
    return f"fun {sig.name} : " + " -> ".join([*sig.arg_types, sig.result])


def render_lin(lin: LinDef) -> str:
    head = " ".join(["lin", lin.name, *lin.params, "="])
    if lin.body is not None:
        return f"{head} {render_expr(lin.body)}"
    inner = " ;\n".join(f"  {k} = {render_expr(v)}" for k, v in lin.fields)
    return f"{head} {{\n{inner} }}"


def render_module(m: Module, header_comment: str | None = None) -> str:
    out = []
    if header_comment:
        out.extend(f"-- {line}" for line in header_comment.splitlines())
    if m.kind == "abstract":
        out.append(f"abstract {m.name} = {{")
    else:
        of = f" of {m.of}" if m.of else ""
        out.append(f"concrete {m.name}{of} = {{")
    if m.cats:
        out.append("")
        out.extend(f"cat {c}" for c in m.cats)
    if m.funs:
        out.append("")
        for f in m.funs:
            if f.pattern:
                out.append(f"-- pattern {f.pattern}")
            out.append(render_fun(f))
    if m.lincats:
        out.append("")
        out.extend(f"lincat {c} = {render_expr(e)}" for c, e in m.lincats)
    prev_lexical = None
    for lin in m.lins:
        lexical = lin.body is not None
        if not lexical or prev_lexical is not True:
            out.append("")
        out.append(render_lin(lin))
        prev_lexical = lexical
    out.append("}")
    return "\n".join(out) + "\n"


# -- parsing --------------------------------------------------------------

KEYWORDS = {"abstract", "concrete", "of", "cat", "fun", "lincat", "lin"}

_TOKEN_RE = re.compile(
    r"""
    (?P<pattern>--[ \t]*pattern[ \t]+[^\n]*)
  | (?P<comment>--[^\n]*)
  | (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<arrow>->)
  | (?P<str>"(?:[^"\\\n]|\\.)*")
  | (?P<sym>[(){}=;:])
  | (?P<ident>[^\W\d][\w']*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(src: str) -> list[Token]:
    tokens = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        col = pos - line_start + 1
        if m is None:
            raise GrammarSyntaxError(f"unexpected character {src[pos]!r}", line, col)
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "pattern":
            tokens.append(Token("pattern", text.split("pattern", 1)[1].strip(), line, col))
        elif kind == "str":
            body = re.sub(r"\\(.)", r"\1", text[1:-1])
            tokens.append(Token("str", body, line, col))
        elif kind == "ident":
            tokens.append(Token("kw" if text in KEYWORDS else "ident", text, line, col))
        elif kind in ("arrow", "sym"):
            tokens.append(Token("sym", text, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str):
        t = self.tok
        found = "end of file" if t.kind == "eof" else repr(t.text)
        raise GrammarSyntaxError(f"{msg}, found {found}", t.line, t.col)

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def expect(self, kind: str, text: str | None = None) -> Token:
        if not self.at(kind, text):
            self.error(f"expected {text or kind}")
        return self.advance()

    def ident(self) -> str:
        return self.expect("ident").text

    def module(self) -> Module:
        if self.at("kw", "abstract"):
            self.advance()
            m = Module("abstract", self.ident())
        elif self.at("kw", "concrete"):
            self.advance()
            m = Module("concrete", self.ident())
            if self.at("kw", "of"):
                self.advance()
                m.of = self.ident()
        else:
            self.error("expected 'abstract' or 'concrete'")
        self.expect("sym", "=")
        self.expect("sym", "{")
        pending_pattern = None
        while not self.at("sym", "}"):
            t = self.tok
            if t.kind == "pattern":
                self.advance()
                pending_pattern = t.text
                if not (m.kind == "abstract" and self.at("kw", "fun")):
                    self.error("pattern annotation must precede a fun")
                continue
            if m.kind == "abstract" and self.at("kw", "cat"):
                self.advance()
                m.cats.append(self.ident())
            elif m.kind == "abstract" and self.at("kw", "fun"):
                self.advance()
                name = self.ident()
                self.expect("sym", ":")
                types = [self.ident()]
                while self.at("sym", "->"):
                    self.advance()
                    types.append(self.ident())
                m.funs.append(FunSig(name, tuple(types[:-1]), types[-1], pending_pattern))
                pending_pattern = None
                continue
            elif m.kind == "concrete" and self.at("kw", "lincat"):
                self.advance()
                name = self.ident()
                self.expect("sym", "=")
                m.lincats.append((name, self.expr()))
            elif m.kind == "concrete" and self.at("kw", "lin"):
                self.advance()
                m.lins.append(self.lin())
            else:
                self.error("expected a declaration or '}'")
        self.expect("sym", "}")
        self.expect("eof")
        return m

    def lin(self) -> LinDef:
        name = self.ident()
        params = []
        while self.at("ident"):
            params.append(self.advance().text)
        self.expect("sym", "=")
        if not self.at("sym", "{"):
            return LinDef(name, tuple(params), body=self.expr())
        self.advance()
        fields = []
        while True:
            label = self.ident()
            self.expect("sym", "=")
            fields.append((label, self.expr()))
            if self.at("sym", ";"):
                self.advance()
                continue
            self.expect("sym", "}")
            break
        return LinDef(name, tuple(params), tuple(fields))

    def _atom_start(self) -> bool:
        return self.tok.kind in ("ident", "str") or self.at("sym", "(")

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "ident":
            self.advance()
            return Name(t.text)
        if t.kind == "str":
            self.advance()
            return Str(t.text)
        if self.at("sym", "("):
            self.advance()
            e = self.expr()
            self.expect("sym", ")")
            return e
        self.error("expected an expression")

    def expr(self) -> Expr:
        head = self.atom()
        args = []
        while self._atom_start():
            args.append(self.atom())
        if not args:
            return head
        if not isinstance(head, Name):
            self.error("only names can be applied")
        return App(head.id, tuple(args))


def parse_module(src: str) -> Module:
    return _Parser(src).module()
