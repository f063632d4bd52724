"""Parser and pretty-printer for protori scripts.

A script is a sequence of lines, each either a binding or a command::

    # rank-2 clipped group
    t1 = {2:3, 3:inf}
    a1 = aseq(pre=[12], period=[5])
    group G = strands [({2:inf}, [1,0]), ({3:inf}, [0,1]), ({}, [1/5,1/5])]
    P = protorus(G)
    decompose G --bound 8
    member G [1/5, 1/5]

Grammar (whitespace-insensitive; newlines inside brackets are ignored)::

    binding   := [kind] NAME "=" value
    kind      := "heightseq" | "aseq" | "group" | "protorus"
    value     := heightseq | aseq | group | protorus | NAME
    heightseq := "{" [entry {"," entry}] ["|" "default" extnat] "}"
    entry     := prime ":" extnat
    extnat    := nat | "inf"
    aseq      := "aseq" "(" "pre" "=" ints "period" "=" ints ")"
               | "aseq" "(" "canonical" heightseq ")"
    group     := "strands" "[" [strand {"," strand}] "]" ["ambient" nat]
    strand    := "(" heightseq "," vector ")"
    protorus  := "protorus" "(" (group | NAME) ")"
    vector    := "[" [rat {"," rat}] "]"
    rat       := ["-"] nat ["/" nat]
    command   := VERB {arg | "--" NAME arg}
    arg       := NAME | rat | vector | heightseq | aseq | group | STRING
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import INF, format_rat, is_prime
from .decomp.main import ProtorusDesc
from .decomp.strands import Strand, StrandGroup
from .errors import DimensionMismatch, ParseError, SemanticError, ZeroVector
from .solenoid import CanonicalASeq, ExplicitASeq
from .typesys import HeightSequence, format_heights

KINDS = ("heightseq", "aseq", "group", "protorus")

# --- values ---------------------------------------------------------------------


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class Binding:
    name: str
    kind: str
    value: object
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Command:
    verb: str
    args: tuple = ()
    flags: tuple = ()  # sorted (name, value) pairs
    line: int = field(default=0, compare=False)

    def flag(self, name, default=None):
        return dict(self.flags).get(name, default)


@dataclass
class Script:
    bindings: list = field(default_factory=list)
    commands: list = field(default_factory=list)

    def __eq__(self, other):
        return (
            isinstance(other, Script)
            and self.bindings == other.bindings
            and self.commands == other.commands
        )

    def env(self) -> dict:
        return {b.name: b for b in self.bindings}


def kind_of(value) -> str | None:
    if isinstance(value, HeightSequence):
        return "heightseq"
    if isinstance(value, (ExplicitASeq, CanonicalASeq)):
        return "aseq"
    if isinstance(value, StrandGroup):
        return "group"
    if isinstance(value, ProtorusDesc):
        return "protorus"
    return None


# --- tokenizer ------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<flag>--[A-Za-z][A-Za-z0-9_-]*)
  | (?P<string>"[^"\n]*")
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z0-9_]+)*)
  | (?P<punct>[{}\[\]():,|=/-])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(src: str) -> list:
    toks = []
    line, line_start, depth = 1, 0, 0
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        col = pos - line_start + 1
        pos = m.end()
        if kind == "nl":
            if depth == 0:
                toks.append(Tok("nl", text, line, col))
            line += 1
            line_start = pos
            continue
        if kind in ("ws", "comment"):
            continue
        if kind == "punct":
            if text in "{[(":
                depth += 1
            elif text in "}])":
                depth = max(depth - 1, 0)
        toks.append(Tok(kind, text, line, col))
    toks.append(Tok("nl", "", line, pos - line_start + 1))
    toks.append(Tok("eof", "", line, pos - line_start + 1))
    return toks


# --- parser ---------------------------------------------------------------------


class _Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.i = 0

    # token helpers
    @property
    def cur(self) -> Tok:
        return self.toks[self.i]

    def peek(self, k=1) -> Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def err(self, msg, tok=None):
        tok = tok or self.cur
        return ParseError(msg, tok.line, tok.col)

    def sem(self, msg, tok):
        e = SemanticError(f"{msg} at line {tok.line}, column {tok.col}")
        e.line, e.column = tok.line, tok.col
        return e

    def at(self, text) -> bool:
        t = self.cur
        return t.text == text and t.kind in ("punct", "name")

    def expect(self, text) -> Tok:
        if not self.at(text):
            shown = self.cur.text or self.cur.kind
            raise self.err(f"expected {text!r}, found {shown!r}")
        t = self.cur
        self.i += 1
        return t

    def expect_kind(self, kind) -> Tok:
        if self.cur.kind != kind:
            shown = self.cur.text or self.cur.kind
            raise self.err(f"expected {kind}, found {shown!r}")
        t = self.cur
        self.i += 1
        return t

    # grammar
    def script(self) -> Script:
        s = Script()
        while self.cur.kind != "eof":
            if self.cur.kind == "nl":
                self.i += 1
                continue
            if self._is_binding():
                s.bindings.append(self.binding())
            else:
                s.commands.append(self.command())
            if self.cur.kind != "nl":
                raise self.err(f"unexpected {self.cur.text!r} at end of statement")
        return s

    def _is_binding(self) -> bool:
        t, n = self.cur, self.peek()
        if t.kind != "name":
            return False
        if n.text == "=":
            return True
        return t.text in KINDS and n.kind == "name" and self.peek(2).text == "="

    def binding(self) -> Binding:
        start = self.cur
        kind = None
        if self.peek().text != "=":
            kind = self.expect_kind("name").text
        name = self.expect_kind("name").text
        self.expect("=")
        vtok = self.cur
        value = self.value()
        vkind = kind_of(value)
        if vkind is None:  # reference to another binding; kind filled in by check
            vkind = kind
        if kind is not None and vkind != kind:
            raise self.sem(f"binding {name!r} declared {kind} but is a {vkind}", vtok)
        return Binding(name, vkind, value, start.line)

    def value(self):
        t = self.cur
        if t.text == "{":
            return self.heightseq()
        if t.kind == "name" and t.text == "aseq":
            return self.aseq()
        if t.kind == "name" and t.text == "strands":
            return self.group()
        if t.kind == "name" and t.text == "protorus":
            return self.protorus()
        if t.kind == "name":
            self.i += 1
            return Ref(t.text)
        raise self.err(f"expected a value, found {t.text!r}")

    def nat(self) -> int:
        return int(self.expect_kind("num").text)

    def extnat(self):
        if self.cur.kind == "name" and self.cur.text == "inf":
            self.i += 1
            return INF
        return self.nat()

    def heightseq(self) -> HeightSequence:
        open_tok = self.expect("{")
        exc = {}
        default = 0
        if not self.at("}") and not self.at("|"):
            while True:
                ptok = self.cur
                p = self.nat()
                if not is_prime(p):
                    raise self.sem(f"height key {p} is not prime", ptok)
                if p in exc:
                    raise self.sem(f"height key {p} repeated", ptok)
                self.expect(":")
                exc[p] = self.extnat()
                if not self.at(","):
                    break
                self.i += 1
        if self.at("|"):
            self.i += 1
            self.expect("default")
            default = self.extnat()
        self.expect("}")
        try:
            return HeightSequence(default, exc)
        except ValueError as e:
            raise self.sem(str(e), open_tok)

    def ints(self) -> tuple:
        self.expect("[")
        out = []
        if not self.at("]"):
            while True:
                out.append(self.nat())
                if not self.at(","):
                    break
                self.i += 1
        self.expect("]")
        return tuple(out)

    def aseq(self):
        start = self.expect("aseq")
        self.expect("(")
        if self.at("canonical"):
            self.i += 1
            htok = self.cur
            h = self.heightseq()
            self.expect(")")
            try:
                return CanonicalASeq(h)
            except SemanticError as e:
                raise self.sem(str(e), htok)
        self.expect("pre")
        self.expect("=")
        pre = self.ints()
        if self.at(","):
            self.i += 1
        self.expect("period")
        self.expect("=")
        period = self.ints()
        self.expect(")")
        try:
            return ExplicitASeq(pre, period)
        except SemanticError as e:
            raise self.sem(str(e), start)

    def rat(self) -> Fraction:
        neg = False
        if self.at("-"):
            neg = True
            self.i += 1
        num = self.nat()
        den = 1
        if self.at("/"):
            self.i += 1
            dtok = self.cur
            den = self.nat()
            if den == 0:
                raise self.sem("zero denominator", dtok)
        q = Fraction(num, den)
        return -q if neg else q

    def vector(self) -> tuple:
        self.expect("[")
        out = []
        if not self.at("]"):
            while True:
                out.append(self.rat())
                if not self.at(","):
                    break
                self.i += 1
        self.expect("]")
        return tuple(out)

    def group(self) -> StrandGroup:
        start = self.expect("strands")
        self.expect("[")
        strands = []
        if not self.at("]"):
            while True:
                stok = self.expect("(")
                h = self.heightseq()
                self.expect(",")
                w = self.vector()
                self.expect(")")
                try:
                    strands.append(Strand(h, w))
                except ZeroVector as e:
                    raise self.sem(str(e), stok)
                if not self.at(","):
                    break
                self.i += 1
        self.expect("]")
        ambient = None
        if self.at("ambient"):
            self.i += 1
            ambient = self.nat()
        if ambient is None and not strands:
            ambient = 0
        try:
            return StrandGroup(strands, ambient)
        except DimensionMismatch as e:
            raise self.sem(str(e), start)

    def protorus(self):
        self.expect("protorus")
        self.expect("(")
        if self.at("strands"):
            inner = ProtorusDesc(self.group())
        else:
            inner = Ref(self.expect_kind("name").text)
            inner = ("protorus-of", inner)
        self.expect(")")
        return inner

    def command(self) -> Command:
        start = self.expect_kind("name")
        args, flags = [], {}
        while self.cur.kind not in ("nl", "eof"):
            if self.cur.kind == "flag":
                ftok = self.cur
                name = ftok.text[2:]
                self.i += 1
                if name in flags:
                    raise self.sem(f"flag --{name} given twice", ftok)
                flags[name] = self.arg()
            else:
                args.append(self.arg())
        return Command(start.text, tuple(args), tuple(sorted(flags.items())), start.line)

    def arg(self):
        t = self.cur
        if t.kind == "num" or t.text == "-":
            return self.rat()
        if t.text == "[":
            return self.vector()
        if t.kind == "string":
            self.i += 1
            return t.text[1:-1]
        if t.kind in ("nl", "eof", "flag"):
            raise self.err("missing argument")
        return self.value()


def parse(src: str) -> Script:
    """Parse and semantically check a script."""
    script = _Parser(src).script()
    return check(script)


def check(script: Script) -> Script:
    """Resolve references: unique names, defined names, consistent kinds."""
    env = {}
    out = []
    for b in script.bindings:
        if b.name in env:
            raise SemanticError(f"name {b.name!r} bound twice (line {b.line})")
        value, kind = b.value, b.kind
        if isinstance(value, tuple) and value and value[0] == "protorus-of":
            target = _lookup(env, value[1].name, b.line)
            if target.kind != "group":
                raise SemanticError(f"protorus({value[1].name}) needs a group (line {b.line})")
            if kind not in (None, "protorus"):
                raise SemanticError(f"binding {b.name!r} declared {kind} but is a protorus")
            value, kind = ProtorusDesc(target.value), "protorus"
        elif isinstance(value, Ref):
            target = _lookup(env, value.name, b.line)
            if kind is not None and kind != target.kind:
                raise SemanticError(
                    f"binding {b.name!r} declared {kind} but {value.name!r} is a {target.kind}"
                )
            kind = target.kind
        nb = Binding(b.name, kind, value, b.line)
        env[b.name] = nb
        out.append(nb)
    for c in script.commands:
        for a in list(c.args) + [v for _, v in c.flags]:
            if isinstance(a, Ref):
                _lookup(env, a.name, c.line)
    return Script(out, list(script.commands))


def _lookup(env, name, line):
    if name not in env:
        raise SemanticError(f"undefined name {name!r} (line {line})")
    return env[name]


# --- pretty printer -------------------------------------------------------------


def format_vector(v) -> str:
    return "[" + ", ".join(format_rat(x) for x in v) + "]"


def format_group(g: StrandGroup) -> str:
    body = ", ".join(f"({format_heights(s.coeff)}, {format_vector(s.w)})" for s in g.strands)
    out = f"strands [{body}]"
    if not g.strands:
        out += f" ambient {g.ambient}"
    return out


def format_value(v) -> str:
    if isinstance(v, Ref):
        return v.name
    if isinstance(v, HeightSequence):
        return format_heights(v)
    if isinstance(v, (ExplicitASeq, CanonicalASeq)):
        return str(v)
    if isinstance(v, StrandGroup):
        return format_group(v)
    if isinstance(v, ProtorusDesc):
        return f"protorus({format_group(v.dual)})"
    if isinstance(v, str):
        return f'"{v}"'
    if isinstance(v, tuple):
        return format_vector(v)
    if isinstance(v, (int, Fraction)):
        return format_rat(v)
    raise TypeError(f"cannot format {v!r}")


def pretty(script: Script) -> str:
    lines = [f"{b.kind} {b.name} = {format_value(b.value)}" for b in script.bindings]
    for c in script.commands:
        parts = [c.verb] + [format_value(a) for a in c.args]
        parts += [f"--{k} {format_value(v)}" for k, v in c.flags]
        lines.append(" ".join(parts))
    return "\n".join(lines) + ("\n" if lines else "")


__all__ = [
    "Binding",
    "Command",
    "Ref",
    "Script",
    "check",
    "format_group",
    "format_value",
    "format_vector",
    "kind_of",
    "parse",
    "pretty",
    "tokenize",
]
