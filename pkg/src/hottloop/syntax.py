"""Lexer and parser for the ``.hott`` surface language.

The concrete syntax is ASCII only::

    module   := decl*
    decl     := "def" IDENT ":" term ":=" term ";"
    term     := "\\" IDENT "." term
              | "(" IDENT ":" term ")" ("->" | "**") term
              | prod ["->" term]
    prod     := binop ["**" prod]
    binop    := unary ("*" unary)*
    unary    := "!" unary | atom atom*
    atom     := IDENT | KEYWORD | "<" term "," term ">" | "(" term ")"

Comments run from ``--`` to the end of the line.
"""
from __future__ import annotations

from dataclasses import dataclass, field

KEYWORDS = frozenset({
    "U0", "U1", "Nat", "zero", "succ", "natrec", "Unit", "tt", "Void", "abort",
    "S1", "base", "loop", "S1rec", "S1ind", "Id", "refl", "J", "Sum", "inl", "inr",
    "case", "fst", "snd", "coe", "ap", "ua",
})
RESERVED = KEYWORDS | {"def"}

_SYMBOLS = [":=", "->", "**", ":", ";", "\\", ".", "(", ")", "*", "!", "<", ">", ","]


@dataclass(frozen=True)
class Span:
    file: str
    line: int
    col: int
    start: int
    end: int

    @property
    def length(self) -> int:
        return self.end - self.start

    def to(self, other: "Span") -> "Span":
        return Span(self.file, self.line, self.col, self.start, max(self.end, other.end))

    def contains(self, other: "Span") -> bool:
        return self.start <= other.start and other.end <= self.end


@dataclass
class Diagnostic:
    severity: str
    file: str
    line: int
    col: int
    message: str
    expected: str | None = None
    actual: str | None = None

    def __post_init__(self):
        assert self.line >= 1 and self.col >= 1 and self.message

    def format(self) -> str:
        out = f"{self.file}:{self.line}:{self.col}: {self.severity}: {self.message}"
        if self.expected is not None:
            out += f"\n    expected: {self.expected}"
        if self.actual is not None:
            out += f"\n    actual:   {self.actual}"
        return out

    @classmethod
    def at(cls, span: Span, message: str, **kw) -> "Diagnostic":
        return cls("error", span.file, span.line, span.col, message, **kw)


class ParseError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.format())
        self.diagnostic = diagnostic


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "kw", "def", "num", "sym" or "eof"
    text: str
    span: Span

    def __repr__(self):
        return f"[{self.text}]" if self.kind != "eof" else "[eof]"


# ---------------------------------------------------------------------------
# raw terms


@dataclass(frozen=True)
class RawTerm:
    span: Span = field(compare=False, repr=False)


@dataclass(frozen=True)
class RVar(RawTerm):
    name: str = ""


@dataclass(frozen=True)
class RKw(RawTerm):
    kw: str = ""


@dataclass(frozen=True)
class RApp(RawTerm):
    fun: RawTerm = None
    arg: RawTerm = None


@dataclass(frozen=True)
class RLam(RawTerm):
    name: str = ""
    body: RawTerm = None


@dataclass(frozen=True)
class RPi(RawTerm):
    name: str | None = None
    dom: RawTerm = None
    cod: RawTerm = None


@dataclass(frozen=True)
class RSigma(RawTerm):
    name: str | None = None
    dom: RawTerm = None
    cod: RawTerm = None


@dataclass(frozen=True)
class RPair(RawTerm):
    fst: RawTerm = None
    snd: RawTerm = None


@dataclass(frozen=True)
class RInv(RawTerm):
    p: RawTerm = None


@dataclass(frozen=True)
class RConcat(RawTerm):
    p: RawTerm = None
    q: RawTerm = None


@dataclass(frozen=True)
class Decl:
    name: str
    declared_type: RawTerm
    body: RawTerm
    span: Span = field(compare=False, repr=False)
    name_span: Span = field(compare=False, repr=False, default=None)


def spine(t: RawTerm) -> tuple[RawTerm, list[RawTerm]]:
    """Split an application into its head and argument list."""
    args = []
    while isinstance(t, RApp):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def raw_children(t: RawTerm) -> list[RawTerm]:
    match t:
        case RApp(_, f, a):
            return [f, a]
        case RLam(_, _, b):
            return [b]
        case RPi(_, _, d, b) | RSigma(_, _, d, b):
            return [d, b]
        case RPair(_, a, b) | RConcat(_, a, b):
            return [a, b]
        case RInv(_, p):
            return [p]
    return []


# ---------------------------------------------------------------------------
# lexer


def tokenize(text: str, file: str = "<input>") -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def span(start, end, ln, cl):
        return Span(file, ln, cl, start, end)

    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isascii() and (ch.isalpha() or ch == "_"):
            j = i + 1
            while j < n and text[j].isascii() and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            word = text[i:j]
            kind = "def" if word == "def" else "kw" if word in KEYWORDS else "ident"
            toks.append(Token(kind, word, span(i, j, line, col)))
            col += j - i
            i = j
            continue
        if ch.isascii() and ch.isdigit():
            j = i + 1
            while j < n and text[j].isascii() and text[j].isdigit():
                j += 1
            toks.append(Token("num", text[i:j], span(i, j, line, col)))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append(Token("sym", sym, span(i, i + len(sym), line, col)))
                i += len(sym)
                col += len(sym)
                break
        else:
            shown = ch if ch.isprintable() else repr(ch)
            raise ParseError(Diagnostic("error", file, line, col, f"illegal character {shown!r}"))
    toks.append(Token("eof", "", span(n, n, line, col)))
    return toks


# ---------------------------------------------------------------------------
# parser


def _describe(tok: Token) -> str:
    return "end of input" if tok.kind == "eof" else f"'{tok.text}'"


class Parser:
    def __init__(self, text: str, file: str = "<input>"):
        self.toks = tokenize(text, file)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def is_sym(self, s: str, tok: Token | None = None) -> bool:
        tok = tok or self.tok
        return tok.kind == "sym" and tok.text == s

    def fail(self, expected: list[str]):
        exp = " or ".join(expected)
        raise ParseError(Diagnostic.at(self.tok.span, f"expected {exp}, found {_describe(self.tok)}"))

    def expect_sym(self, s: str) -> Token:
        if not self.is_sym(s):
            self.fail([f"'{s}'"])
        return self.advance()

    def expect_ident(self) -> Token:
        if self.tok.kind != "ident":
            self.fail(["identifier"])
        return self.advance()

    # -- grammar -------------------------------------------------------------

    def module(self) -> list[Decl]:
        decls = []
        while self.tok.kind != "eof":
            decls.append(self.decl())
        return decls

    def decl(self) -> Decl:
        if self.tok.kind != "def":
            self.fail(["'def'"])
        start = self.advance().span
        name = self.expect_ident()
        self.expect_sym(":")
        ty = self.term()
        self.expect_sym(":=")
        body = self.term()
        end = self.expect_sym(";").span
        return Decl(name.text, ty, body, start.to(end), name.span)

    def starts_binder(self) -> bool:
        return (self.is_sym("(") and self.peek().kind == "ident"
                and self.is_sym(":", self.peek(2)))

    def term(self) -> RawTerm:
        tok = self.tok
        if self.is_sym("\\"):
            self.advance()
            name = self.expect_ident()
            self.expect_sym(".")
            body = self.term()
            return RLam(tok.span.to(body.span), name.text, body)
        if self.starts_binder():
            return self.binder()
        lhs = self.prod()
        if self.is_sym("->"):
            self.advance()
            rhs = self.term()
            return RPi(lhs.span.to(rhs.span), None, lhs, rhs)
        return lhs

    def binder(self) -> RawTerm:
        start = self.advance().span
        name = self.expect_ident().text
        self.expect_sym(":")
        dom = self.term()
        self.expect_sym(")")
        if self.is_sym("->"):
            self.advance()
            cod = self.term()
            return RPi(start.to(cod.span), name, dom, cod)
        if self.is_sym("**"):
            self.advance()
            cod = self.term()
            return RSigma(start.to(cod.span), name, dom, cod)
        self.fail(["'->'", "'**'"])

    def prod(self) -> RawTerm:
        lhs = self.binop()
        if self.is_sym("**"):
            self.advance()
            rhs = self.binder() if self.starts_binder() else self.prod()
            return RSigma(lhs.span.to(rhs.span), None, lhs, rhs)
        return lhs

    def binop(self) -> RawTerm:
        lhs = self.unary()
        while self.is_sym("*"):
            self.advance()
            rhs = self.unary()
            lhs = RConcat(lhs.span.to(rhs.span), lhs, rhs)
        return lhs

    def unary(self) -> RawTerm:
        if self.is_sym("!"):
            start = self.advance().span
            p = self.unary()
            return RInv(start.to(p.span), p)
        head = self.atom()
        while self.starts_atom():
            arg = self.atom()
            head = RApp(head.span.to(arg.span), head, arg)
        return head

    def starts_atom(self) -> bool:
        t = self.tok
        return t.kind in ("ident", "kw") or (t.kind == "sym" and t.text in ("(", "<"))

    def atom(self) -> RawTerm:
        t = self.tok
        if t.kind == "ident":
            self.advance()
            return RVar(t.span, t.text)
        if t.kind == "kw":
            self.advance()
            return RKw(t.span, t.text)
        if self.is_sym("<"):
            self.advance()
            a = self.term()
            self.expect_sym(",")
            b = self.term()
            end = self.expect_sym(">").span
            return RPair(t.span.to(end), a, b)
        if self.is_sym("("):
            self.advance()
            inner = self.term()
            self.expect_sym(")")
            return inner
        self.fail(["a term"])


def parse_module(text: str, file: str = "<input>") -> list[Decl]:
    return Parser(text, file).module()


def parse_term(text: str, file: str = "<input>") -> RawTerm:
    p = Parser(text, file)
    t = p.term()
    if p.tok.kind != "eof":
        p.fail(["end of input"])
    return t
