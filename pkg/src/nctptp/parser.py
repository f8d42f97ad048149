"""Tokenizer and recursive-descent parser for FOF/TFF/TXF/THF files with the
non-classical TXN/THN extensions: long-form connectives `{$name(...)}`, the
short forms `[.]`, `<.>`, `/.\\` and their `#`-indexed variants, and logic
specification units (role `logic`).

The parser uses one token of lookahead.  Binary connectives do not associate
across different operators: `a & b | c` is a parse error, while `a & b & c`
is accepted for the associative `&` and `|`.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from typing import Callable, Optional

from .syntax import (
    AnnotatedFormula,
    Appl,
    Apply,
    BaseRole,
    BaseType,
    Binary,
    Binding,
    Bool,
    CurriedType,
    DistinctObj,
    Eq,
    Ite,
    Lam,
    Language,
    Let,
    ListItem,
    ListValue,
    LogicProperty,
    LogicSpec,
    MappingType,
    NcApply,
    NcConnective,
    Node,
    Not,
    NumberLit,
    PairItem,
    PlainItem,
    PlainValue,
    Pos,
    Problem,
    PropValue,
    Quant,
    Role,
    Subrole,
    Surface,
    TupleTerm,
    Type,
    TypeDecl,
    Var,
)


class ParseError(Exception):
    """Syntax error with a position inside the input."""

    def __init__(self, message: str, pos: Pos, found: str = "",
                 expected: str = "", filename: str = "<input>"):
        self.message = message
        self.pos = pos
        self.found = found
        self.expected = expected
        self.filename = filename
        super().__init__(str(self))

    def __str__(self) -> str:
        line, col = self.pos
        detail = self.message
        if self.expected:
            detail += f" (expected {self.expected}"
            if self.found:
                detail += f", found {self.found!r}"
            detail += ")"
        elif self.found:
            detail += f" (found {self.found!r})"
        return f"{self.filename}:{line}:{col}: {detail}"

    def diagnostic(self) -> str:
        line, col = self.pos
        return f"{self.filename}:{line}:{col}: PARSE: {self.message}"


class Tok(enum.Enum):
    LOWER = "lower word"
    UPPER = "upper word"
    SQUOTED = "quoted atom"
    DOLLAR = "defined symbol"
    DDOLLAR = "system symbol"
    INT = "integer"
    RAT = "rational"
    REAL = "real"
    DQUOTED = "distinct object"
    LPAREN = "("
    RPAREN = ")"
    LBRACKET = "["
    RBRACKET = "]"
    LBRACE = "{"
    RBRACE = "}"
    COMMA = ","
    DOT = "."
    COLON = ":"
    ASSIGN = ":="
    IDENTICAL = "=="
    EQUAL = "="
    NEQ = "!="
    ARROW = ">"
    STAR = "*"
    AMP = "&"
    VLINE = "|"
    TILDE = "~"
    BANG = "!"
    QUESTION = "?"
    CARET = "^"
    AT = "@"
    IMPLIES = "=>"
    IMPLIED = "<="
    IFF = "<=>"
    XOR = "<~>"
    DASH = "-"
    HASH = "#"
    BACKSLASH = "\\"
    BOXDOT = "[.]"
    DIADOT = "<.>"
    SLASHDOT = "/.\\"
    LBHASH = "[#"
    LAHASH = "<#"
    LSHASH = "/#"
    EOF = "end of input"


BINOP_TOKENS = {
    Tok.AMP: "&",
    Tok.VLINE: "|",
    Tok.IMPLIES: "=>",
    Tok.IMPLIED: "<=",
    Tok.IFF: "<=>",
    Tok.XOR: "<~>",
}


@dataclass(frozen=True)
class Token:
    kind: Tok
    lexeme: str
    pos: Pos
    start: int  # byte offsets into the input, for verbatim slices
    end: int


_LOWER = set("abcdefghijklmnopqrstuvwxyz")
_UPPER = set("ABCDEFGHIJKLMNOPQRSTUVWXYZ")
_DIGIT = set("0123456789")
_ALNUM = _LOWER | _UPPER | _DIGIT | {"_"}


def tokenize(text: str, filename: str = "<input>") -> list[Token]:
    """Lex the input; comments produce no tokens, every token has a position."""
    toks: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(text)

    def err(msg: str, pos: Pos) -> ParseError:
        return ParseError(msg, pos, filename=filename)

    def advance(k: int = 1) -> None:
        nonlocal i, line, col
        for _ in range(k):
            if i < n and text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    def emit(kind: Tok, start: int, pos: Pos) -> None:
        toks.append(Token(kind, text[start:i], pos, start, i))

    while i < n:
        c = text[i]
        pos = (line, col)
        start = i
        if c in " \t\r\n":
            advance()
            continue
        if c == "%":
            while i < n and text[i] != "\n":
                advance()
            continue
        if c == "/" and i + 1 < n and text[i + 1] == "*":
            advance(2)
            while i < n and not (text[i] == "*" and i + 1 < n and text[i + 1] == "/"):
                advance()
            if i >= n:
                raise err("unterminated block comment", pos)
            advance(2)
            continue
        if c in _LOWER:
            advance()
            while i < n and text[i] in _ALNUM:
                advance()
            emit(Tok.LOWER, start, pos)
            continue
        if c in _UPPER:
            advance()
            while i < n and text[i] in _ALNUM:
                advance()
            emit(Tok.UPPER, start, pos)
            continue
        if c in _DIGIT or (c in "+-" and i + 1 < n and text[i + 1] in _DIGIT):
            kind = _scan_number(text, i, lambda k: advance(k))
            emit(kind, start, pos)
            continue
        if c == "$":
            advance()
            dollars = 1
            if i < n and text[i] == "$":
                advance()
                dollars = 2
            if i >= n or text[i] not in _LOWER:
                raise err("expected lower-case word after '$'", pos)
            while i < n and text[i] in _ALNUM:
                advance()
            emit(Tok.DDOLLAR if dollars == 2 else Tok.DOLLAR, start, pos)
            continue
        if c == "'":
            content = _scan_quoted(text, i, "'", pos, err)
            advance(content[1])
            toks.append(Token(Tok.SQUOTED, content[0], pos, start, i))
            continue
        if c == '"':
            content = _scan_quoted(text, i, '"', pos, err)
            advance(content[1])
            toks.append(Token(Tok.DQUOTED, content[0], pos, start, i))
            continue
        two = text[i:i + 2]
        three = text[i:i + 3]
        if three == "<=>":
            advance(3)
            emit(Tok.IFF, start, pos)
        elif three == "<~>":
            advance(3)
            emit(Tok.XOR, start, pos)
        elif three == "<.>":
            advance(3)
            emit(Tok.DIADOT, start, pos)
        elif three == "[.]":
            advance(3)
            emit(Tok.BOXDOT, start, pos)
        elif three == "/.\\":
            advance(3)
            emit(Tok.SLASHDOT, start, pos)
        elif two == "<=":
            advance(2)
            emit(Tok.IMPLIED, start, pos)
        elif two == "<#":
            advance(2)
            emit(Tok.LAHASH, start, pos)
        elif two == "[#":
            advance(2)
            emit(Tok.LBHASH, start, pos)
        elif two == "/#":
            advance(2)
            emit(Tok.LSHASH, start, pos)
        elif two == "=>":
            advance(2)
            emit(Tok.IMPLIES, start, pos)
        elif two == "==":
            advance(2)
            emit(Tok.IDENTICAL, start, pos)
        elif two == "!=":
            advance(2)
            emit(Tok.NEQ, start, pos)
        elif two == ":=":
            advance(2)
            emit(Tok.ASSIGN, start, pos)
        else:
            single = {
                "(": Tok.LPAREN, ")": Tok.RPAREN, "[": Tok.LBRACKET,
                "]": Tok.RBRACKET, "{": Tok.LBRACE, "}": Tok.RBRACE,
                ",": Tok.COMMA, ".": Tok.DOT, ":": Tok.COLON, ">": Tok.ARROW,
                "*": Tok.STAR, "&": Tok.AMP, "|": Tok.VLINE, "~": Tok.TILDE,
                "!": Tok.BANG, "?": Tok.QUESTION, "^": Tok.CARET,
                "@": Tok.AT, "=": Tok.EQUAL, "-": Tok.DASH, "#": Tok.HASH,
                "\\": Tok.BACKSLASH,
            }
            if c in single:
                advance()
                emit(single[c], start, pos)
            else:
                raise err(f"illegal character {c!r}", pos)
    toks.append(Token(Tok.EOF, "", (line, col), n, n))
    return toks


def _scan_number(text: str, i: int, advance: Callable[[int], None]) -> Tok:
    n = len(text)
    j = i
    if text[j] in "+-":
        j += 1
    while j < n and text[j] in _DIGIT:
        j += 1
    kind = Tok.INT
    if j < n and text[j] == "/" and j + 1 < n and text[j + 1] in _DIGIT:
        j += 1
        while j < n and text[j] in _DIGIT:
            j += 1
        kind = Tok.RAT
    elif j < n and text[j] == "." and j + 1 < n and text[j + 1] in _DIGIT:
        j += 1
        while j < n and text[j] in _DIGIT:
            j += 1
        kind = Tok.REAL
        if j < n and text[j] in "Ee":
            j = _scan_exponent(text, j)
    elif j < n and text[j] in "Ee" and _has_exponent(text, j):
        j = _scan_exponent(text, j)
        kind = Tok.REAL
    advance(j - i)
    return kind


def _has_exponent(text: str, j: int) -> bool:
    k = j + 1
    if k < len(text) and text[k] in "+-":
        k += 1
    return k < len(text) and text[k] in _DIGIT


def _scan_exponent(text: str, j: int) -> int:
    if not _has_exponent(text, j):
        return j
    j += 1
    if text[j] in "+-":
        j += 1
    while j < len(text) and text[j] in _DIGIT:
        j += 1
    return j


def _scan_quoted(text: str, i: int, quote: str, pos: Pos, err) -> tuple[str, int]:
    """Return (unescaped content, consumed length) for a quoted token."""
    j = i + 1
    out: list[str] = []
    n = len(text)
    while j < n:
        c = text[j]
        if c == "\\" and j + 1 < n and text[j + 1] in ("\\", quote):
            out.append(text[j + 1])
            j += 2
        elif c == quote:
            return "".join(out), j + 1 - i
        elif c == "\n":
            break
        else:
            out.append(c)
            j += 1
    raise err(f"unterminated {quote}...{quote} token", pos)


ROLE_BY_NAME = {r.value: r for r in BaseRole}
SUBROLE_BY_NAME = {s.value: s for s in Subrole}
UNIT_LANGUAGES = {"fof": Language.TFF, "cnf": Language.TFF,
                  "tff": Language.TFF, "thf": Language.THF}

IncludeResolver = Callable[[str, list[str] | None], Problem]


class Parser:
    def __init__(self, text: str, filename: str = "<input>",
                 include_resolver: Optional[IncludeResolver] = None):
        self.text = text
        self.filename = filename
        self.toks = tokenize(text, filename)
        self.i = 0
        self.include_resolver = include_resolver

    # -- token plumbing

    def peek(self, ahead: int = 0) -> Token:
        j = min(self.i + ahead, len(self.toks) - 1)
        return self.toks[j]

    def next(self) -> Token:
        tok = self.toks[self.i]
        if tok.kind is not Tok.EOF:
            self.i += 1
        return tok

    def at(self, kind: Tok) -> bool:
        return self.peek().kind is kind

    def accept(self, kind: Tok) -> Optional[Token]:
        if self.at(kind):
            return self.next()
        return None

    def expect(self, kind: Tok, context: str = "") -> Token:
        tok = self.peek()
        if tok.kind is not kind:
            raise self.error(f"unexpected token{' in ' + context if context else ''}",
                             expected=kind.value, tok=tok)
        return self.next()

    def error(self, message: str, expected: str = "", tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.peek()
        found = tok.lexeme if tok.kind is not Tok.EOF else "end of input"
        return ParseError(message, tok.pos, found=found, expected=expected,
                          filename=self.filename)

    # -- top level

    def parse_problem(self) -> Problem:
        units: Problem = []
        while not self.at(Tok.EOF):
            tok = self.peek()
            if tok.kind is Tok.LOWER and tok.lexeme == "include":
                units.extend(self.parse_include())
            elif tok.kind is Tok.LOWER and tok.lexeme in UNIT_LANGUAGES:
                units.append(self.parse_unit())
            else:
                raise self.error("expected an annotated formula or include directive",
                                 expected="tff/thf/fof/cnf/include")
        return units

    def parse_include(self) -> Problem:
        kw = self.next()
        self.expect(Tok.LPAREN, "include")
        path = self.expect(Tok.SQUOTED, "include").lexeme
        names: Optional[list[str]] = None
        if self.accept(Tok.COMMA):
            self.expect(Tok.LBRACKET, "include selection")
            names = []
            while True:
                tok = self.peek()
                if tok.kind in (Tok.LOWER, Tok.SQUOTED):
                    names.append(self.next().lexeme)
                else:
                    raise self.error("expected unit name in include selection")
                if not self.accept(Tok.COMMA):
                    break
            self.expect(Tok.RBRACKET, "include selection")
        self.expect(Tok.RPAREN, "include")
        self.expect(Tok.DOT, "include")
        if self.include_resolver is None:
            raise ParseError("include directive outside file context", kw.pos,
                             filename=self.filename)
        return self.include_resolver(path, names)

    def parse_unit(self) -> AnnotatedFormula:
        lang_tok = self.next()
        language = UNIT_LANGUAGES[lang_tok.lexeme]
        self.expect(Tok.LPAREN, "annotated formula")
        name_tok = self.peek()
        if name_tok.kind not in (Tok.LOWER, Tok.SQUOTED):
            raise self.error("unit name must be a lower word or quoted atom")
        name = self.next().lexeme
        if not name:
            raise ParseError("unit name must be non-empty", name_tok.pos,
                             filename=self.filename)
        self.expect(Tok.COMMA, "annotated formula")
        role = self.parse_role()
        self.expect(Tok.COMMA, "annotated formula")
        if role.base is BaseRole.TYPE:
            payload = self.parse_type_decl(language)
        elif role.base is BaseRole.LOGIC:
            payload = self.parse_logic_spec()
        elif language is Language.THF:
            payload = self.thf_formula()
        else:
            payload = self.tff_formula()
        source = useful = None
        if self.accept(Tok.COMMA):
            source = self.capture_general_term()
            if self.accept(Tok.COMMA):
                useful = self.capture_general_term()
        self.expect(Tok.RPAREN, "annotated formula")
        end_tok = self.expect(Tok.DOT, "annotated formula")
        raw = self.text[lang_tok.start:end_tok.end]
        return AnnotatedFormula(language, name, role, payload, source=source,
                                useful_info=useful, pos=lang_tok.pos, raw=raw)

    def parse_role(self) -> Role:
        tok = self.expect(Tok.LOWER, "formula role")
        base = ROLE_BY_NAME.get(tok.lexeme)
        if base is None:
            raise ParseError(f"unknown formula role '{tok.lexeme}'", tok.pos,
                             filename=self.filename)
        subrole = None
        if self.at(Tok.DASH):
            self.next()
            sub_tok = self.expect(Tok.LOWER, "formula subrole")
            subrole = SUBROLE_BY_NAME.get(sub_tok.lexeme)
            if subrole is None:
                raise ParseError(f"unknown subrole '{sub_tok.lexeme}'", sub_tok.pos,
                                 filename=self.filename)
        role = Role(base, subrole)
        if subrole is not None and not role.allows_subrole():
            raise ParseError(f"role '{base.value}' does not admit a subrole",
                             tok.pos, filename=self.filename)
        return role

    def capture_general_term(self) -> str:
        """Consume one annotation term, returning its verbatim source text."""
        depth = 0
        start_tok = self.peek()
        last = start_tok
        while True:
            tok = self.peek()
            if tok.kind is Tok.EOF:
                raise self.error("unterminated annotation")
            if depth == 0 and tok.kind in (Tok.COMMA, Tok.RPAREN):
                break
            if tok.kind in (Tok.LPAREN, Tok.LBRACKET):
                depth += 1
            elif tok.kind in (Tok.RPAREN, Tok.RBRACKET):
                depth -= 1
            last = self.next()
        if last is start_tok and start_tok.kind in (Tok.COMMA, Tok.RPAREN):
            raise self.error("empty annotation")
        return self.text[start_tok.start:last.end]

    # -- types

    def parse_type_decl(self, language: Language) -> TypeDecl:
        wrapped = bool(self.accept(Tok.LPAREN))
        sym_tok = self.peek()
        if sym_tok.kind not in (Tok.LOWER, Tok.SQUOTED, Tok.DOLLAR, Tok.DDOLLAR):
            raise self.error("expected a symbol in type declaration")
        self.next()
        self.expect(Tok.COLON, "type declaration")
        typ = self.parse_type(language)
        if wrapped:
            self.expect(Tok.RPAREN, "type declaration")
        return TypeDecl(sym_tok.lexeme, typ)

    def parse_type(self, language: Language) -> Type:
        if language is Language.THF:
            return self.parse_thf_type()
        return self.parse_tff_type()

    def parse_thf_type(self) -> Type:
        left = self.parse_thf_type_atom()
        if self.accept(Tok.ARROW):
            return CurriedType(left, self.parse_thf_type())
        return left

    def parse_thf_type_atom(self) -> Type:
        if self.accept(Tok.LPAREN):
            inner = self.parse_thf_type()
            self.expect(Tok.RPAREN, "type")
            return inner
        return BaseType(self.parse_type_name())

    def parse_tff_type(self) -> Type:
        if self.at(Tok.LPAREN):
            self.next()
            args = [self.parse_tff_type_atom()]
            while self.accept(Tok.STAR):
                args.append(self.parse_tff_type_atom())
            self.expect(Tok.RPAREN, "type")
            self.expect(Tok.ARROW, "type")
            return MappingType(tuple(args), self.parse_tff_type_atom())
        first = self.parse_tff_type_atom()
        if self.accept(Tok.ARROW):
            return MappingType((first,), self.parse_tff_type_atom())
        return first

    def parse_tff_type_atom(self) -> Type:
        return BaseType(self.parse_type_name())

    def parse_type_name(self) -> str:
        tok = self.peek()
        if tok.kind in (Tok.LOWER, Tok.SQUOTED, Tok.DOLLAR, Tok.DDOLLAR):
            return self.next().lexeme
        raise self.error("expected a type name")

    # -- logic specifications

    def parse_logic_spec(self) -> LogicSpec:
        name_tok = self.peek()
        if name_tok.kind not in (Tok.DOLLAR, Tok.DDOLLAR):
            raise self.error("logic name must be a defined or system symbol")
        self.next()
        self.expect(Tok.IDENTICAL, "logic specification")
        if self.at(Tok.LBRACKET):
            self.next()
            props = [self.parse_logic_property()]
            while self.accept(Tok.COMMA):
                props.append(self.parse_logic_property())
            self.expect(Tok.RBRACKET, "logic specification")
            return LogicSpec(name_tok.lexeme, tuple(props), pos=name_tok.pos)
        value = self.parse_tight_term()
        return LogicSpec(name_tok.lexeme, (), pos=name_tok.pos, bare_value=value)

    def parse_logic_property(self) -> LogicProperty:
        key_tok = self.peek()
        if key_tok.kind not in (Tok.DOLLAR, Tok.DDOLLAR):
            raise self.error("property name must be a defined or system symbol")
        self.next()
        self.expect(Tok.IDENTICAL, "logic property")
        return LogicProperty(key_tok.lexeme, self.parse_prop_value(),
                             pos=key_tok.pos)

    def parse_prop_value(self) -> PropValue:
        if self.at(Tok.LBRACKET):
            self.next()
            items = [self.parse_list_item()]
            while self.accept(Tok.COMMA):
                items.append(self.parse_list_item())
            self.expect(Tok.RBRACKET, "property value")
            return ListValue(tuple(items))
        return PlainValue(self.parse_tight_term())

    def parse_list_item(self) -> ListItem:
        tok = self.peek()
        if tok.kind is Tok.LBHASH:
            self.next()
            index = self.parse_tight_term()
            self.expect(Tok.RBRACKET, "index key")
            self.expect(Tok.IDENTICAL, "index key")
            return PairItem(index, self.parse_prop_value(), key_is_index=True,
                            pos=tok.pos)
        if tok.kind is Tok.LBRACKET:
            return PlainItem(self.parse_prop_value())
        key = self.parse_tight_term()
        if self.accept(Tok.IDENTICAL):
            return PairItem(key, self.parse_prop_value(), pos=tok.pos)
        return PlainItem(PlainValue(key))

    # -- shared formula pieces

    def parse_nc_connective(self) -> NcConnective:
        tok = self.peek()
        if tok.kind is Tok.BOXDOT:
            self.next()
            return NcConnective(None, surface=Surface.BOX, pos=tok.pos)
        if tok.kind is Tok.DIADOT:
            self.next()
            return NcConnective(None, surface=Surface.DIAMOND, pos=tok.pos)
        if tok.kind is Tok.SLASHDOT:
            self.next()
            return NcConnective(None, surface=Surface.SLASH, pos=tok.pos)
        if tok.kind is Tok.LBHASH:
            self.next()
            index = self.parse_tight_term()
            self.expect(Tok.RBRACKET, "indexed short form")
            return NcConnective(None, index=index, surface=Surface.BOX, pos=tok.pos)
        if tok.kind is Tok.LAHASH:
            self.next()
            index = self.parse_tight_term()
            self.expect(Tok.ARROW, "indexed short form")
            return NcConnective(None, index=index, surface=Surface.DIAMOND, pos=tok.pos)
        if tok.kind is Tok.LSHASH:
            self.next()
            index = self.parse_tight_term()
            self.expect(Tok.BACKSLASH, "indexed short form")
            return NcConnective(None, index=index, surface=Surface.SLASH, pos=tok.pos)
        assert tok.kind is Tok.LBRACE
        self.next()
        name_tok = self.peek()
        if name_tok.kind not in (Tok.DOLLAR, Tok.DDOLLAR):
            raise self.error("connective name must be a defined or system symbol")
        self.next()
        index: Optional[Node] = None
        params: list[tuple[str, Node]] = []
        if self.accept(Tok.LPAREN):
            first = True
            while True:
                if self.accept(Tok.HASH):
                    if not first or index is not None:
                        raise self.error("connective index must be the first parameter")
                    index = self.parse_tight_term()
                else:
                    key_tok = self.peek()
                    if key_tok.kind not in (Tok.DOLLAR, Tok.DDOLLAR):
                        raise self.error(
                            "connective parameter must be '#index' or a key-value pair")
                    self.next()
                    self.expect(Tok.ASSIGN, "key-value parameter")
                    params.append((key_tok.lexeme, self.parse_tight_term()))
                first = False
                if not self.accept(Tok.COMMA):
                    break
            self.expect(Tok.RPAREN, "connective parameters")
        self.expect(Tok.RBRACE, "connective")
        return NcConnective(name_tok.lexeme, index=index, params=tuple(params),
                            pos=name_tok.pos)

    def parse_tight_term(self) -> Node:
        """Unitary term: constant, variable, number, functor(args), or tuple."""
        tok = self.peek()
        if tok.kind in (Tok.INT, Tok.RAT, Tok.REAL):
            self.next()
            return NumberLit(tok.kind.name.lower(), tok.lexeme)
        if tok.kind is Tok.DQUOTED:
            self.next()
            return DistinctObj(tok.lexeme)
        if tok.kind is Tok.UPPER:
            self.next()
            return Var(tok.lexeme)
        if tok.kind is Tok.LBRACKET:
            self.next()
            items = []
            if not self.at(Tok.RBRACKET):
                items.append(self.parse_tight_term())
                while self.accept(Tok.COMMA):
                    items.append(self.parse_tight_term())
            self.expect(Tok.RBRACKET, "tuple")
            return TupleTerm(tuple(items))
        if tok.kind in (Tok.LOWER, Tok.SQUOTED, Tok.DOLLAR, Tok.DDOLLAR):
            self.next()
            args: list[Node] = []
            if self.accept(Tok.LPAREN):
                args.append(self.parse_tight_term())
                while self.accept(Tok.COMMA):
                    args.append(self.parse_tight_term())
                self.expect(Tok.RPAREN, "arguments")
            if tok.lexeme == "$true":
                return Bool(True)
            if tok.lexeme == "$false":
                return Bool(False)
            return Appl(tok.lexeme, tuple(args))
        raise self.error("expected a term")

    def parse_bindings(self, language: Language) -> tuple[Binding, ...]:
        self.expect(Tok.LBRACKET, "variable list")
        bindings: list[Binding] = []
        while True:
            var_tok = self.expect(Tok.UPPER, "variable list")
            typ: Optional[Type] = None
            if self.accept(Tok.COLON):
                typ = self.parse_type(language)
            bindings.append((var_tok.lexeme, typ))
            if not self.accept(Tok.COMMA):
                break
        self.expect(Tok.RBRACKET, "variable list")
        return tuple(bindings)

    # -- TFF formulas

    def tff_formula(self) -> Node:
        left = self.tff_unit()
        tok = self.peek()
        if tok.kind not in BINOP_TOKENS:
            return left
        op = BINOP_TOKENS[self.next().kind]
        node = Binary(op, left, self.tff_unit())
        while self.peek().kind in BINOP_TOKENS:
            next_op = BINOP_TOKENS[self.peek().kind]
            if next_op != op or op not in ("&", "|"):
                raise self.error(
                    f"'{op}' and '{next_op}' do not associate; use parentheses")
            self.next()
            node = Binary(op, node, self.tff_unit())
        return node

    def tff_unit(self, allow_eq: bool = True) -> Node:
        tok = self.peek()
        if tok.kind is Tok.TILDE:
            self.next()
            return Not(self.tff_unit())
        if tok.kind in (Tok.BANG, Tok.QUESTION):
            self.next()
            bindings = self.parse_bindings(Language.TFF)
            self.expect(Tok.COLON, "quantified formula")
            return Quant(tok.lexeme, bindings, self.tff_unit())
        if tok.kind in (Tok.LBRACE, Tok.BOXDOT, Tok.DIADOT, Tok.SLASHDOT,
                        Tok.LBHASH, Tok.LAHASH, Tok.LSHASH):
            conn = self.parse_nc_connective()
            self.expect(Tok.LPAREN, "connective application")
            args = [self.tff_formula()]
            while self.accept(Tok.COMMA):
                args.append(self.tff_formula())
            self.expect(Tok.RPAREN, "connective application")
            return self.maybe_eq(NcApply(conn, tuple(args)), allow_eq)
        if tok.kind is Tok.LPAREN:
            self.next()
            inner = self.tff_formula()
            self.expect(Tok.RPAREN, "formula")
            return self.maybe_eq(inner, allow_eq)
        node = self.tff_atomic()
        return self.maybe_eq(node, allow_eq)

    def maybe_eq(self, node: Node, allow_eq: bool) -> Node:
        tok = self.peek()
        if allow_eq and tok.kind in (Tok.EQUAL, Tok.NEQ):
            self.next()
            rhs = self.tff_unit(allow_eq=False)
            return Eq(node, rhs, negated=tok.kind is Tok.NEQ)
        return node

    def tff_atomic(self) -> Node:
        tok = self.peek()
        if tok.kind in (Tok.INT, Tok.RAT, Tok.REAL):
            self.next()
            return NumberLit(tok.kind.name.lower(), tok.lexeme)
        if tok.kind is Tok.DQUOTED:
            self.next()
            return DistinctObj(tok.lexeme)
        if tok.kind is Tok.UPPER:
            self.next()
            return Var(tok.lexeme)
        if tok.kind is Tok.LBRACKET:
            return self.parse_tight_term()
        if tok.kind in (Tok.LOWER, Tok.SQUOTED, Tok.DOLLAR, Tok.DDOLLAR):
            if tok.lexeme == "$ite":
                return self.parse_ite(self.tff_formula)
            if tok.lexeme == "$let":
                return self.parse_let(Language.TFF, self.tff_formula)
            self.next()
            if tok.lexeme == "$true":
                return Bool(True)
            if tok.lexeme == "$false":
                return Bool(False)
            args: list[Node] = []
            if self.accept(Tok.LPAREN):
                args.append(self.tff_formula())
                while self.accept(Tok.COMMA):
                    args.append(self.tff_formula())
                self.expect(Tok.RPAREN, "arguments")
            return Appl(tok.lexeme, tuple(args))
        raise self.error("expected a formula or term")

    def parse_ite(self, sub: Callable[[], Node]) -> Node:
        tok = self.next()
        self.expect(Tok.LPAREN, "$ite")
        cond = sub()
        self.expect(Tok.COMMA, "$ite")
        then = sub()
        self.expect(Tok.COMMA, "$ite")
        els = sub()
        self.expect(Tok.RPAREN, "$ite")
        return Ite(cond, then, els, pos=tok.pos)

    def parse_let(self, language: Language, sub: Callable[[], Node]) -> Node:
        tok = self.next()
        self.expect(Tok.LPAREN, "$let")
        types: list[tuple[str, Type]] = []
        if self.accept(Tok.LBRACKET):
            types.append(self.parse_let_typing(language))
            while self.accept(Tok.COMMA):
                types.append(self.parse_let_typing(language))
            self.expect(Tok.RBRACKET, "$let typings")
        else:
            types.append(self.parse_let_typing(language))
        self.expect(Tok.COMMA, "$let")
        defs: list[tuple[Node, Node]] = []
        if self.accept(Tok.LBRACKET):
            defs.append(self.parse_let_binding(sub))
            while self.accept(Tok.COMMA):
                defs.append(self.parse_let_binding(sub))
            self.expect(Tok.RBRACKET, "$let definitions")
        else:
            defs.append(self.parse_let_binding(sub))
        self.expect(Tok.COMMA, "$let")
        body = sub()
        self.expect(Tok.RPAREN, "$let")
        return Let(tuple(types), tuple(defs), body, pos=tok.pos)

    def parse_let_typing(self, language: Language) -> tuple[str, Type]:
        tok = self.peek()
        if tok.kind not in (Tok.LOWER, Tok.SQUOTED):
            raise self.error("expected a symbol in $let typing")
        self.next()
        self.expect(Tok.COLON, "$let typing")
        return tok.lexeme, self.parse_type(language)

    def parse_let_binding(self, sub: Callable[[], Node]) -> tuple[Node, Node]:
        lhs = self.parse_tight_term()
        self.expect(Tok.ASSIGN, "$let definition")
        return lhs, sub()

    # -- THF formulas

    def thf_formula(self) -> Node:
        left = self.thf_eq_level()
        tok = self.peek()
        if tok.kind not in BINOP_TOKENS:
            return left
        op = BINOP_TOKENS[self.next().kind]
        node = Binary(op, left, self.thf_eq_level())
        while self.peek().kind in BINOP_TOKENS:
            next_op = BINOP_TOKENS[self.peek().kind]
            if next_op != op or op not in ("&", "|"):
                raise self.error(
                    f"'{op}' and '{next_op}' do not associate; use parentheses")
            self.next()
            node = Binary(op, node, self.thf_eq_level())
        return node

    def thf_eq_level(self) -> Node:
        node = self.thf_apply()
        tok = self.peek()
        if tok.kind in (Tok.EQUAL, Tok.NEQ):
            self.next()
            return Eq(node, self.thf_apply(), negated=tok.kind is Tok.NEQ)
        return node

    def thf_apply(self) -> Node:
        node = self.thf_unit()
        while self.accept(Tok.AT):
            arg = self.thf_unit()
            if isinstance(node, NcApply):
                node = NcApply(node.conn, node.args + (arg,))
            else:
                node = Apply(node, arg)
        return node

    def thf_unit(self) -> Node:
        tok = self.peek()
        if tok.kind is Tok.TILDE:
            self.next()
            return Not(self.thf_unit())
        if tok.kind in (Tok.BANG, Tok.QUESTION):
            self.next()
            bindings = self.parse_bindings(Language.THF)
            self.expect(Tok.COLON, "quantified formula")
            return Quant(tok.lexeme, bindings, self.thf_unit())
        if tok.kind is Tok.CARET:
            self.next()
            bindings = self.parse_bindings(Language.THF)
            self.expect(Tok.COLON, "lambda")
            return Lam(bindings, self.thf_unit())
        if tok.kind in (Tok.LBRACE, Tok.BOXDOT, Tok.DIADOT, Tok.SLASHDOT,
                        Tok.LBHASH, Tok.LAHASH, Tok.LSHASH):
            conn = self.parse_nc_connective()
            return NcApply(conn, ())
        if tok.kind is Tok.LPAREN:
            self.next()
            inner = self.thf_formula()
            self.expect(Tok.RPAREN, "formula")
            return inner
        if tok.kind in (Tok.INT, Tok.RAT, Tok.REAL):
            self.next()
            return NumberLit(tok.kind.name.lower(), tok.lexeme)
        if tok.kind is Tok.DQUOTED:
            self.next()
            return DistinctObj(tok.lexeme)
        if tok.kind is Tok.UPPER:
            self.next()
            return Var(tok.lexeme)
        if tok.kind in (Tok.LOWER, Tok.SQUOTED, Tok.DOLLAR, Tok.DDOLLAR):
            if tok.lexeme == "$ite":
                return self.parse_ite(self.thf_formula)
            if tok.lexeme == "$let":
                return self.parse_let(Language.THF, self.thf_formula)
            self.next()
            if tok.lexeme == "$true":
                return Bool(True)
            if tok.lexeme == "$false":
                return Bool(False)
            args: list[Node] = []
            if self.accept(Tok.LPAREN):
                args.append(self.thf_formula())
                while self.accept(Tok.COMMA):
                    args.append(self.thf_formula())
                self.expect(Tok.RPAREN, "arguments")
            return Appl(tok.lexeme, tuple(args))
        raise self.error("expected a formula or term")


def parse_problem(text: str, filename: str = "<input>",
                  include_resolver: Optional[IncludeResolver] = None) -> Problem:
    """Parse a problem from text; includes need a resolver (see parse_file)."""
    parser = Parser(text, filename, include_resolver)
    return parser.parse_problem()


def parse_formula(text: str, language: Language = Language.TFF) -> Node:
    """Parse a single bare formula (testing convenience)."""
    parser = Parser(text)
    node = parser.thf_formula() if language is Language.THF else parser.tff_formula()
    parser.expect(Tok.EOF, "formula")
    return node


def parse_file(path: str, include_root: Optional[str] = None) -> Problem:
    """Parse a file, resolving includes relative to it (or the include root)."""
    return _parse_file(os.path.abspath(path), include_root, [])


def _parse_file(path: str, include_root: Optional[str], stack: list[str]) -> Problem:
    real = os.path.realpath(path)
    if real in stack:
        raise ParseError(f"cyclic include of '{path}'", (1, 1), filename=path)
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ParseError(f"cannot read '{path}': {exc.strerror}", (1, 1),
                         filename=path) from exc

    def resolver(rel: str, names: Optional[list[str]]) -> Problem:
        candidates = [os.path.join(os.path.dirname(path), rel)]
        if include_root is not None:
            candidates.append(os.path.join(include_root, rel))
        target = next((c for c in candidates if os.path.exists(c)), candidates[-1])
        units = _parse_file(target, include_root, stack + [real])
        if names is not None:
            wanted = set(names)
            units = [u for u in units if u.name in wanted]
        return units

    parser = Parser(text, path, resolver)
    return parser.parse_problem()
