"""Concrete syntax: formula and structure-file parsing, pretty-printing.

Formula grammar, loosest to tightest binding::

    formula := iff
    iff     := imp ("<->" imp)*             left-associative
    imp     := or ("->" imp)?               right-associative
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "~" unary | quant | atom | "(" formula ")"
    quant   := ("forall" | "exists") var ("," var)* "." formula
    atom    := rel "(" term ("," term)* ")" | term ("=" | "!=") term

A quantifier body extends as far right as possible. ``#`` starts a comment.

Structure files::

    vocab graph { relation E/2; constant c0; }
    structure C3 : graph {
      universe = { a, b, c };
      E = { (a,b), (b,c), (c,a) };
      c0 = a;
    }
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .logic import (
    And,
    Atom,
    Const,
    Eq,
    Exists,
    FiniteStructure,
    Forall,
    Formula,
    Iff,
    Implies,
    LogicError,
    Not,
    Or,
    Term,
    Theory,
    Var,
    Vocabulary,
    validate_structure,
)

KEYWORDS = {"forall", "exists"}


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    start: int
    end: int

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}"


class ParseError(Exception):
    """Syntax or symbol error, located by a :class:`SourceSpan`."""

    def __init__(self, message: str, span: SourceSpan, expected: Iterable[str] = ()):
        self.message = message
        self.span = span
        self.expected = frozenset(expected)
        detail = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{span}: {message}{detail}")


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, NUM, OP, EOF
    text: str
    span: SourceSpan


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<IDENT>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<NUM>[0-9]+)
  | (?P<OP><->|->|!=|[()~&|.,=;:{}/])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            span = SourceSpan(line, pos - line_start + 1, pos, pos + 1)
            raise ParseError(f"unexpected character {text[pos]!r}", span)
        kind = m.lastgroup
        if kind != "ws":
            span = SourceSpan(line, pos - line_start + 1, pos, m.end())
            tokens.append(Token(kind, m.group(), span))
        for i in range(pos, m.end()):
            if text[i] == "\n":
                line += 1
                line_start = i + 1
        pos = m.end()
    tokens.append(Token("EOF", "", SourceSpan(line, pos - line_start + 1, pos, pos)))
    return tokens


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def at(self, *texts: str) -> bool:
        return self.tok.kind in ("OP", "IDENT") and self.tok.text in texts

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "EOF":
            self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}", [text])
        return self.advance()

    def ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "IDENT":
            self.fail(f"expected {what}", [what])
        return self.advance()

    def fail(self, message: str, expected: Iterable[str] = (), tok: Token | None = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "EOF" else repr(tok.text)
        raise ParseError(f"{message}, found {found}", tok.span, expected)


# ---------------------------------------------------------------------------
# Formulas


class _FormulaParser:
    def __init__(self, cur: _Cursor, vocab: Vocabulary):
        self.cur = cur
        self.vocab = vocab
        self.bound: list[str] = []

    def formula(self) -> Formula:
        return self.iff()

    def iff(self) -> Formula:
        f = self.imp()
        while self.cur.at("<->"):
            self.cur.advance()
            f = Iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.disj()
        if self.cur.at("->"):
            self.cur.advance()
            return Implies(f, self.imp())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.cur.at("|"):
            self.cur.advance()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.cur.at("&"):
            self.cur.advance()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        cur = self.cur
        if cur.at("~"):
            cur.advance()
            return Not(self.unary())
        if cur.at("forall", "exists"):
            return self.quant()
        if cur.at("("):
            cur.advance()
            f = self.formula()
            cur.expect(")")
            return f
        if cur.tok.kind == "IDENT":
            if cur.peek().kind == "OP" and cur.peek().text == "(":
                return self.relation_atom()
            left = self.term()
            if cur.at("="):
                cur.advance()
                return Eq(left, self.term())
            if cur.at("!="):
                cur.advance()
                return Not(Eq(left, self.term()))
            cur.fail("expected '=' or '!=' after term", ["=", "!="])
        cur.fail("expected a formula", ["~", "(", "forall", "exists", "identifier"])

    def quant(self) -> Formula:
        kind = self.cur.advance().text
        names = [self.binder()]
        while self.cur.at(","):
            self.cur.advance()
            names.append(self.binder())
        self.cur.expect(".")
        self.bound.extend(names)
        body = self.formula()
        del self.bound[len(self.bound) - len(names):]
        node = Forall if kind == "forall" else Exists
        for v in reversed(names):
            body = node(v, body)
        return body

    def binder(self) -> str:
        tok = self.cur.ident("variable")
        if tok.text in KEYWORDS:
            self.cur.fail("keyword used as variable", ["variable"], tok)
        if tok.text in self.vocab.constants:
            raise ParseError(f"cannot quantify over constant symbol {tok.text}", tok.span)
        if self.vocab.has_relation(tok.text):
            raise ParseError(f"cannot quantify over relation symbol {tok.text}", tok.span)
        return tok.text

    def term(self) -> Term:
        tok = self.cur.ident("term")
        if tok.text in KEYWORDS:
            self.cur.fail("keyword used as term", ["term"], tok)
        if self.vocab.has_relation(tok.text):
            raise ParseError(f"relation symbol {tok.text} used as a term", tok.span)
        if tok.text in self.vocab.constants and tok.text not in self.bound:
            return Const(tok.text)
        return Var(tok.text)

    def relation_atom(self) -> Formula:
        name_tok = self.cur.advance()
        rel = name_tok.text
        if not self.vocab.has_relation(rel):
            raise ParseError(f"unknown relation symbol {rel}", name_tok.span)
        self.cur.expect("(")
        args = [self.term()]
        while self.cur.at(","):
            self.cur.advance()
            args.append(self.term())
        close = self.cur.expect(")")
        if len(args) != self.vocab.arity(rel):
            span = SourceSpan(name_tok.span.line, name_tok.span.column, name_tok.span.start, close.span.end)
            raise ParseError(f"arity mismatch for {rel}: got {len(args)} arguments, expected {self.vocab.arity(rel)}", span)
        return Atom(rel, tuple(args))


def parse_formula(text: str, vocab: Vocabulary) -> Formula:
    """Parse ``text`` into a formula over ``vocab``.

    Identifiers declared as constants of ``vocab`` become :class:`Const`;
    all other term identifiers are variables.
    """
    cur = _Cursor(text)
    f = _FormulaParser(cur, vocab).formula()
    if cur.tok.kind != "EOF":
        cur.fail("unexpected trailing input", ["<->", "->", "|", "&", "end of input"])
    return f


def parse_theory(texts: Sequence[str], vocab: Vocabulary, name: str = "T") -> Theory:
    return Theory(tuple(parse_formula(t, vocab) for t in texts), name=name)


# precedence levels; atoms and quantifiers bind tightest as operands
_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_OPS = {Iff: "<->", Implies: "->", Or: "|", And: "&"}
_ATOMIC = 5


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), _ATOMIC)


def _term(t: Term) -> str:
    return t.name


def print_formula(f: Formula) -> str:
    """Render ``f`` with minimal parentheses; re-parsing yields ``f`` again."""
    return _show(f, open_right=True)


def _show(f: Formula, open_right: bool) -> str:
    # open_right: nothing follows this text, so a trailing quantifier body may
    # run to the end without parentheses
    if isinstance(f, Atom):
        return f"{f.rel}({','.join(_term(t) for t in f.args)})"
    if isinstance(f, Eq):
        return f"{_term(f.left)} = {_term(f.right)}"
    if isinstance(f, Not):
        if isinstance(f.body, Eq):
            return f"{_term(f.body.left)} != {_term(f.body.right)}"
        inner = f.body
        if _prec(inner) < _ATOMIC:
            return f"~({_show(inner, True)})"
        return "~" + _show(inner, open_right)
    if isinstance(f, (Forall, Exists)):
        kind = "forall" if isinstance(f, Forall) else "exists"
        names = [f.var]
        body = f.body
        while type(body) is type(f):
            names.append(body.var)
            body = body.body
        text = f"{kind} {', '.join(names)}. {_show(body, True)}"
        return text if open_right else f"({text})"
    op = type(f)
    p = _PREC[op]
    if op is Implies:
        left_paren = _prec(f.left) <= p
        right_paren = _prec(f.right) < p
    else:
        left_paren = _prec(f.left) < p
        right_paren = _prec(f.right) <= p
    left = f"({_show(f.left, True)})" if left_paren else _show(f.left, False)
    right = f"({_show(f.right, True)})" if right_paren else _show(f.right, open_right)
    return f"{left} {_OPS[op]} {right}"


# ---------------------------------------------------------------------------
# Structure files


def parse_structures(text: str) -> tuple[Vocabulary, list[FiniteStructure]]:
    """Parse a structure file: one ``vocab`` block and any number of structures."""
    cur = _Cursor(text)
    vocab: Vocabulary | None = None
    vocab_name = None
    structures: list[FiniteStructure] = []
    names: set[str] = set()
    while cur.tok.kind != "EOF":
        if cur.at("vocab"):
            start = cur.tok
            if vocab is not None:
                raise ParseError("only one vocab block is allowed per file", start.span)
            vocab_name, vocab = _vocab_block(cur)
        elif cur.at("structure"):
            cur.advance()
            name_tok = cur.ident("structure name")
            cur.expect(":")
            vtok = cur.ident("vocabulary name")
            if vocab is None or vtok.text != vocab_name:
                raise ParseError(f"undeclared vocabulary {vtok.text}", vtok.span)
            if name_tok.text in names:
                raise ParseError(f"duplicate structure name {name_tok.text}", name_tok.span)
            names.add(name_tok.text)
            structures.append(_structure_body(cur, vocab, name_tok))
        else:
            cur.fail("expected a declaration", ["vocab", "structure"])
    if vocab is None:
        raise ParseError("missing vocab block", cur.tok.span, ["vocab"])
    return vocab, structures


def _vocab_block(cur: _Cursor) -> tuple[str, Vocabulary]:
    cur.advance()
    name = cur.ident("vocabulary name").text
    cur.expect("{")
    rels: list[tuple[str, int]] = []
    consts: list[str] = []
    seen: set[str] = set()
    while not cur.at("}"):
        if cur.at("relation"):
            cur.advance()
            tok = cur.ident("relation name")
            cur.expect("/")
            if cur.tok.kind != "NUM":
                cur.fail("expected arity", ["arity"])
            ar_tok = cur.advance()
            if int(ar_tok.text) < 1:
                raise ParseError(f"relation {tok.text} must have arity >= 1", ar_tok.span)
            sym = tok.text
            rels.append((sym, int(ar_tok.text)))
        elif cur.at("constant"):
            cur.advance()
            tok = cur.ident("constant name")
            sym = tok.text
            consts.append(sym)
        else:
            cur.fail("expected a symbol declaration", ["relation", "constant", "}"])
        if sym in seen or sym in KEYWORDS:
            raise ParseError(f"invalid or duplicate symbol {sym}", tok.span)
        seen.add(sym)
        cur.expect(";")
    cur.expect("}")
    return name, Vocabulary(tuple(rels), tuple(consts), name=name)


def _element(cur: _Cursor) -> Token:
    if cur.tok.kind not in ("IDENT", "NUM"):
        cur.fail("expected an element", ["element"])
    return cur.advance()


def _structure_body(cur: _Cursor, vocab: Vocabulary, name_tok: Token) -> FiniteStructure:
    cur.expect("{")
    universe: list[str] | None = None
    tables: dict[str, set[tuple[str, ...]]] = {}
    consts: dict[str, str] = {}
    pending: list[tuple[Token, tuple[Token, ...], str]] = []  # deferred element checks
    while not cur.at("}"):
        sym = cur.ident("'universe', relation or constant")
        cur.expect("=")
        if sym.text == "universe":
            if universe is not None:
                raise ParseError("universe declared twice", sym.span)
            cur.expect("{")
            universe = []
            if not cur.at("}"):
                universe.append(_element(cur).text)
                while cur.at(","):
                    cur.advance()
                    universe.append(_element(cur).text)
            cur.expect("}")
        elif vocab.has_relation(sym.text):
            if sym.text in tables:
                raise ParseError(f"relation {sym.text} assigned twice", sym.span)
            arity = vocab.arity(sym.text)
            rows: set[tuple[str, ...]] = set()
            cur.expect("{")
            while not cur.at("}"):
                start = cur.tok
                if cur.at("("):
                    cur.advance()
                    elems = [_element(cur)]
                    while cur.at(","):
                        cur.advance()
                        elems.append(_element(cur))
                    end = cur.expect(")")
                else:
                    elems = [_element(cur)]
                    end = elems[0]
                span = SourceSpan(start.span.line, start.span.column, start.span.start, end.span.end)
                if len(elems) != arity:
                    raise ParseError(f"arity mismatch for {sym.text}: tuple has {len(elems)} entries, expected {arity}", span)
                rows.add(tuple(e.text for e in elems))
                pending.append((start, tuple(elems), sym.text))
                if not cur.at("}"):
                    cur.expect(",")
            cur.expect("}")
            tables[sym.text] = rows
        elif sym.text in vocab.constants:
            if sym.text in consts:
                raise ParseError(f"constant {sym.text} assigned twice", sym.span)
            el = _element(cur)
            consts[sym.text] = el.text
            pending.append((el, (el,), sym.text))
        else:
            raise ParseError(f"undeclared symbol {sym.text}", sym.span)
        cur.expect(";")
    close = cur.expect("}")
    if universe is None:
        raise ParseError(f"structure {name_tok.text} has no universe", close.span, ["universe"])
    if not universe:
        raise ParseError(f"structure {name_tok.text}: empty universe", close.span)
    members = set(universe)
    for start, elems, sym in pending:
        for e in elems:
            if e.text not in members:
                raise ParseError(f"{e.text} is not an element of {name_tok.text} (in {sym})", e.span)
    for c in vocab.constants:
        if c not in consts:
            raise ParseError(f"uninterpreted constant {c} in structure {name_tok.text}", close.span)
    s = FiniteStructure(vocab, universe, tables, consts, name=name_tok.text)
    problems = validate_structure(s)
    if problems:  # pragma: no cover - all checks above should catch these first
        raise ParseError("; ".join(problems), close.span)
    return s


def parse_structure(text: str, name: str | None = None) -> FiniteStructure:
    """Parse a file and return one structure (by name, or the only/first one)."""
    _, structures = parse_structures(text)
    if not structures:
        raise LogicError("file declares no structures")
    if name is None:
        return structures[0]
    for s in structures:
        if s.name == name:
            return s
    raise LogicError(f"no structure named {name!r}")


def print_vocabulary(vocab: Vocabulary) -> str:
    decls = [f"relation {r}/{a};" for r, a in vocab.relations] + [f"constant {c};" for c in vocab.constants]
    return f"vocab {vocab.name} {{ {' '.join(decls)} }}" if decls else f"vocab {vocab.name} {{ }}"


def print_structure(s: FiniteStructure, with_vocab: bool = True) -> str:
    """Render ``s`` in structure-file syntax (re-parses to an equal structure)."""
    lines = []
    if with_vocab:
        lines.append(print_vocabulary(s.vocab))
    lines.append(f"structure {s.name} : {s.vocab.name} {{")
    lines.append(f"  universe = {{ {', '.join(s.universe)} }};")
    order = {e: i for i, e in enumerate(s.universe)}
    for rel, _ in s.vocab.relations:
        rows = sorted(s.tables[rel], key=lambda t: [order[e] for e in t])
        body = ", ".join("(" + ",".join(t) + ")" for t in rows)
        lines.append(f"  {rel} = {{ {body} }};" if body else f"  {rel} = {{ }};")
    for c in s.vocab.constants:
        lines.append(f"  {c} = {s.constants[c]};")
    lines.append("}")
    return "\n".join(lines)


def print_structures(structures: Sequence[FiniteStructure]) -> str:
    if not structures:
        return ""
    parts = [print_vocabulary(structures[0].vocab)]
    parts += [print_structure(s, with_vocab=False) for s in structures]
    return "\n".join(parts) + "\n"
