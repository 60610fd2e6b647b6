"""Vocabularies, finite relational structures and first-order formula ASTs.

Everything here is immutable. Structures may be built in an invalid state
(so that :func:`validate_structure` can report what is wrong with them);
the parser and the generators only ever hand out valid ones.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


class LogicError(ValueError):
    """Raised on malformed vocabularies, formulas or structure operations."""


# ---------------------------------------------------------------------------
# Vocabulary


@dataclass(frozen=True)
class Vocabulary:
    """Relation symbols with arities plus constant symbols.

    Function symbols are not supported. Every arity must be at least one.
    """

    relations: tuple[tuple[str, int], ...] = ()
    constants: tuple[str, ...] = ()
    name: str = field(default="sig", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "relations", tuple((str(r), int(a)) for r, a in self.relations))
        object.__setattr__(self, "constants", tuple(str(c) for c in self.constants))
        seen: set[str] = set()
        for sym in [r for r, _ in self.relations] + list(self.constants):
            if not IDENT_RE.match(sym):
                raise LogicError(f"invalid symbol name {sym!r}")
            if sym in seen:
                raise LogicError(f"duplicate symbol {sym!r}")
            seen.add(sym)
        for r, a in self.relations:
            if a < 1:
                raise LogicError(f"relation {r} must have arity >= 1, got {a}")

    def arity(self, rel: str) -> int:
        for r, a in self.relations:
            if r == rel:
                return a
        raise LogicError(f"unknown relation {rel!r}")

    def has_relation(self, rel: str) -> bool:
        return any(r == rel for r, _ in self.relations)

    @property
    def relation_names(self) -> tuple[str, ...]:
        return tuple(r for r, _ in self.relations)

    def with_constants(self, extra: Sequence[str]) -> Vocabulary:
        return Vocabulary(self.relations, self.constants + tuple(extra), name=self.name)

    def without_constants(self, drop: Iterable[str]) -> Vocabulary:
        drop = set(drop)
        return Vocabulary(self.relations, tuple(c for c in self.constants if c not in drop), name=self.name)

    def symbols(self) -> set[str]:
        return set(self.relation_names) | set(self.constants)


GRAPH = Vocabulary((("E", 2),), name="graph")
EMPTY = Vocabulary((), name="set")


# ---------------------------------------------------------------------------
# Structures


def _freeze_tables(tables: Mapping[str, Iterable[Sequence[str]]]) -> Mapping[str, frozenset]:
    return MappingProxyType({r: frozenset(tuple(t) for t in ts) for r, ts in tables.items()})


class FiniteStructure:
    """A finite structure over a relational vocabulary with constants.

    ``universe`` is kept sorted lexicographically; that order is the one all
    enumeration and tie-breaking in the package refers to. Relations missing
    from ``tables`` are empty.
    """

    __slots__ = ("vocab", "universe", "tables", "constants", "name", "_hash")

    def __init__(
        self,
        vocab: Vocabulary,
        universe: Iterable[str],
        tables: Mapping[str, Iterable[Sequence[str]]] | None = None,
        constants: Mapping[str, str] | None = None,
        name: str = "M",
    ) -> None:
        tables = dict(tables or {})
        for r in vocab.relation_names:
            tables.setdefault(r, ())
        object.__setattr__(self, "vocab", vocab)
        object.__setattr__(self, "universe", tuple(sorted(set(map(str, universe)))))
        object.__setattr__(self, "tables", _freeze_tables(tables))
        object.__setattr__(self, "constants", MappingProxyType(dict(constants or {})))
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, key, value):
        raise AttributeError("FiniteStructure is immutable")

    def __reduce__(self):
        tables = {r: sorted(ts) for r, ts in self.tables.items()}
        return (FiniteStructure, (self.vocab, self.universe, tables, dict(self.constants), self.name))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteStructure):
            return NotImplemented
        return (
            self.vocab == other.vocab
            and self.universe == other.universe
            and dict(self.tables) == dict(other.tables)
            and dict(self.constants) == dict(other.constants)
        )

    def __hash__(self) -> int:
        if self._hash is None:
            h = hash((
                self.vocab,
                self.universe,
                tuple(sorted((r, ts) for r, ts in self.tables.items())),
                tuple(sorted(self.constants.items())),
            ))
            object.__setattr__(self, "_hash", h)
        return self._hash

    def __repr__(self) -> str:
        return f"FiniteStructure({self.name!r}, universe={list(self.universe)}, tables={ {r: sorted(t) for r, t in self.tables.items()} }, constants={dict(self.constants)})"

    def __len__(self) -> int:
        return len(self.universe)

    def holds(self, rel: str, args: Sequence[str]) -> bool:
        return tuple(args) in self.tables[rel]

    def constant_elements(self) -> frozenset[str]:
        return frozenset(self.constants.values())

    def renamed(self, name: str) -> FiniteStructure:
        return FiniteStructure(self.vocab, self.universe, self.tables, self.constants, name=name)


def validate_structure(s: FiniteStructure) -> list[str]:
    """Return every invariant violation of ``s``; an empty list means valid."""
    problems: list[str] = []
    if not s.universe:
        problems.append("empty universe")
    elems = set(s.universe)
    declared = dict(s.vocab.relations)
    for rel, tuples in s.tables.items():
        if rel not in declared:
            problems.append(f"undeclared relation {rel}")
            continue
        for t in sorted(tuples):
            if len(t) != declared[rel]:
                problems.append(f"arity mismatch for {rel}: {t!r} has length {len(t)}, expected {declared[rel]}")
            bad = [e for e in t if e not in elems]
            if bad:
                problems.append(f"tuple {t!r} of {rel} uses non-elements {bad}")
    for c in s.vocab.constants:
        if c not in s.constants:
            problems.append(f"uninterpreted constant {c}")
        elif s.constants[c] not in elems:
            problems.append(f"constant {c} interpreted outside the universe: {s.constants[c]!r}")
    for c in s.constants:
        if c not in s.vocab.constants:
            problems.append(f"undeclared constant {c}")
    return problems


def expand_with_parameters(m: FiniteStructure, elems: Sequence[str]) -> FiniteStructure:
    """Name the elements ``elems`` by fresh constants ``c1, c2, ...``.

    A fresh name that collides with an existing symbol gets ``_`` suffixes
    until it is free.
    """
    for e in elems:
        if e not in m.universe:
            raise LogicError(f"element {e!r} is not in the universe of {m.name}")
    if not elems:
        return m
    taken = m.vocab.symbols()
    fresh = []
    for i in range(1, len(elems) + 1):
        c = f"c{i}"
        while c in taken:
            c += "_"
        taken.add(c)
        fresh.append(c)
    consts = dict(m.constants)
    consts.update(zip(fresh, elems))
    return FiniteStructure(m.vocab.with_constants(fresh), m.universe, m.tables, consts, name=m.name)


def reduct(m: FiniteStructure, drop_constants: Iterable[str]) -> FiniteStructure:
    """Forget the given constants (inverse of :func:`expand_with_parameters`)."""
    drop = set(drop_constants)
    vocab = m.vocab.without_constants(drop)
    consts = {c: e for c, e in m.constants.items() if c not in drop}
    return FiniteStructure(vocab, m.universe, m.tables, consts, name=m.name)


# ---------------------------------------------------------------------------
# Terms and formulas


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self) -> str:
        return self.name


Term = Union[Var, Const]


class Formula:
    """Base class of formula nodes. Supports ``~``, ``&`` and ``|``."""

    __slots__ = ()

    def __invert__(self) -> Formula:
        return Not(self)

    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __str__(self) -> str:
        from .syntax import print_formula

        return print_formula(self)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    rel: str
    args: tuple[Term, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))

    def __repr__(self) -> str:
        return f"Atom({self.rel}, {list(self.args)})"


@dataclass(frozen=True, repr=False)
class Eq(Formula):
    left: Term
    right: Term

    def __repr__(self) -> str:
        return f"Eq({self.left}, {self.right})"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    body: Formula

    def __repr__(self) -> str:
        return f"Not({self.body!r})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"And({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"Or({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"Implies({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Iff(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"Iff({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Forall(Formula):
    var: str
    body: Formula

    def __repr__(self) -> str:
        return f"Forall({self.var}, {self.body!r})"


@dataclass(frozen=True, repr=False)
class Exists(Formula):
    var: str
    body: Formula

    def __repr__(self) -> str:
        return f"Exists({self.var}, {self.body!r})"


BINARY = (And, Or, Implies, Iff)
QUANTIFIERS = (Forall, Exists)


def atom(rel: str, *args: str | Term) -> Atom:
    """Shorthand: string arguments become variables."""
    return Atom(rel, tuple(Var(a) if isinstance(a, str) else a for a in args))


def eq(a: str | Term, b: str | Term) -> Eq:
    return Eq(Var(a) if isinstance(a, str) else a, Var(b) if isinstance(b, str) else b)


def conj(parts: Sequence[Formula], empty: Formula | None = None) -> Formula:
    """Left-nested conjunction; ``empty`` is returned for an empty list."""
    if not parts:
        if empty is None:
            raise LogicError("empty conjunction needs an explicit neutral formula")
        return empty
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts: Sequence[Formula], empty: Formula | None = None) -> Formula:
    if not parts:
        if empty is None:
            raise LogicError("empty disjunction needs an explicit neutral formula")
        return empty
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def forall(vars: Sequence[str], body: Formula) -> Formula:
    for v in reversed(vars):
        body = Forall(v, body)
    return body


def exists(vars: Sequence[str], body: Formula) -> Formula:
    for v in reversed(vars):
        body = Exists(v, body)
    return body


def free_variables(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset(t.name for t in f.args if isinstance(t, Var))
    if isinstance(f, Eq):
        return frozenset(t.name for t in (f.left, f.right) if isinstance(t, Var))
    if isinstance(f, Not):
        return free_variables(f.body)
    if isinstance(f, BINARY):
        return free_variables(f.left) | free_variables(f.right)
    if isinstance(f, QUANTIFIERS):
        return free_variables(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def all_variables(f: Formula) -> frozenset[str]:
    """Free and bound variable names occurring anywhere in ``f``."""
    if isinstance(f, (Atom, Eq)):
        return free_variables(f)
    if isinstance(f, Not):
        return all_variables(f.body)
    if isinstance(f, BINARY):
        return all_variables(f.left) | all_variables(f.right)
    if isinstance(f, QUANTIFIERS):
        return all_variables(f.body) | {f.var}
    raise TypeError(f"not a formula: {f!r}")


def constants_of(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset(t.name for t in f.args if isinstance(t, Const))
    if isinstance(f, Eq):
        return frozenset(t.name for t in (f.left, f.right) if isinstance(t, Const))
    if isinstance(f, Not):
        return constants_of(f.body)
    if isinstance(f, BINARY):
        return constants_of(f.left) | constants_of(f.right)
    if isinstance(f, QUANTIFIERS):
        return constants_of(f.body)
    raise TypeError(f"not a formula: {f!r}")


def is_sentence(f: Formula) -> bool:
    return not free_variables(f)


def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, (Atom, Eq)):
        return True
    if isinstance(f, Not):
        return is_quantifier_free(f.body)
    if isinstance(f, BINARY):
        return is_quantifier_free(f.left) and is_quantifier_free(f.right)
    return False


def check_formula(f: Formula, vocab: Vocabulary) -> list[str]:
    """Well-formedness problems of ``f`` over ``vocab`` (unknown symbols, arities)."""
    problems: list[str] = []

    def term(t: Term) -> None:
        if isinstance(t, Const) and t.name not in vocab.constants:
            problems.append(f"unknown constant {t.name}")

    def walk(g: Formula) -> None:
        if isinstance(g, Atom):
            if not vocab.has_relation(g.rel):
                problems.append(f"unknown relation {g.rel}")
            elif vocab.arity(g.rel) != len(g.args):
                problems.append(f"arity mismatch for {g.rel}: got {len(g.args)}, expected {vocab.arity(g.rel)}")
            for t in g.args:
                term(t)
        elif isinstance(g, Eq):
            term(g.left)
            term(g.right)
        elif isinstance(g, Not):
            walk(g.body)
        elif isinstance(g, BINARY):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, QUANTIFIERS):
            walk(g.body)
        else:
            problems.append(f"not a formula node: {g!r}")

    walk(f)
    return problems


def substitute(f: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Replace free occurrences of variables by terms.

    Capture is not checked; callers substitute constants or fresh variables.
    """
    def sub_term(t: Term) -> Term:
        if isinstance(t, Var) and t.name in mapping:
            return mapping[t.name]
        return t

    if isinstance(f, Atom):
        return Atom(f.rel, tuple(sub_term(t) for t in f.args))
    if isinstance(f, Eq):
        return Eq(sub_term(f.left), sub_term(f.right))
    if isinstance(f, Not):
        return Not(substitute(f.body, mapping))
    if isinstance(f, BINARY):
        return type(f)(substitute(f.left, mapping), substitute(f.right, mapping))
    if isinstance(f, QUANTIFIERS):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        return type(f)(f.var, substitute(f.body, inner))
    raise TypeError(f"not a formula: {f!r}")


@dataclass(frozen=True)
class Theory:
    """A finite list of sentences."""

    sentences: tuple[Formula, ...]
    name: str = field(default="T", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "sentences", tuple(self.sentences))
        for s in self.sentences:
            if free_variables(s):
                raise LogicError(f"theory member has free variables {sorted(free_variables(s))}: {s}")

    def __iter__(self):
        return iter(self.sentences)

    def __len__(self) -> int:
        return len(self.sentences)


def as_theory(x: Formula | Theory | Sequence[Formula]) -> Theory:
    if isinstance(x, Theory):
        return x
    if isinstance(x, Formula):
        return Theory((x,))
    return Theory(tuple(x))
