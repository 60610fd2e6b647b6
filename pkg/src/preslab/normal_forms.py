"""Negation normal form, prenex form, prefix classification, relativization."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .logic import (
    And,
    Atom,
    Const,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    LogicError,
    Not,
    Or,
    Var,
    Vocabulary,
    all_variables,
    constants_of,
    disj,
    free_variables,
    is_quantifier_free,
)

FORALL = "forall"
EXISTS = "exists"


def to_nnf(f: Formula) -> Formula:
    """Push negations down to atoms and eliminate ``->`` and ``<->``."""
    return _nnf(f, positive=True)


def _nnf(f: Formula, positive: bool) -> Formula:
    if isinstance(f, (Atom, Eq)):
        return f if positive else Not(f)
    if isinstance(f, Not):
        return _nnf(f.body, not positive)
    if isinstance(f, And):
        op = And if positive else Or
        return op(_nnf(f.left, positive), _nnf(f.right, positive))
    if isinstance(f, Or):
        op = Or if positive else And
        return op(_nnf(f.left, positive), _nnf(f.right, positive))
    if isinstance(f, Implies):
        return _nnf(Or(Not(f.left), f.right), positive)
    if isinstance(f, Iff):
        return _nnf(And(Implies(f.left, f.right), Implies(f.right, f.left)), positive)
    if isinstance(f, Forall):
        op = Forall if positive else Exists
        return op(f.var, _nnf(f.body, positive))
    if isinstance(f, Exists):
        op = Exists if positive else Forall
        return op(f.var, _nnf(f.body, positive))
    raise TypeError(f"not a formula: {f!r}")


@dataclass(frozen=True)
class PrefixClass:
    """Sigma/Pi polarity, alternation index ``n`` and leading-block size.

    ``n == 0`` means quantifier-free; ``polarity`` is then ``None``.
    """

    polarity: str | None  # "Sigma", "Pi" or None
    n: int
    leading_count: int

    def __str__(self) -> str:
        if self.n == 0:
            return "quantifier-free"
        return f"{self.polarity}_{self.n} (leading block {self.leading_count})"


@dataclass(frozen=True)
class PrenexForm:
    prefix: tuple[tuple[str, str], ...]  # (FORALL | EXISTS, variable)
    matrix: Formula

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", tuple(tuple(p) for p in self.prefix))
        if not is_quantifier_free(self.matrix):
            raise LogicError("prenex matrix must be quantifier-free")
        names = [v for _, v in self.prefix]
        if len(set(names)) != len(names):
            raise LogicError("prenex prefix variables must be pairwise distinct")

    def to_formula(self) -> Formula:
        body = self.matrix
        for q, v in reversed(self.prefix):
            body = Forall(v, body) if q == FORALL else Exists(v, body)
        return body

    def blocks(self) -> list[tuple[str, list[str]]]:
        """Maximal runs of equal quantifiers."""
        return [(q, [v for _, v in grp]) for q, grp in itertools.groupby(self.prefix, key=lambda p: p[0])]

    def leading_block(self) -> tuple[str | None, list[str]]:
        b = self.blocks()
        return b[0] if b else (None, [])

    def padded(self, count: int, quantifier: str | None = None) -> PrenexForm:
        """Add redundant quantifiers so the leading block has at least ``count`` variables.

        Fresh variables do not occur in the matrix, so the result is
        equivalent over nonempty structures. For a quantifier-free form,
        ``quantifier`` picks the block kind.
        """
        q, names = self.leading_block()
        if q is None:
            if quantifier not in (FORALL, EXISTS):
                raise LogicError("padding a quantifier-free form needs an explicit quantifier")
            q = quantifier
        elif quantifier is not None and quantifier != q:
            raise LogicError(f"leading block is {q}, cannot pad with {quantifier}")
        missing = count - len(names)
        if missing <= 0:
            return self
        used = all_variables(self.matrix) | {v for _, v in self.prefix}
        fresh = _fresh_names("p", used, missing)
        k = len(names)
        prefix = self.prefix[:k] + tuple((q, v) for v in fresh) + self.prefix[k:]
        return PrenexForm(prefix, self.matrix)

    def __str__(self) -> str:
        return str(self.to_formula())


def _fresh_names(stem: str, avoid, count: int) -> list[str]:
    out = []
    for i in itertools.count():
        if len(out) == count:
            return out
        name = f"{stem}{i}"
        if name not in avoid:
            out.append(name)


def to_prenex(f: Formula) -> PrenexForm:
    """Prenex form of ``f`` via NNF.

    Bound variables are renamed ``v0, v1, ...`` in left-to-right binder
    order (skipping names that occur free in ``f``); at each binary
    connective the quantifiers of the left operand are pulled out first.
    """
    avoid = free_variables(f)
    counter = itertools.count()

    def fresh() -> str:
        while True:
            name = f"v{next(counter)}"
            if name not in avoid:
                return name

    def go(g: Formula, env: dict[str, str]) -> tuple[list[tuple[str, str]], Formula]:
        if isinstance(g, Atom):
            return [], Atom(g.rel, tuple(_rename(t, env) for t in g.args))
        if isinstance(g, Eq):
            return [], Eq(_rename(g.left, env), _rename(g.right, env))
        if isinstance(g, Not):  # NNF: only atoms are negated
            _, inner = go(g.body, env)
            return [], Not(inner)
        if isinstance(g, (And, Or)):
            lp, lm = go(g.left, env)
            rp, rm = go(g.right, env)
            return lp + rp, type(g)(lm, rm)
        if isinstance(g, (Forall, Exists)):
            name = fresh()
            q = FORALL if isinstance(g, Forall) else EXISTS
            p, m = go(g.body, {**env, g.var: name})
            return [(q, name)] + p, m
        raise TypeError(f"unexpected node in NNF: {g!r}")

    prefix, matrix = go(to_nnf(f), {})
    return PrenexForm(tuple(prefix), matrix)


def _rename(t, env):
    if isinstance(t, Var) and t.name in env:
        return Var(env[t.name])
    return t


def classify_prefix(f: Formula | PrenexForm) -> PrefixClass:
    pf = f if isinstance(f, PrenexForm) else to_prenex(f)
    blocks = pf.blocks()
    if not blocks:
        return PrefixClass(None, 0, 0)
    polarity = "Sigma" if blocks[0][0] == EXISTS else "Pi"
    return PrefixClass(polarity, len(blocks), len(blocks[0][1]))


def relativize(f: Formula, vars: Sequence[str], vocab: Vocabulary | None = None) -> Formula:
    """Relativize the quantifiers of sentence ``f`` to ``vars`` and the constants.

    The result, with ``vars`` free, holds at a tuple of elements iff ``f``
    holds in the substructure induced by those elements and the constants.
    Constants are taken from ``vocab`` when given, else from ``f``.
    """
    vars = list(vars)
    if free_variables(f):
        raise LogicError(f"relativize expects a sentence; free variables {sorted(free_variables(f))}")
    clash = set(vars) & all_variables(f)
    if clash:
        raise LogicError(f"relativization variables must be fresh; {sorted(clash)} occur in the formula")
    consts = list(vocab.constants) if vocab is not None else sorted(constants_of(f))
    if not vars and not consts:
        raise LogicError("relativizing to an empty set: give at least one variable or a constant")

    def guard(z: str) -> Formula:
        parts = [Eq(Var(z), Var(y)) for y in vars] + [Eq(Var(z), Const(c)) for c in consts]
        return disj(parts)

    def go(g: Formula) -> Formula:
        if isinstance(g, (Atom, Eq)):
            return g
        if isinstance(g, Not):
            return Not(go(g.body))
        if isinstance(g, (And, Or, Implies, Iff)):
            return type(g)(go(g.left), go(g.right))
        if isinstance(g, Forall):
            return Forall(g.var, Implies(guard(g.var), go(g.body)))
        if isinstance(g, Exists):
            return Exists(g.var, And(guard(g.var), go(g.body)))
        raise TypeError(f"not a formula: {g!r}")

    return go(f)
