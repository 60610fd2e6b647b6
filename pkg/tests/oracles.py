"""Independent reference implementations used only by the tests.

Nothing here calls into the evaluator, the enumeration encoding or the
core/cover code of the package; only the AST and structure types are shared.
"""
from __future__ import annotations

import itertools

from preslab.logic import (
    GRAPH,
    And,
    Atom,
    Const,
    Eq,
    Exists,
    FiniteStructure,
    Forall,
    Iff,
    Implies,
    Not,
    Or,
    Var,
)


def substitute_eval(m: FiniteStructure, f, asg=None) -> bool:
    """Evaluate by substituting element constants for bound variables."""
    asg = dict(asg or {})
    f = _subst(f, {v: ("elem", e) for v, e in asg.items()})
    return _closed(m, f)


def _subst(f, mapping):
    def term(t):
        if isinstance(t, Var) and t.name in mapping:
            return mapping[t.name]
        return t

    if isinstance(f, Atom):
        return Atom(f.rel, tuple(term(t) for t in f.args))
    if isinstance(f, Eq):
        return Eq(term(f.left), term(f.right))
    if isinstance(f, Not):
        return Not(_subst(f.body, mapping))
    if isinstance(f, (And, Or, Implies, Iff)):
        return type(f)(_subst(f.left, mapping), _subst(f.right, mapping))
    if isinstance(f, (Forall, Exists)):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        return type(f)(f.var, _subst(f.body, inner))
    raise TypeError(f)


def _value(m, t):
    if isinstance(t, tuple):
        return t[1]
    if isinstance(t, Const):
        return m.constants[t.name]
    raise AssertionError(f"unsubstituted variable {t}")


def _closed(m, f) -> bool:
    if isinstance(f, Atom):
        return tuple(_value(m, t) for t in f.args) in m.tables[f.rel]
    if isinstance(f, Eq):
        return _value(m, f.left) == _value(m, f.right)
    if isinstance(f, Not):
        return not _closed(m, f.body)
    if isinstance(f, And):
        return _closed(m, f.left) and _closed(m, f.right)
    if isinstance(f, Or):
        return _closed(m, f.left) or _closed(m, f.right)
    if isinstance(f, Implies):
        return not _closed(m, f.left) or _closed(m, f.right)
    if isinstance(f, Iff):
        return _closed(m, f.left) == _closed(m, f.right)
    if isinstance(f, Forall):
        return all(_closed(m, _subst(f.body, {f.var: ("elem", e)})) for e in m.universe)
    if isinstance(f, Exists):
        return any(_closed(m, _subst(f.body, {f.var: ("elem", e)})) for e in m.universe)
    raise TypeError(f)


def all_digraphs(n: int, names=None):
    """Every labeled digraph (loops allowed) on ``n`` vertices."""
    vs = names or [f"v{i}" for i in range(n)]
    pairs = list(itertools.product(vs, repeat=2))
    for mask in range(1 << len(pairs)):
        edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
        yield FiniteStructure(GRAPH, vs, {"E": edges}, name=f"D{n}_{mask}")


def digraphs_up_to(n: int):
    for s in range(1, n + 1):
        yield from all_digraphs(s)


def isomorphic(a: FiniteStructure, b: FiniteStructure) -> bool:
    if len(a.universe) != len(b.universe):
        return False
    for perm in itertools.permutations(b.universe):
        f = dict(zip(a.universe, perm))
        if all({tuple(f[x] for x in t) for t in a.tables[r]} == set(b.tables[r]) for r in a.tables) and all(
            f[a.constants[c]] == b.constants[c] for c in a.constants
        ):
            return True
    return False


def restrict(m: FiniteStructure, keep) -> FiniteStructure:
    keep = set(keep) | set(m.constants.values())
    return FiniteStructure(
        m.vocab, keep, {r: [t for t in ts if set(t) <= keep] for r, ts in m.tables.items()}, m.constants
    )


def brute_is_core(m, c, sentences) -> bool:
    """Every constant-closed superset of ``c`` induces a model (subsets via bitmasks)."""
    u = list(m.universe)
    need = set(c) | set(m.constants.values())
    for mask in range(1, 1 << len(u)):
        x = {u[i] for i in range(len(u)) if mask >> i & 1}
        if need <= x and not all(substitute_eval(restrict(m, x), s) for s in sentences):
            return False
    return True
