"""Truth of formulas in finite structures, witness extraction, theory satisfaction."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

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
    Theory,
    as_theory,
    free_variables,
)
from .normal_forms import EXISTS, PrenexForm, to_prenex


class EvaluationError(LogicError):
    pass


def evaluate(m: FiniteStructure, f: Formula, asg: Mapping[str, str] | None = None) -> bool:
    """Decide ``m |= f[asg]``. Quantifiers range over ``m.universe``."""
    env = dict(asg or {})
    missing = free_variables(f) - env.keys()
    if missing:
        raise EvaluationError(f"assignment does not cover free variables {sorted(missing)}")
    for v, e in env.items():
        if e not in m.universe:
            raise EvaluationError(f"variable {v} assigned to non-element {e!r}")
    return _ev(m, f, env)


def _val(m: FiniteStructure, t, env) -> str:
    if isinstance(t, Const):
        try:
            return m.constants[t.name]
        except KeyError:
            raise EvaluationError(f"constant {t.name} is not interpreted in {m.name}") from None
    return env[t.name]


def _ev(m: FiniteStructure, f: Formula, env: dict) -> bool:
    if isinstance(f, Atom):
        try:
            table = m.tables[f.rel]
        except KeyError:
            raise EvaluationError(f"relation {f.rel} is not interpreted in {m.name}") from None
        return tuple(_val(m, t, env) for t in f.args) in table
    if isinstance(f, Eq):
        return _val(m, f.left, env) == _val(m, f.right, env)
    if isinstance(f, Not):
        return not _ev(m, f.body, env)
    if isinstance(f, And):
        return _ev(m, f.left, env) and _ev(m, f.right, env)
    if isinstance(f, Or):
        return _ev(m, f.left, env) or _ev(m, f.right, env)
    if isinstance(f, Implies):
        return (not _ev(m, f.left, env)) or _ev(m, f.right, env)
    if isinstance(f, Iff):
        return _ev(m, f.left, env) == _ev(m, f.right, env)
    if isinstance(f, (Forall, Exists)):
        want = isinstance(f, Exists)
        saved = env.get(f.var, _UNSET)
        try:
            for e in m.universe:
                env[f.var] = e
                if _ev(m, f.body, env) == want:
                    return want
            return not want
        finally:
            if saved is _UNSET:
                env.pop(f.var, None)
            else:
                env[f.var] = saved
    raise TypeError(f"not a formula: {f!r}")


_UNSET = object()


def models_theory(m: FiniteStructure, t: Theory | Formula) -> bool:
    theory = as_theory(t)
    for s in theory:
        if free_variables(s):
            raise EvaluationError(f"theory member is not a sentence: {s}")
    return all(_ev(m, s, {}) for s in theory)


@dataclass(frozen=True)
class WitnessSet:
    formula: PrenexForm
    tuples: tuple[tuple[str, ...], ...]

    def __bool__(self) -> bool:
        return bool(self.tuples)

    def __len__(self) -> int:
        return len(self.tuples)


def witnesses(m: FiniteStructure, pf: PrenexForm | Formula) -> WitnessSet:
    """All assignments to the leading existential block that make the rest true.

    Tuples come out in lexicographic order of the universe.
    """
    if not isinstance(pf, PrenexForm):
        pf = to_prenex(pf)
    q, names = pf.leading_block()
    if q != EXISTS:
        raise EvaluationError("witnesses need a prefix that starts with an existential block")
    if free_variables(pf.to_formula()):
        raise EvaluationError("witnesses are defined for sentences only")
    rest = PrenexForm(pf.prefix[len(names):], pf.matrix).to_formula()
    found = []
    for tup in itertools.product(m.universe, repeat=len(names)):
        if _ev(m, rest, dict(zip(names, tup))):
            found.append(tup)
    return WitnessSet(pf, tuple(found))
