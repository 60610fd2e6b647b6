"""Generators for the structure, sentence and theory families used as examples.

Families are addressed by name plus integer parameters, e.g.
``gen_structure("cycle", 4)`` or the string form ``"disjoint_cycles:1,2,3"``
accepted by :func:`parse_family_spec`.
"""
from __future__ import annotations

import itertools
import os
import random
from typing import Sequence

from .logic import (
    EMPTY,
    GRAPH,
    Exists,
    FiniteStructure,
    Forall,
    Formula,
    Not,
    Theory,
    Vocabulary,
    atom,
    conj,
    disj,
    eq,
    exists,
    forall,
)
from .normal_forms import to_prenex


class FamilyError(ValueError):
    pass


def _positive(n: int, what: str) -> int:
    if not isinstance(n, int) or n <= 0:
        raise FamilyError(f"{what} must be a positive integer, got {n!r}")
    return n


# ---------------------------------------------------------------------------
# Structures


def cycle(n: int, prefix: str = "e", name: str | None = None) -> FiniteStructure:
    """Directed n-cycle ``e0 -> e1 -> ... -> e(n-1) -> e0``."""
    _positive(n, "cycle length")
    vs = [f"{prefix}{i}" for i in range(n)]
    edges = [(vs[i], vs[(i + 1) % n]) for i in range(n)]
    return FiniteStructure(GRAPH, vs, {"E": edges}, name=name or f"C{n}")


def disjoint_cycles(lengths: Sequence[int]) -> FiniteStructure:
    """Disjoint union of directed cycles; component ``j`` uses names ``c{j}_{i}``."""
    if not lengths:
        raise FamilyError("disjoint_cycles needs at least one cycle")
    universe, edges = [], []
    for j, n in enumerate(lengths):
        c = cycle(n, prefix=f"c{j}_")
        universe += c.universe
        edges += c.tables["E"]
    return FiniteStructure(GRAPH, universe, {"E": edges}, name="DC_" + "_".join(map(str, lengths)))


def linear_order(n: int) -> FiniteStructure:
    """``e0 <= e1 <= ... <= e(n-1)`` with E interpreted as the (reflexive) order."""
    _positive(n, "order size")
    vs = [f"e{i}" for i in range(n)]
    return FiniteStructure(GRAPH, vs, {"E": [(vs[i], vs[j]) for i in range(n) for j in range(i, n)]}, name=f"L{n}")


def bare_set(n: int) -> FiniteStructure:
    _positive(n, "set size")
    return FiniteStructure(EMPTY, [f"e{i}" for i in range(n)], name=f"B{n}")


def loop_pair() -> FiniteStructure:
    """Two vertices, a self-loop on ``a`` only."""
    return FiniteStructure(GRAPH, ["a", "b"], {"E": [("a", "a")]}, name="loop_pair")


STRUCTURE_FAMILIES = {
    "cycle": lambda n: cycle(n),
    "disjoint_cycles": lambda *ls: disjoint_cycles(list(ls)),
    "linear_order": linear_order,
    "bare_set": bare_set,
    "loop_pair": loop_pair,
}


def gen_structure(family: str, *params: int) -> FiniteStructure:
    try:
        maker = STRUCTURE_FAMILIES[family]
    except KeyError:
        raise FamilyError(f"unknown structure family {family!r}; known: {sorted(STRUCTURE_FAMILIES)}") from None
    try:
        return maker(*params)
    except TypeError as exc:
        raise FamilyError(f"bad parameters for {family}: {params}") from exc


def random_structure(vocab: Vocabulary, size: int, seed: int | None = None, density: float = 0.5) -> FiniteStructure:
    """Uniform table sampling. ``seed`` defaults to ``$PRESLAB_SEED`` (or 0)."""
    if seed is None:
        seed = int(os.environ.get("PRESLAB_SEED", "0"))
    rng = random.Random(seed)
    vs = [f"e{i}" for i in range(_positive(size, "size"))]
    tables = {
        r: [t for t in itertools.product(vs, repeat=a) if rng.random() < density] for r, a in vocab.relations
    }
    consts = {c: rng.choice(vs) for c in vocab.constants}
    return FiniteStructure(vocab, vs, tables, consts, name=f"R{size}_{seed}")


# ---------------------------------------------------------------------------
# Sentences


def _xs(k: int) -> list[str]:
    return [f"x{i}" for i in range(1, k + 1)]


def _distinct(vs: Sequence[str]) -> list[Formula]:
    return [Not(eq(a, b)) for a, b in itertools.combinations(vs, 2)]


def has_k_cycle(k: int) -> Formula:
    """exists x1..xk: pairwise distinct and x1 -> x2 -> ... -> xk -> x1."""
    xs = _xs(_positive(k, "cycle length"))
    edges = [atom("E", xs[i], xs[(i + 1) % k]) for i in range(k)]
    return exists(xs, conj(_distinct(xs) + edges))


def no_k_cycle(k: int) -> Formula:
    return to_prenex(Not(has_k_cycle(k))).to_formula()


def fewer_than_k(k: int) -> Formula:
    """forall x1..xk: some two are equal. For k = 1 the disjunction is empty (false)."""
    xs = _xs(_positive(k, "k"))
    pairs = [eq(a, b) for a, b in itertools.combinations(xs, 2)]
    return forall(xs, disj(pairs, empty=Not(eq(xs[0], xs[0]))))


def domination() -> Formula:
    return Exists("x", Forall("y", atom("E", "x", "y")))


def out_edge() -> Formula:
    return Forall("x", Exists("y", atom("E", "x", "y")))


def not_on_cycle(n: int, x: str = "x") -> Formula:
    """``x`` lies on no directed cycle of length exactly ``n`` (distinct vertices)."""
    _positive(n, "cycle length")
    if n == 1:
        return Not(atom("E", x, x))
    zs = [f"z{i}" for i in range(1, n)]
    parts = _distinct(zs) + [Not(eq(x, z)) for z in zs]
    parts += [atom("E", x, zs[0]), atom("E", zs[-1], x)]
    parts += [atom("E", zs[i], zs[i + 1]) for i in range(len(zs) - 1)]
    return Not(exists(zs, conj(parts)))


def phi_n(n: int, x: str = "x") -> Formula:
    """``x`` lies on no directed cycle of length ``<= n``."""
    return conj([not_on_cycle(i, x) for i in range(1, _positive(n, "n") + 1)])


def psi_n(n: int) -> Formula:
    return Exists("x", phi_n(n))


SENTENCE_FAMILIES = {
    "has_k_cycle": has_k_cycle,
    "no_k_cycle": no_k_cycle,
    "fewer_than_k": fewer_than_k,
    "domination": domination,
    "out_edge": out_edge,
    "phi_n": phi_n,
    "not_on_cycle": not_on_cycle,
    "psi_n": psi_n,
}


def gen_sentence(family: str, *params: int) -> Formula:
    """Named formula family. ``phi_n`` and ``not_on_cycle`` have ``x`` free."""
    try:
        maker = SENTENCE_FAMILIES[family]
    except KeyError:
        raise FamilyError(f"unknown sentence family {family!r}; known: {sorted(SENTENCE_FAMILIES)}") from None
    try:
        return maker(*params)
    except TypeError as exc:
        raise FamilyError(f"bad parameters for {family}: {params}") from exc


def sentence_vocabulary(family: str) -> Vocabulary:
    return EMPTY if family == "fewer_than_k" else GRAPH


# ---------------------------------------------------------------------------
# Theories


def loop_contrast() -> Theory:
    return Theory((Exists("x", atom("E", "x", "x")), Exists("y", Not(atom("E", "y", "y")))), name="loop_contrast")


def psi_prefix(m: int) -> Theory:
    return Theory(tuple(psi_n(i) for i in range(1, _positive(m, "m") + 1)), name=f"psi_prefix_{m}")


def no_cycles(m: int) -> Theory:
    return Theory(tuple(no_k_cycle(k) for k in range(1, _positive(m, "m") + 1)), name=f"no_cycles_{m}")


THEORY_FAMILIES = {
    "loop_contrast": loop_contrast,
    "psi_prefix": psi_prefix,
    "no_cycles": no_cycles,
}


def gen_theory(family: str, *params: int) -> Theory:
    try:
        maker = THEORY_FAMILIES[family]
    except KeyError:
        raise FamilyError(f"unknown theory family {family!r}; known: {sorted(THEORY_FAMILIES)}") from None
    try:
        return maker(*params)
    except TypeError as exc:
        raise FamilyError(f"bad parameters for {family}: {params}") from exc


def parse_family_spec(spec: str) -> tuple[str, tuple[int, ...]]:
    """``"cycle:4"`` -> ``("cycle", (4,))``; ``"loop_pair"`` -> ``("loop_pair", ())``."""
    name, _, rest = spec.partition(":")
    try:
        params = tuple(int(p) for p in rest.split(",")) if rest else ()
    except ValueError:
        raise FamilyError(f"bad family parameters in {spec!r}") from None
    return name.strip(), params


# ---------------------------------------------------------------------------
# Sentence corpus over {E/2}


def _p(text: str) -> Formula:
    from .syntax import parse_formula

    return parse_formula(text, GRAPH)


def sentence_corpus() -> list[tuple[str, Formula]]:
    """Twenty graph sentences mixing prefix classes, connectives and equality."""
    return [
        ("domination", domination()),
        ("out_edge", out_edge()),
        ("has_1_cycle", has_k_cycle(1)),
        ("has_2_cycle", has_k_cycle(2)),
        ("has_3_cycle", has_k_cycle(3)),
        ("no_3_cycle", no_k_cycle(3)),
        ("fewer_than_2", fewer_than_k(2)),
        ("fewer_than_3", fewer_than_k(3)),
        ("psi_1", psi_n(1)),
        ("psi_2", psi_n(2)),
        ("reflexive", _p("forall x. E(x,x)")),
        ("symmetric", _p("forall x, y. E(x,y) -> E(y,x)")),
        ("transitive", _p("forall x, y, z. E(x,y) & E(y,z) -> E(x,z)")),
        ("non_edge", _p("exists x, y. x != y & ~E(x,y)")),
        ("split_loops", _p("(forall x. E(x,x)) & (exists y. ~E(y,y))")),
        ("loops_iff", _p("(exists x. E(x,x)) <-> (forall y. E(y,y))")),
        ("loop_has_exit", _p("forall x. E(x,x) -> exists y. x != y & E(x,y)")),
        ("no_universal_sink", _p("~exists x. forall y. E(y,x)")),
        ("pi3", _p("forall x. exists y. forall z. E(x,y) & (E(y,z) -> E(x,z))")),
        ("has_sink", _p("exists x. forall y. ~E(x,y)")),
    ]
