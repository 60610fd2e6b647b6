"""Induced substructures, subset enumeration and exhaustive structure generation.

Labeled structures of size ``s`` over a vocabulary are numbered by an
integer *code*: bit ``i`` says whether the ``i``-th relation slot (relations
in vocabulary order, tuples in lexicographic order over ``e0..e(s-1)``) is
present, and the bits above the relation part hold the constant
interpretations in base ``s``. Codes of all sizes ``1..max`` are laid end
to end into one global index, which is what searches split into ranges.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

import numpy as np

from .logic import FiniteStructure, LogicError, Vocabulary

MAX_DEDUP_SIZE = 7


@dataclass(frozen=True)
class SearchBudget:
    max_universe_size: int = 4
    max_seconds: float | None = None
    dedup_isomorphic: bool = True

    def __post_init__(self) -> None:
        if self.max_universe_size < 1:
            raise ValueError("max_universe_size must be >= 1")
        if self.dedup_isomorphic and self.max_universe_size > MAX_DEDUP_SIZE:
            raise ValueError(f"isomorphism dedup is brute force and limited to size <= {MAX_DEDUP_SIZE}")


def induced_substructure(m: FiniteStructure, x: Iterable[str], name: str | None = None) -> FiniteStructure:
    """Restrict ``m`` to ``x`` plus the constant interpretations."""
    keep = set(x)
    stray = keep - set(m.universe)
    if stray:
        raise LogicError(f"{sorted(stray)} not in the universe of {m.name}")
    keep |= m.constant_elements()
    if not keep:
        raise LogicError("induced substructure would have an empty universe")
    tables = {r: [t for t in ts if all(e in keep for e in t)] for r, ts in m.tables.items()}
    return FiniteStructure(m.vocab, keep, tables, m.constants, name=name or m.name)


def substructure_universes(m: FiniteStructure, must_contain: Iterable[str] = ()) -> Iterator[frozenset[str]]:
    """Every nonempty ``X`` with ``must_contain`` and the constants inside ``X``.

    Ordered by size, then lexicographically by sorted element tuple.
    """
    base = set(must_contain)
    stray = base - set(m.universe)
    if stray:
        raise LogicError(f"{sorted(stray)} not in the universe of {m.name}")
    base |= m.constant_elements()
    rest = [e for e in m.universe if e not in base]
    for r in range(len(rest) + 1):
        if not base and r == 0:
            continue
        level = sorted(tuple(sorted(base.union(c))) for c in itertools.combinations(rest, r))
        for x in level:
            yield frozenset(x)


def is_substructure(n: FiniteStructure, m: FiniteStructure) -> bool:
    if n.vocab != m.vocab:
        raise LogicError("is_substructure needs structures over the same vocabulary")
    if not set(n.universe) <= set(m.universe):
        return False
    if dict(n.constants) != dict(m.constants):
        return False
    return n == induced_substructure(m, n.universe)


def element_names(s: int) -> list[str]:
    return [f"e{i}" for i in range(s)]


@lru_cache(maxsize=None)
def _slots(vocab: Vocabulary, s: int) -> tuple[tuple[str, tuple[int, ...]], ...]:
    return tuple(
        (rel, t) for rel, ar in vocab.relations for t in itertools.product(range(s), repeat=ar)
    )


def labeled_count(vocab: Vocabulary, s: int) -> int:
    """Number of labeled structures with universe ``e0..e(s-1)``."""
    return (1 << len(_slots(vocab, s))) * s ** len(vocab.constants)


def total_count(vocab: Vocabulary, max_size: int) -> int:
    return sum(labeled_count(vocab, s) for s in range(1, max_size + 1))


def locate(vocab: Vocabulary, index: int) -> tuple[int, int]:
    """Global index -> (size, code)."""
    if index < 0:
        raise IndexError(index)
    s = 1
    while True:
        n = labeled_count(vocab, s)
        if index < n:
            return s, index
        index -= n
        s += 1


def structure_from_code(vocab: Vocabulary, s: int, code: int, name: str | None = None) -> FiniteStructure:
    slots = _slots(vocab, s)
    names = element_names(s)
    bits = code & ((1 << len(slots)) - 1)
    cidx = code >> len(slots)
    tables: dict[str, list[tuple[str, ...]]] = {r: [] for r in vocab.relation_names}
    for i, (rel, t) in enumerate(slots):
        if bits >> i & 1:
            tables[rel].append(tuple(names[j] for j in t))
    consts = {}
    for c in vocab.constants:
        consts[c] = names[cidx % s]
        cidx //= s
    return FiniteStructure(vocab, names, tables, consts, name=name or f"M{s}_{code}")


@lru_cache(maxsize=None)
def _perm_tables(vocab: Vocabulary, s: int) -> list[tuple[np.ndarray, tuple[int, ...]]]:
    slots = _slots(vocab, s)
    pos = {slot: i for i, slot in enumerate(slots)}
    out = []
    for p in itertools.permutations(range(s)):
        if p == tuple(range(s)):
            continue
        target = np.array([pos[(rel, tuple(p[j] for j in t))] for rel, t in slots], dtype=np.int64)
        out.append((target, p))
    return out


def canonical_mask(vocab: Vocabulary, s: int, codes: np.ndarray) -> np.ndarray:
    """True where a code is the least code in its isomorphism class."""
    nbits = len(_slots(vocab, s))
    nconst = len(vocab.constants)
    if nbits + nconst * math.log2(max(s, 2)) > 62:
        raise ValueError("structure codes too large for isomorphism dedup")
    codes = np.asarray(codes, dtype=np.int64)
    bits = codes & ((1 << nbits) - 1)
    cidx = codes >> nbits
    digits = []
    rem = cidx.copy()
    for _ in range(nconst):
        digits.append(rem % s)
        rem = rem // s
    keep = np.ones(codes.shape, dtype=bool)
    for target, p in _perm_tables(vocab, s):
        newbits = np.zeros_like(bits)
        for i in range(nbits):
            newbits |= ((bits >> i) & 1) << target[i]
        newc = np.zeros_like(cidx)
        pa = np.array(p, dtype=np.int64)
        for j in reversed(range(nconst)):
            newc = newc * s + pa[digits[j]]
        keep &= codes <= (newbits | (newc << nbits))
    return keep


def indexed_structures(
    vocab: Vocabulary, max_size: int, dedup: bool = False, start: int = 0, stop: int | None = None,
    block: int = 4096,
) -> Iterator[tuple[int, FiniteStructure]]:
    """Yield ``(global_index, structure)`` for indices in ``[start, stop)``."""
    end = total_count(vocab, max_size) if stop is None else min(stop, total_count(vocab, max_size))
    offset = 0
    for s in range(1, max_size + 1):
        n = labeled_count(vocab, s)
        lo, hi = max(start, offset), min(end, offset + n)
        for b in range(lo, hi, block):
            codes = np.arange(b - offset, min(b + block, hi) - offset, dtype=np.int64)
            if dedup and s > 1:
                codes = codes[canonical_mask(vocab, s, codes)]
            for code in codes.tolist():
                yield offset + code, structure_from_code(vocab, s, code)
        offset += n
        if offset >= end:
            return


def enumerate_structures(vocab: Vocabulary, budget: SearchBudget) -> Iterator[FiniteStructure]:
    """Every structure of size ``1..budget.max_universe_size`` in canonical order.

    With ``budget.dedup_isomorphic`` only the least-coded member of each
    isomorphism class is produced.
    """
    for _, m in indexed_structures(vocab, budget.max_universe_size, budget.dedup_isomorphic):
        yield m


def are_isomorphic(a: FiniteStructure, b: FiniteStructure) -> bool:
    """Brute-force isomorphism test (tries every bijection)."""
    if a.vocab != b.vocab or len(a) != len(b):
        return False
    if any(len(a.tables[r]) != len(b.tables[r]) for r in a.vocab.relation_names):
        return False
    for image in itertools.permutations(b.universe):
        f = dict(zip(a.universe, image))
        if any(f[a.constants[c]] != b.constants[c] for c in a.vocab.constants):
            continue
        if all({tuple(f[e] for e in t) for t in a.tables[r]} == b.tables[r] for r in a.vocab.relation_names):
            return True
    return False
