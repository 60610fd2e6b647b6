"""Cores, covers and bounded searches for preservation-property counterexamples.

A set ``C`` of elements is a *core* of ``M`` for a class ``S`` when every
substructure of ``M`` containing ``C`` is again in ``S``. A collection of
substructures of ``M`` is a *k-ary cover* when every set of at most ``k``
elements sits inside one of them. For a sentence ``phi``:

* ``M |= phi`` and ``M`` has no core of size ``<= k`` for ``phi``
* ``M |/= ~phi`` and ``M`` has a k-ary cover by models of ``~phi``

are the same condition, structure by structure; :func:`duality_check`
verifies that on every enumerated structure.

Searches only ever look at finitely many finite structures, so
``none_up_to`` outcomes are bounded evidence and never a membership proof.
"""
from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

import multiprocessing

from .evaluator import evaluate, models_theory, witnesses
from .logic import (
    Atom,
    Const,
    Eq,
    Exists,
    FiniteStructure,
    Formula,
    LogicError,
    Not,
    Theory,
    Var,
    Vocabulary,
    as_theory,
    check_formula,
    conj,
    constants_of,
    expand_with_parameters,
    free_variables,
    substitute,
)
from .normal_forms import PrenexForm, to_prenex
from .substructures import (
    SearchBudget,
    indexed_structures,
    induced_substructure,
    is_substructure,
    locate,
    structure_from_code,
    substructure_universes,
    total_count,
)

FOUND = "found"
NONE_UP_TO = "none_up_to"
EXHAUSTED = "budget_exhausted"


# ---------------------------------------------------------------------------
# Report types


@dataclass(frozen=True)
class CoreReport:
    structure: str
    theory: tuple[str, ...]
    k: int
    cores: tuple[tuple[str, ...], ...]
    minimal_cores: tuple[tuple[str, ...], ...]
    is_psc_witness_failure: bool
    elapsed_ms: float = field(default=0.0, compare=False)


@dataclass(frozen=True)
class CoverReport:
    structure: str
    sentence: str
    k: int
    models_sentence: bool
    cover: tuple[tuple[str, ...], ...] | None
    complete: bool = True
    elapsed_ms: float = field(default=0.0, compare=False)

    @property
    def found(self) -> bool:
        return self.cover is not None


@dataclass(frozen=True)
class CounterexampleReport:
    query: str  # psc | pce | duality | equiv
    params: dict
    outcome: str  # FOUND | NONE_UP_TO | EXHAUSTED
    bound: int
    structure: FiniteStructure | None = None
    index: int | None = None
    details: dict = field(default_factory=dict)
    checked: int | None = None
    elapsed_ms: float = field(default=0.0, compare=False)

    @property
    def found(self) -> bool:
        return self.outcome == FOUND

    @property
    def search_complete(self) -> bool:
        return self.outcome != EXHAUSTED


# ---------------------------------------------------------------------------
# Cores


class _SubstructureTruth:
    """Caches ``M[X] |= T`` per universe subset ``X``."""

    def __init__(self, m: FiniteStructure, theory: Theory):
        self.m = m
        self.theory = theory
        self.cache: dict[frozenset, bool] = {}

    def __call__(self, x: frozenset) -> bool:
        hit = self.cache.get(x)
        if hit is None:
            hit = self.cache[x] = models_theory(induced_substructure(self.m, x), self.theory)
        return hit

    def is_core(self, c: Iterable[str]) -> bool:
        return all(self(x) for x in substructure_universes(self.m, c))


def _member_truth(m: FiniteStructure, s: Formula | Theory | Sequence[Formula]) -> _SubstructureTruth:
    theory = as_theory(s)
    truth = _SubstructureTruth(m, theory)
    if not truth(frozenset(m.universe)):
        raise LogicError(f"core undefined for non-members: {m.name} does not model the theory")
    return truth


def is_core(m: FiniteStructure, c: Iterable[str], s: Formula | Theory | Sequence[Formula]) -> bool:
    """Whether every substructure of ``m`` containing ``c`` models ``s``.

    ``m`` itself must model ``s``.
    """
    return _member_truth(m, s).is_core(set(c))


def _subsets_up_to(universe: Sequence[str], k: int) -> Iterable[tuple[str, ...]]:
    for r in range(min(k, len(universe)) + 1):
        yield from itertools.combinations(universe, r)


def minimal_cores(m: FiniteStructure, s: Formula | Theory | Sequence[Formula], k_max: int) -> CoreReport:
    """All cores of size at most ``k_max`` and the inclusion-minimal ones among them."""
    t0 = time.perf_counter()
    theory = as_theory(s)
    truth = _member_truth(m, theory)
    cores = [c for c in _subsets_up_to(m.universe, k_max) if truth.is_core(c)]
    core_sets = [frozenset(c) for c in cores]
    minimal = [c for c, cs in zip(cores, core_sets) if not any(o < cs for o in core_sets)]
    return CoreReport(
        structure=m.name,
        theory=tuple(str(x) for x in theory),
        k=k_max,
        cores=tuple(cores),
        minimal_cores=tuple(minimal),
        is_psc_witness_failure=not cores,
        elapsed_ms=(time.perf_counter() - t0) * 1000,
    )


def witness_sets_are_cores(m: FiniteStructure, pf: PrenexForm | Formula) -> bool:
    """Check that every witness tuple of an exists-forall sentence is a core."""
    if not isinstance(pf, PrenexForm):
        pf = to_prenex(pf)
    sentence = pf.to_formula()
    truth = _member_truth(m, sentence)
    return all(truth.is_core(t) for t in witnesses(m, pf).tuples)


# ---------------------------------------------------------------------------
# Covers


def is_k_ary_covered_extension(m: FiniteStructure, r: Sequence[FiniteStructure], k: int) -> bool:
    if not r:
        raise LogicError("a cover must be a nonempty collection")
    for n in r:
        if n.vocab != m.vocab:
            raise LogicError("cover members must share the vocabulary of the extension")
        if not is_substructure(n, m):
            return False
    universes = [frozenset(n.universe) for n in r]
    return all(any(set(a) <= u for u in universes) for a in _subsets_up_to(m.universe, k))


def pce_counterexample_at(phi: Formula, k: int, m: FiniteStructure) -> CoverReport:
    """Look for a k-ary cover of ``m`` by models of ``phi`` while ``m`` fails ``phi``.

    Every member of such a cover is an induced substructure, so it is enough
    to find, for each set ``A`` of at most ``k`` elements, one ``X``
    containing ``A`` with ``m[X] |= phi``; the search over ``A`` is
    therefore complete. Members are the first such ``X`` per ``A``.
    """
    t0 = time.perf_counter()
    truth = _SubstructureTruth(m, as_theory(phi))
    models = truth(frozenset(m.universe))
    cover: list[tuple[str, ...]] | None = None
    if not models:
        cover = []
        for a in _subsets_up_to(m.universe, k):
            x = next((x for x in substructure_universes(m, a) if truth(x)), None)
            if x is None:
                cover = None
                break
            member = tuple(sorted(x))
            if member not in cover:
                cover.append(member)
    return CoverReport(
        structure=m.name,
        sentence=str(phi),
        k=k,
        models_sentence=models,
        cover=tuple(cover) if cover is not None else None,
        elapsed_ms=(time.perf_counter() - t0) * 1000,
    )


# ---------------------------------------------------------------------------
# Per-structure checks used by the searches (module level so they pickle)


def _psc_check(payload, m: FiniteStructure) -> dict | None:
    theory, k = payload
    if not models_theory(m, theory):
        return None
    rep = minimal_cores(m, theory, k)
    if rep.is_psc_witness_failure:
        return {"cores": []}
    return None


def _pce_check(payload, m: FiniteStructure) -> dict | None:
    phi, k = payload
    rep = pce_counterexample_at(phi, k, m)
    if rep.found:
        return {"cover": [list(x) for x in rep.cover]}
    return None


def _duality_check(payload, m: FiniteStructure) -> dict | None:
    phi, k = payload
    left = models_theory(m, phi) and minimal_cores(m, phi, k).is_psc_witness_failure
    right_rep = pce_counterexample_at(Not(phi), k, m)
    if left != right_rep.found:
        return {"psc_failure": left, "negation_cover": right_rep.found}
    return None


def _equiv_check(payload, m: FiniteStructure) -> dict | None:
    f, g = payload
    a, b = evaluate(m, f), evaluate(m, g)
    if a != b:
        return {"first": a, "second": b}
    return None


_CHECKS: dict[str, Callable[[Any, FiniteStructure], dict | None]] = {
    "psc": _psc_check,
    "pce": _pce_check,
    "duality": _duality_check,
    "equiv": _equiv_check,
}


def _scan(kind: str, payload, vocab: Vocabulary, max_size: int, dedup: bool,
          start: int, stop: int, deadline: float | None):
    check = _CHECKS[kind]
    n = 0
    for idx, m in indexed_structures(vocab, max_size, dedup, start, stop):
        if deadline is not None and time.monotonic() > deadline:
            return ("timeout", n)
        n += 1
        details = check(payload, m)
        if details is not None:
            return ("hit", idx, details)
    return ("none", n)


def _chunks(total: int, jobs: int) -> list[tuple[int, int]]:
    if jobs <= 1:
        return [(0, total)]
    size = max(256, -(-total // (jobs * 8)))
    return [(lo, min(lo + size, total)) for lo in range(0, total, size)]


def _run_search(kind: str, payload, vocab: Vocabulary, budget: SearchBudget, params: dict, jobs: int) -> CounterexampleReport:
    t0 = time.perf_counter()
    deadline = time.monotonic() + budget.max_seconds if budget.max_seconds is not None else None
    total = total_count(vocab, budget.max_universe_size)
    chunks = _chunks(total, jobs)
    args = (kind, payload, vocab, budget.max_universe_size, budget.dedup_isomorphic)
    if jobs <= 1:
        results: Iterable = (_scan(*args, lo, hi, deadline) for lo, hi in chunks)
        pool = None
    else:
        pool = ProcessPoolExecutor(max_workers=jobs, mp_context=multiprocessing.get_context("fork"))
        futures = [pool.submit(_scan, *args, lo, hi, deadline) for lo, hi in chunks]
        results = (f.result() for f in futures)
    checked = 0
    outcome, hit = NONE_UP_TO, None
    try:
        # chunks are consumed in index order, so the first hit is the
        # canonically first one no matter how the work was scheduled
        for res in results:
            if res[0] == "hit":
                outcome, hit = FOUND, res
                break
            if res[0] == "timeout":
                outcome = EXHAUSTED
                break
            checked += res[1]
    finally:
        if pool is not None:
            pool.shutdown(wait=True, cancel_futures=True)
    elapsed = (time.perf_counter() - t0) * 1000
    if outcome == FOUND:
        _, idx, details = hit
        s, code = locate(vocab, idx)
        m = structure_from_code(vocab, s, code)
        return CounterexampleReport(kind, params, FOUND, budget.max_universe_size, m, idx, details, elapsed_ms=elapsed)
    return CounterexampleReport(kind, params, outcome, budget.max_universe_size,
                                checked=checked if outcome == NONE_UP_TO else None, elapsed_ms=elapsed)


# ---------------------------------------------------------------------------
# Vocabulary inference


def infer_vocabulary(formulas: Iterable[Formula], name: str = "sig") -> Vocabulary:
    """Smallest vocabulary the formulas are well-formed over."""
    rels: dict[str, int] = {}
    consts: set[str] = set()

    def walk(f: Formula) -> None:
        if isinstance(f, Atom):
            if rels.setdefault(f.rel, len(f.args)) != len(f.args):
                raise LogicError(f"relation {f.rel} used with arities {rels[f.rel]} and {len(f.args)}")
        for child in _children(f):
            walk(child)

    for f in formulas:
        walk(f)
        consts |= constants_of(f)
    return Vocabulary(tuple(sorted(rels.items())), tuple(sorted(consts)), name=name)


def _children(f: Formula) -> list[Formula]:
    if isinstance(f, (Atom, Eq)):
        return []
    if hasattr(f, "body"):
        return [f.body]
    return [f.left, f.right]


def _resolve_vocab(formulas: Sequence[Formula], vocab: Vocabulary | None) -> Vocabulary:
    if vocab is None:
        return infer_vocabulary(formulas, name="graph" if all(_only_graph(f) for f in formulas) else "sig")
    for f in formulas:
        problems = check_formula(f, vocab)
        if problems:
            raise LogicError(f"vocabulary mismatch: {'; '.join(problems)}")
    return vocab


def _only_graph(f: Formula) -> bool:
    v = infer_vocabulary([f])
    return v.relations == (("E", 2),) and not v.constants


# ---------------------------------------------------------------------------
# Searches


def psc_counterexample_search(phi: Formula | Theory, k: int, budget: SearchBudget,
                              vocab: Vocabulary | None = None, jobs: int = 1) -> CounterexampleReport:
    """First structure (canonical order) modelling ``phi`` with no core of size ``<= k``."""
    theory = as_theory(phi)
    vocab = _resolve_vocab(list(theory), vocab)
    params = {"sentence": [str(s) for s in theory], "k": k, "vocab": _vocab_params(vocab), **_budget_params(budget)}
    return _run_search("psc", (theory, k), vocab, budget, params, jobs)


def pce_counterexample_search(phi: Formula, k: int, budget: SearchBudget,
                              vocab: Vocabulary | None = None, jobs: int = 1) -> CounterexampleReport:
    """First structure failing ``phi`` but k-ary covered by models of ``phi``."""
    _require_sentence(phi)
    vocab = _resolve_vocab([phi], vocab)
    params = {"sentence": str(phi), "k": k, "vocab": _vocab_params(vocab), **_budget_params(budget)}
    return _run_search("pce", (phi, k), vocab, budget, params, jobs)


def duality_check(phi: Formula, k: int, budget: SearchBudget,
                  vocab: Vocabulary | None = None, jobs: int = 1) -> CounterexampleReport:
    """Check [M |= phi with no <=k core] <=> [~phi has a k-ary cover of M] on every M."""
    _require_sentence(phi)
    vocab = _resolve_vocab([phi], vocab)
    params = {"sentence": str(phi), "k": k, "vocab": _vocab_params(vocab), **_budget_params(budget)}
    return _run_search("duality", (phi, k), vocab, budget, params, jobs)


def bounded_equiv(f: Formula, g: Formula, budget: SearchBudget,
                  vocab: Vocabulary | None = None, jobs: int = 1) -> CounterexampleReport:
    """First structure on which the sentences ``f`` and ``g`` disagree."""
    _require_sentence(f)
    _require_sentence(g)
    if vocab is None:
        vf, vg = infer_vocabulary([f]), infer_vocabulary([g])
        merged = dict(vf.relations)
        for r, a in vg.relations:
            if merged.setdefault(r, a) != a:
                raise LogicError(f"vocabulary mismatch: {r} has arity {merged[r]} and {a}")
        vocab = _resolve_vocab([f, g], None)
    else:
        vocab = _resolve_vocab([f, g], vocab)
    params = {"first": str(f), "second": str(g), "vocab": _vocab_params(vocab), **_budget_params(budget)}
    return _run_search("equiv", (f, g), vocab, budget, params, jobs)


def _require_sentence(f: Formula) -> None:
    if not isinstance(f, Formula):
        raise LogicError(f"expected a single sentence, got {type(f).__name__}")
    if free_variables(f):
        raise LogicError(f"expected a sentence; free variables {sorted(free_variables(f))}")


def _vocab_params(vocab: Vocabulary) -> dict:
    return {"relations": [f"{r}/{a}" for r, a in vocab.relations], "constants": list(vocab.constants)}


def _budget_params(budget: SearchBudget) -> dict:
    return {"max_size": budget.max_universe_size, "dedup": budget.dedup_isomorphic}


# ---------------------------------------------------------------------------
# Existential closure


def _embeds_over(r: FiniteStructure, m: FiniteStructure, fixed: Sequence[str], extra: Sequence[str]) -> bool:
    """Is there an embedding of r[fixed + extra] into m that is the identity on ``fixed``?"""
    domain = list(fixed) + list(extra)
    free_targets = [e for e in m.universe if e not in set(fixed)]
    for image in itertools.permutations(free_targets, len(extra)):
        h = dict(zip(fixed, fixed))
        h.update(zip(extra, image))
        ok = True
        for rel, ar in r.vocab.relations:
            for t in itertools.product(domain, repeat=ar):
                if (t in r.tables[rel]) != (tuple(h[e] for e in t) in m.tables[rel]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


def is_existentially_closed_in(m: FiniteStructure, r: FiniteStructure) -> bool:
    """Decide whether ``m`` is existentially closed in its extension ``r``.

    Uses the finite characterization: for every ``A`` inside ``m`` and every
    set ``B`` of new elements of ``r``, ``r[A + B]`` embeds into ``m``
    over ``A``.
    """
    if not is_substructure(m, r):
        raise LogicError(f"{m.name} is not a substructure of {r.name}")
    base = set(m.universe)
    new = [e for e in r.universe if e not in base]
    consts = sorted(m.constant_elements())
    for na in range(len(m.universe) + 1):
        for a in itertools.combinations(m.universe, na):
            fixed = sorted(set(a) | set(consts))
            for nb in range(1, len(new) + 1):
                for b in itertools.combinations(new, nb):
                    if not _embeds_over(r, m, fixed, b):
                        return False
    return True


def existential_closure_oracle(m: FiniteStructure, r: FiniteStructure, max_vars: int = 2, max_params: int = 2) -> bool:
    """Test ``m`` e.c. in ``r`` straight from the definition, on bounded formulas.

    Every existential formula with at most ``max_vars`` quantified variables
    and ``max_params`` parameters from ``m`` is a disjunction of formulas
    ``exists y. delta(y, a)`` with ``delta`` a complete conjunction of
    literals; each such formula true in ``r`` must be true in ``m``.
    """
    if not is_substructure(m, r):
        raise LogicError(f"{m.name} is not a substructure of {r.name}")
    for np_ in range(max_params + 1):
        for params in itertools.product(m.universe, repeat=np_):
            rx = expand_with_parameters(r, params)
            mx = expand_with_parameters(m, params)
            pnames = list(rx.vocab.constants)
            for nv in range(max_vars + 1):
                ys = [f"y{i}" for i in range(nv)]
                for bs in itertools.product(r.universe, repeat=nv):
                    delta = _diagram(rx, ys, bs, pnames)
                    sentence = delta
                    for y in reversed(ys):
                        sentence = Exists(y, sentence)
                    assert evaluate(rx, sentence)
                    if not evaluate(mx, sentence):
                        return False
    return True


def _diagram(s: FiniteStructure, ys: Sequence[str], bs: Sequence[str], consts: Sequence[str]) -> Formula:
    terms = [Var(y) for y in ys] + [Const(c) for c in consts]
    value = dict(zip(ys, bs))
    value.update({c: s.constants[c] for c in consts})
    val = lambda t: value[t.name]
    literals: list[Formula] = []
    for i, t1 in enumerate(terms):
        for t2 in terms[i + 1:]:
            lit = Eq(t1, t2)
            literals.append(lit if val(t1) == val(t2) else Not(lit))
    for rel, ar in s.vocab.relations:
        for args in itertools.product(terms, repeat=ar):
            lit = Atom(rel, tuple(args))
            literals.append(lit if tuple(val(t) for t in args) in s.tables[rel] else Not(lit))
    if not literals:
        placeholder = terms[0] if terms else None
        return Eq(placeholder, placeholder) if placeholder is not None else _TRUE
    return conj(literals)


_TRUE = Exists("_t", Eq(Var("_t"), Var("_t")))


# ---------------------------------------------------------------------------
# Theories with free variables


def ground_free_variables(formulas: Sequence[Formula], m: FiniteStructure,
                          assignment: dict[str, str]) -> tuple[Theory, FiniteStructure]:
    """Turn a theory with free variables into a theory over fresh constants.

    Free variables, sorted by name, are replaced by the constants that
    :func:`expand_with_parameters` introduces for their assigned elements.
    """
    xs = sorted(set().union(*(free_variables(f) for f in formulas)))
    missing = [x for x in xs if x not in assignment]
    if missing:
        raise LogicError(f"no element assigned to free variables {missing}")
    expanded = expand_with_parameters(m, [assignment[x] for x in xs])
    fresh = expanded.vocab.constants[len(m.vocab.constants):]
    mapping = {x: Const(c) for x, c in zip(xs, fresh)}
    return Theory(tuple(substitute(f, mapping) for f in formulas)), expanded
