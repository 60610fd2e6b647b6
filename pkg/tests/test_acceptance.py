"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run directly for a plain report::

    python3 tests/test_acceptance.py

Under pytest the lines are collected and shown in the terminal summary.
"""
import contextlib
import io
import itertools
import time

from preslab import corpus
from preslab.analysis import (
    NONE_UP_TO,
    bounded_equiv,
    duality_check,
    existential_closure_oracle,
    is_core,
    is_existentially_closed_in,
    minimal_cores,
    pce_counterexample_search,
    witness_sets_are_cores,
)
from preslab.cli import run
from preslab.evaluator import evaluate
from preslab.logic import GRAPH, Implies, forall
from preslab.normal_forms import relativize, to_prenex
from preslab.substructures import SearchBudget, enumerate_structures, induced_substructure, substructure_universes

from oracles import digraphs_up_to

LINES: list[str] = []


@contextlib.contextmanager
def criterion(number: int, title: str, limit_s: float):
    """Time the body; a failure or an overrun marks the criterion FAIL."""
    t0 = time.perf_counter()
    status, note = "FAIL", ""
    try:
        yield
        elapsed = time.perf_counter() - t0
        if elapsed <= limit_s:
            status = "PASS"
        else:
            note = f" over the {limit_s:g} s limit"
    except AssertionError as exc:
        elapsed = time.perf_counter() - t0
        note = " " + (str(exc).splitlines() or [""])[0]
        raise AssertionError(f"criterion {number}: {exc}") from exc
    finally:
        elapsed = time.perf_counter() - t0
        line = f"criterion {number:>2} {title}: {status} ({elapsed:.1f} s){note}"
        LINES.append(line)
        print(line)
    assert status == "PASS", line


def test_criterion_01_loop_pair_core_size():
    with criterion(1, "loop-pair minimal core", 1.0):
        rep = minimal_cores(corpus.loop_pair(), corpus.loop_contrast(), 2)
        assert rep.minimal_cores == (("a", "b"),), rep.minimal_cores
        assert not any(len(c) <= 1 for c in rep.cores)


def test_criterion_02_cycle_only_core_is_everything():
    with criterion(2, "cycles have only the full core", 5.0):
        out_edge = corpus.out_edge()
        for n in (3, 4, 5):
            c = corpus.cycle(n)
            rep = minimal_cores(c, out_edge, n)
            assert rep.cores == (c.universe,), (n, rep.cores)


def test_criterion_03_witnesses_are_cores():
    with criterion(3, "witness sets are cores", 120.0):
        for f in (corpus.domination(), corpus.has_k_cycle(3)):
            for m in enumerate_structures(GRAPH, SearchBudget(4)):
                if evaluate(m, f):
                    assert witness_sets_are_cores(m, f), (str(f), m.name)


def test_criterion_04_duality():
    with criterion(4, "per-structure duality", 600.0):
        sentences = [corpus.domination(), corpus.out_edge(), corpus.fewer_than_k(2), corpus.has_k_cycle(3)]
        for f in sentences:
            for k in range(4):
                rep = duality_check(f, k, SearchBudget(4), vocab=GRAPH)
                assert rep.outcome == NONE_UP_TO, (str(f), k, rep.outcome, rep.details)


def test_criterion_05_pce_hierarchy():
    with criterion(5, "cover hierarchy is strict", 60.0):
        failures = []
        for k in (1, 2, 3):
            phi = corpus.fewer_than_k(k)
            below = pce_counterexample_search(phi, k - 1, SearchBudget(4))
            if not (below.found and len(below.structure) == k):
                size = len(below.structure) if below.found else None
                failures.append(f"k={k}: parameter {k - 1} gave {below.outcome} (size {size})")
            at = pce_counterexample_search(phi, k, SearchBudget(4))
            if at.outcome != NONE_UP_TO:
                failures.append(f"k={k}: parameter {k} gave {at.outcome}")
        assert not failures, "; ".join(failures)


def test_criterion_06_relativization():
    with criterion(6, "relativization law", 300.0):
        named = corpus.sentence_corpus()
        assert len(named) == 20
        for name, f in named:
            for width in (1, 2, 3):
                ws = [f"w{i}" for i in range(1, width + 1)]
                g = relativize(f, ws)
                for m in digraphs_up_to(3):
                    for a in itertools.product(m.universe, repeat=width):
                        left = evaluate(m, g, dict(zip(ws, a)))
                        right = evaluate(induced_substructure(m, a), f)
                        assert left == right, (name, m.name, a)


def test_criterion_07_short_cycle_replay_and_phi_monotonicity():
    with criterion(7, "short cycles give no cores; phi_n monotone", 300.0):
        g = corpus.disjoint_cycles([1, 2, 3, 4, 5])
        theory = corpus.psi_prefix(4)
        short = [e for e in g.universe if e.split("_")[0] in ("c0", "c1", "c2")]
        for r in range(len(short) + 1):
            for s in itertools.combinations(short, r):
                assert not is_core(g, s, theory), s
        laws = [forall(["x"], Implies(corpus.phi_n(n), corpus.phi_n(m))) for n in range(1, 5) for m in range(1, n + 1)]
        for d in enumerate_structures(GRAPH, SearchBudget(4)):
            for law in laws:
                assert evaluate(d, law), (d.name, str(law))


def test_criterion_08_prenex_soundness():
    with criterion(8, "prenex form is equivalent", 120.0):
        for name, f in corpus.sentence_corpus():
            rep = bounded_equiv(f, to_prenex(f).to_formula(), SearchBudget(3), vocab=GRAPH)
            assert rep.outcome == NONE_UP_TO, name


def test_criterion_09_existential_closure_oracle():
    with criterion(9, "e.c. decision matches formula oracle", 120.0):
        pairs = 0
        for r in enumerate_structures(GRAPH, SearchBudget(3, dedup_isomorphic=False)):
            for x in substructure_universes(r):
                m = induced_substructure(r, x)
                assert is_existentially_closed_in(m, r) == existential_closure_oracle(m, r), (r.name, sorted(x))
                pairs += 1
        assert pairs > 0


SEARCH_ARGV = [
    ["psc-search", "--sentence", "forall x. exists y. E(x,y)", "--k", "3", "--max-size", "4"],
    ["psc-search", "--sentence", "has_k_cycle:3", "--k", "3", "--max-size", "4"],
    ["pce-search", "--sentence", "fewer_than_k:3", "--k", "2", "--max-size", "4"],
    ["pce-search", "--sentence", "no_k_cycle:3", "--k", "3", "--max-size", "3"],
    ["duality-test", "--sentence", "forall x. exists y. E(x,y)", "--k", "3", "--max-size", "4"],
    ["equiv", "--sentence", "exists x. E(x,x)", "--sentence", "forall x. E(x,x)", "--max-size", "3"],
]


def _cli_bytes(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = run(argv)
    return code, buf.getvalue().encode()


def test_criterion_10_parallel_determinism():
    with criterion(10, "search output independent of --jobs", 300.0):
        for argv in SEARCH_ARGV:
            one = _cli_bytes(argv + ["--jobs", "1"])
            eight = _cli_bytes(argv + ["--jobs", "8"])
            assert one == eight, argv[:3]


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
