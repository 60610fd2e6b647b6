import itertools

import pytest

from preslab import corpus
from preslab.analysis import (
    FOUND,
    NONE_UP_TO,
    bounded_equiv,
    duality_check,
    existential_closure_oracle,
    ground_free_variables,
    infer_vocabulary,
    is_core,
    is_existentially_closed_in,
    is_k_ary_covered_extension,
    minimal_cores,
    pce_counterexample_at,
    pce_counterexample_search,
    psc_counterexample_search,
    witness_sets_are_cores,
)
from preslab.evaluator import evaluate, models_theory
from preslab.logic import GRAPH, FiniteStructure, LogicError, Vocabulary
from preslab.normal_forms import to_prenex
from preslab.substructures import SearchBudget, enumerate_structures, induced_substructure, substructure_universes
from preslab.syntax import parse_formula

from oracles import brute_is_core, digraphs_up_to, substitute_eval

OUT_EDGE = corpus.out_edge()
DOMINATION = corpus.domination()
SMALL = list(enumerate_structures(GRAPH, SearchBudget(3)))


def p(text):
    return parse_formula(text, GRAPH)


# -- cores ---------------------------------------------------------------------


def test_is_core_examples():
    g = corpus.disjoint_cycles([3, 3])
    tri = g.universe[:3]
    assert is_core(g, tri, corpus.has_k_cycle(3))
    c4 = corpus.cycle(4)
    assert not any(is_core(c4, c, OUT_EDGE) for c in itertools.combinations(c4.universe, 3))
    assert is_core(c4, c4.universe, OUT_EDGE)
    assert is_core(corpus.linear_order(3), (), DOMINATION)


def test_is_core_rejects_non_members():
    with pytest.raises(LogicError, match="core undefined for non-members"):
        is_core(corpus.cycle(3), (), DOMINATION)


def test_minimal_cores_examples():
    rep = minimal_cores(corpus.loop_pair(), corpus.loop_contrast(), 2)
    assert rep.minimal_cores == (("a", "b"),)
    assert all(len(c) == 2 for c in rep.cores) and not rep.is_psc_witness_failure
    assert minimal_cores(corpus.loop_pair(), corpus.loop_contrast(), 1).is_psc_witness_failure

    c4 = corpus.cycle(4)
    rep = minimal_cores(c4, OUT_EDGE, 4)
    assert rep.cores == (c4.universe,) and rep.minimal_cores == (c4.universe,)

    rep = minimal_cores(corpus.linear_order(3), DOMINATION, 1)
    assert rep.cores == ((), ("e0",), ("e1",), ("e2",))
    assert rep.minimal_cores == ((),)


def test_cores_agree_with_brute_force():
    for m in SMALL:
        for name, f in [("out_edge", OUT_EDGE), ("domination", DOMINATION), ("has_1_cycle", corpus.has_k_cycle(1))]:
            if not substitute_eval(m, f):
                continue
            for r in range(len(m) + 1):
                for c in itertools.combinations(m.universe, r):
                    assert is_core(m, c, f) == brute_is_core(m, c, [f]), (name, m, c)


def test_core_monotonicity():
    sentences = [OUT_EDGE, DOMINATION, corpus.has_k_cycle(2), p("forall x. E(x,x) -> exists y. x != y & E(x,y)")]
    for m in SMALL:
        for f in sentences:
            if not evaluate(m, f):
                continue
            subsets = [frozenset(c) for r in range(len(m) + 1) for c in itertools.combinations(m.universe, r)]
            cores = {c for c in subsets if is_core(m, c, f)}
            for c in cores:
                assert all(d in cores for d in subsets if c <= d)


def test_minimal_cores_report_invariants():
    for m in SMALL:
        if not evaluate(m, OUT_EDGE):
            continue
        rep = minimal_cores(m, OUT_EDGE, 3)
        assert all(is_core(m, c, OUT_EDGE) and len(c) <= 3 for c in rep.cores)
        for c in rep.minimal_cores:
            assert not any(set(d) < set(c) for d in rep.cores)
        assert rep.is_psc_witness_failure == (not rep.cores)


def test_witness_sets_are_cores_examples():
    assert witness_sets_are_cores(corpus.disjoint_cycles([3, 3]), corpus.has_k_cycle(3))
    assert witness_sets_are_cores(corpus.linear_order(3), DOMINATION)
    for m in SMALL:
        if evaluate(m, DOMINATION):
            assert witness_sets_are_cores(m, DOMINATION)


# -- covers --------------------------------------------------------------------


def test_covered_extension_examples():
    m = corpus.cycle(4)
    for r in (1, 2, 3):
        members = [induced_substructure(m, x) for x in itertools.combinations(m.universe, r)]
        for k in range(r + 1):
            assert is_k_ary_covered_extension(m, members, k)
    b2 = corpus.bare_set(2)
    singles = [induced_substructure(b2, [e]) for e in b2.universe]
    assert is_k_ary_covered_extension(b2, singles, 1)
    assert not is_k_ary_covered_extension(b2, singles, 2)
    with pytest.raises(LogicError):
        is_k_ary_covered_extension(b2, [], 1)


def test_non_substructure_member_is_not_a_cover():
    m = corpus.cycle(4)
    flipped = FiniteStructure(GRAPH, ["e0", "e1"], {"E": [("e1", "e0")]})
    assert not is_k_ary_covered_extension(m, [flipped, m], 1)


def test_pce_at_examples():
    b2 = corpus.bare_set(2)
    phi = corpus.fewer_than_k(2)
    rep = pce_counterexample_at(phi, 1, b2)
    assert rep.found and rep.cover == (("e0",), ("e1",))
    assert not pce_counterexample_at(phi, 2, b2).found
    sink = p("exists x. forall y. ~E(x,y)")
    rep = pce_counterexample_at(sink, 3, corpus.cycle(4))
    assert rep.found and not rep.models_sentence
    assert not pce_counterexample_at(OUT_EDGE, 1, corpus.cycle(4)).found


def test_found_covers_are_valid():
    phi = p("exists x. forall y. ~E(x,y)")
    for m in SMALL:
        for k in (1, 2):
            rep = pce_counterexample_at(phi, k, m)
            if rep.found:
                members = [induced_substructure(m, x) for x in rep.cover]
                assert is_k_ary_covered_extension(m, members, k)
                assert all(evaluate(n, phi) for n in members) and not evaluate(m, phi)


# -- searches ------------------------------------------------------------------


def test_psc_search_examples():
    rep = psc_counterexample_search(OUT_EDGE, 3, SearchBudget(4))
    assert rep.outcome == FOUND
    assert evaluate(rep.structure, OUT_EDGE)
    assert minimal_cores(rep.structure, OUT_EDGE, 3).is_psc_witness_failure
    assert psc_counterexample_search(DOMINATION, 1, SearchBudget(4)).outcome == NONE_UP_TO
    assert psc_counterexample_search(corpus.has_k_cycle(3), 3, SearchBudget(4)).outcome == NONE_UP_TO


def test_pce_search_examples():
    rep = pce_counterexample_search(corpus.fewer_than_k(3), 2, SearchBudget(4))
    assert rep.outcome == FOUND and len(rep.structure) == 3
    assert pce_counterexample_search(corpus.fewer_than_k(3), 3, SearchBudget(4)).outcome == NONE_UP_TO
    assert pce_counterexample_search(corpus.no_k_cycle(3), 3, SearchBudget(4)).outcome == NONE_UP_TO


@pytest.mark.parametrize("k", [2, 3])
def test_pce_hierarchy_strictness(k):
    phi = corpus.fewer_than_k(k)
    for l in range(1, k):
        rep = pce_counterexample_search(phi, l, SearchBudget(4))
        assert rep.found and len(rep.structure) == k
    assert pce_counterexample_search(phi, k, SearchBudget(4)).outcome == NONE_UP_TO


def test_duality_examples():
    assert duality_check(OUT_EDGE, 3, SearchBudget(4)).outcome == NONE_UP_TO
    assert duality_check(DOMINATION, 1, SearchBudget(3)).outcome == NONE_UP_TO
    assert duality_check(corpus.fewer_than_k(2), 0, SearchBudget(3)).outcome == NONE_UP_TO
    assert duality_check(corpus.fewer_than_k(2), 1, SearchBudget(3), vocab=GRAPH).outcome == NONE_UP_TO


@pytest.mark.slow
@pytest.mark.parametrize("name", [n for n, _ in corpus.sentence_corpus()])
def test_duality_over_corpus(name):
    f = dict(corpus.sentence_corpus())[name]
    for k in range(4):
        assert duality_check(f, k, SearchBudget(4)).outcome == NONE_UP_TO, k


def test_bounded_equiv_examples():
    rep = bounded_equiv(p("exists x. E(x,x)"), p("forall x. E(x,x)"), SearchBudget(2))
    assert rep.found and len(rep.structure) == 2 and len(rep.structure.tables["E"]) == 1
    assert bounded_equiv(OUT_EDGE, OUT_EDGE, SearchBudget(3)).outcome == NONE_UP_TO
    assert bounded_equiv(DOMINATION, to_prenex(DOMINATION).to_formula(), SearchBudget(3)).outcome == NONE_UP_TO
    with pytest.raises(LogicError):
        bounded_equiv(p("E(x,x)"), OUT_EDGE, SearchBudget(2))


def test_budget_exhaustion_is_flagged():
    rep = psc_counterexample_search(corpus.has_k_cycle(3), 3, SearchBudget(4, max_seconds=0.0))
    assert rep.outcome == "budget_exhausted" and not rep.search_complete


def test_search_vocabulary_inference():
    assert infer_vocabulary([OUT_EDGE]).relations == (("E", 2),)
    assert infer_vocabulary([corpus.fewer_than_k(2)]).relations == ()
    vocab = Vocabulary((("P", 1),), ("c0",))
    f = parse_formula("exists x. P(x) & x != c0", vocab)
    assert infer_vocabulary([f]) == vocab
    rep = psc_counterexample_search(f, 0, SearchBudget(3))
    assert rep.found and rep.structure.vocab == vocab and len(rep.structure) == 2
    assert minimal_cores(rep.structure, f, 0).is_psc_witness_failure
    assert psc_counterexample_search(f, 1, SearchBudget(3)).outcome == NONE_UP_TO


def test_constants_join_every_core_candidate():
    vocab = Vocabulary((("E", 2),), ("c0",))
    m = FiniteStructure(vocab, "ab", {"E": [("a", "a")]}, {"c0": "a"})
    f = parse_formula("E(c0,c0)", vocab)
    assert is_core(m, (), f)
    assert minimal_cores(m, f, 0).minimal_cores == ((),)


# -- existential closure -------------------------------------------------------


def test_ec_examples():
    edge = FiniteStructure(GRAPH, "ab", {"E": [("a", "b")]})
    lone = induced_substructure(edge, {"a"})
    assert not is_existentially_closed_in(lone, edge)
    assert not existential_closure_oracle(lone, edge)
    # "exists y. y != a" holds in the bigger structure only
    two = FiniteStructure(GRAPH, "ab")
    one = induced_substructure(two, {"a"})
    assert not is_existentially_closed_in(one, two) and not existential_closure_oracle(one, two)
    c4 = corpus.cycle(4)
    assert is_existentially_closed_in(c4, c4)
    with pytest.raises(LogicError):
        is_existentially_closed_in(FiniteStructure(GRAPH, "ab", {"E": [("b", "a")]}), edge)


def test_ec_agrees_with_oracle_on_two_element_extensions():
    for r in digraphs_up_to(2):
        for x in substructure_universes(r):
            m = induced_substructure(r, x)
            assert is_existentially_closed_in(m, r) == existential_closure_oracle(m, r), (r, x)


def test_finite_proper_extensions_are_never_closed():
    for r in digraphs_up_to(3):
        for x in substructure_universes(r):
            m = induced_substructure(r, x)
            assert is_existentially_closed_in(m, r) == (len(m) == len(r))


def test_oracle_is_weaker_with_fewer_parameters():
    # with no parameters and one variable, only loop types of single points are compared
    r = FiniteStructure(GRAPH, "abc")
    m = induced_substructure(r, {"a", "b"})
    assert existential_closure_oracle(m, r, max_vars=1, max_params=0)
    assert not existential_closure_oracle(m, r, max_vars=1, max_params=2)


# -- grounding -----------------------------------------------------------------


def test_ground_free_variables():
    f = corpus.phi_n(2)
    theory, expanded = ground_free_variables([f], corpus.disjoint_cycles([1, 2, 3]), {"x": "c2_0"})
    assert expanded.vocab.constants == ("c1",)
    assert models_theory(expanded, theory)
    theory, expanded = ground_free_variables([f], corpus.disjoint_cycles([1, 2, 3]), {"x": "c0_0"})
    assert not models_theory(expanded, theory)
    with pytest.raises(LogicError):
        ground_free_variables([f], corpus.cycle(3), {})


def test_grounded_cores_match_relativized_truth():
    # once x is a constant, cores of M for phi_1 must contain x's image
    m = corpus.disjoint_cycles([1, 3])
    theory, expanded = ground_free_variables([corpus.phi_n(1)], m, {"x": "c1_0"})
    rep = minimal_cores(expanded, theory, 1)
    assert rep.minimal_cores == ((),)
