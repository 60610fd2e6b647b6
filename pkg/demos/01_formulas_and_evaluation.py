"""
Formulas, structures and truth
==============================

Parse a sentence, build a few small digraphs and evaluate it.
"""

from preslab import GRAPH, evaluate, parse_formula, print_formula, witnesses
from preslab import corpus

# a vertex with an edge to every vertex (itself included)
dom = parse_formula("exists x. forall y. E(x,y)", GRAPH)
print(print_formula(dom))

# the directed 3-cycle has no such vertex, the order 0 <= 1 <= 2 does
for m in (corpus.cycle(3), corpus.linear_order(3)):
    print(m.name, evaluate(m, dom))

# witnesses: every value of x that makes the rest true
print(witnesses(corpus.linear_order(3), dom).tuples)

# free variables need an assignment
edge = parse_formula("E(x,y)", GRAPH)
print(evaluate(corpus.cycle(3), edge, {"x": "e0", "y": "e1"}))
