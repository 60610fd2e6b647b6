"""
Structure files and reports
===========================
"""

from preslab import SearchBudget, corpus, parse_structures, print_structure, render_report
from preslab import bounded_equiv, parse_formula

text = """
vocab graph { relation E/2; }
structure C3 : graph {
  universe = { a, b, c };
  E = { (a,b), (b,c), (c,a) };
}
"""
vocab, (c3,) = parse_structures(text)
print(c3.name, len(c3), sorted(c3.tables["E"]))

# generated structures print in the same format
print(print_structure(corpus.disjoint_cycles([1, 2])))

# reports render as JSON with the witness embedded as a structure file
f = parse_formula("exists x. E(x,x)", vocab)
g = parse_formula("forall x. E(x,x)", vocab)
print(render_report(bounded_equiv(f, g, SearchBudget(2))))
