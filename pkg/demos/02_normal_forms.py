"""
Prenex forms and prefix classes
===============================
"""

from preslab import GRAPH, classify_prefix, parse_formula, print_formula, relativize, to_nnf, to_prenex
from preslab import corpus

f = parse_formula("(forall x. E(x,x)) & (exists y. ~E(y,y))", GRAPH)
print(print_formula(to_nnf(~f)))

pf = to_prenex(f)
print(print_formula(pf.to_formula()))
print(classify_prefix(pf))

# "fewer than k elements" is universal with k leading quantifiers
for k in (1, 2, 3):
    print(print_formula(corpus.fewer_than_k(k)), classify_prefix(corpus.fewer_than_k(k)))

# relativized to w1, w2 the sentence talks about the substructure on {w1, w2}
dom = corpus.domination()
print(print_formula(relativize(dom, ["w1", "w2"])))
