"""
Bounded counterexample searches
===============================

Searches walk through every structure up to a size bound (one per
isomorphism class) and stop at the first counterexample.
"""

from preslab import SearchBudget, corpus, print_structure
from preslab import duality_check, pce_counterexample_search, psc_counterexample_search

budget = SearchBudget(max_universe_size=4)

# every vertex has an out-edge, but some model has no core of 3 elements
rep = psc_counterexample_search(corpus.out_edge(), 3, budget)
print(rep.outcome)
print(print_structure(rep.structure))

# fewer than 3 elements is refuted at cover size 2 and survives at 3
for k in (2, 3):
    print(k, pce_counterexample_search(corpus.fewer_than_k(3), k, budget).outcome)

# no core of size <= k for phi  <=>  k-ary cover by models of ~phi
print(duality_check(corpus.domination(), 1, SearchBudget(3)).outcome)
