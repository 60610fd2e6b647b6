"""
Covers
======

A k-ary cover of M is a family of substructures such that every set of at
most k elements lies inside one of them.
"""

from preslab import corpus, induced_substructure, is_k_ary_covered_extension, pce_counterexample_at

b2 = corpus.bare_set(2)
singles = [induced_substructure(b2, [e]) for e in b2.universe]
print(is_k_ary_covered_extension(b2, singles, 1), is_k_ary_covered_extension(b2, singles, 2))

# "fewer than 2 elements": both singletons satisfy it, the pair does not
phi = corpus.fewer_than_k(2)
print(pce_counterexample_at(phi, 1, b2).cover)
print(pce_counterexample_at(phi, 2, b2).cover)
