"""
Cores
=====

A core is a set of elements that keeps a structure inside the class no
matter which other elements are thrown away.
"""

from preslab import corpus, is_core, minimal_cores, print_formula

g = corpus.loop_pair()
t = corpus.loop_contrast()
print([print_formula(s) for s in t])

# one vertex alone cannot keep both a loop and a loopless vertex
rep = minimal_cores(g, t, 2)
print(rep.cores, rep.minimal_cores)

# every vertex of a directed cycle needs an out-neighbour: only the
# whole vertex set works
c4 = corpus.cycle(4)
print(minimal_cores(c4, corpus.out_edge(), 4).cores)

# the vertices of a triangle are a core for "has a 3-cycle"
two = corpus.disjoint_cycles([3, 3])
print(is_core(two, two.universe[:3], corpus.has_k_cycle(3)))
