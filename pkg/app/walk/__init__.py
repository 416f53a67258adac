"""
Numerical kernel: lattice states, walk operators, momentum space, topology
and observables of the split-step walk.
"""
