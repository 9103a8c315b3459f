"""Exact rational verification of a symplectic Dirac operator calculus.

The package realizes the symplectic Dirac operator D_s, its dual D_s^dagger,
the sp(2m) polynomial realization, the sl(2) pairs built from them, and
transvector-style kernel constructions on graded polynomial spaces over
R^{m x 3}, entirely in rational arithmetic. A verification harness checks
decompositions, kernel dimensions and an so(m) branching table block by
block, with every comparison exact.
"""

__version__ = "0.1.0"
