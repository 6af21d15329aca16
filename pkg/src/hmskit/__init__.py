"""hmskit: exact-arithmetic toolkit for graded matrix factorizations,
Dynkin quiver models, and diagonal symmetry group transposition.

Everything is computed over the rationals with arbitrary precision; no
floating point is used anywhere.
"""

__version__ = "0.1.0"
