"""
Lattice toolkit
===============

Invariants, discriminant groups, overlattices and short vectors.
"""

from fractions import Fraction

from tcsmatch import (
    E8,
    K3_LATTICE,
    IntegralLattice,
    discriminant_group,
    max_square_negative_definite,
    orthogonal_complement,
    overlattice_from_glue,
    smith_normal_form,
)
from tcsmatch.lattice import diagonal, short_vectors

n = IntegralLattice([[6, 6], [6, 2]])
print(n.det, n.signature, n.is_even)
print("discriminant group:", discriminant_group(n))

s = smith_normal_form(n.gram)
print(s.diagonal, s.left, s.right)

# E8 is unimodular and has 240 roots
print(E8.det, discriminant_group(E8))
print(len(short_vectors(E8.gram, 2)) - 1)

print(K3_LATTICE.rank, K3_LATTICE.signature, K3_LATTICE.is_even)

# glue 1/5 (3, 1) onto diag(20, -30) recovers a lattice of determinant -24
over = overlattice_from_glue(diagonal([20, -30]), [(Fraction(3, 5), Fraction(1, 5))])
print(over.index, over.lattice.det)

basis, comp = orthogonal_complement(n, [(1, 1)])
print(basis, comp.gram)
print(max_square_negative_definite(IntegralLattice([[-4, 1, 0], [1, -6, 2], [0, 2, -10]])))
