"""Exact arithmetic on integral lattices.

A lattice is a free abelian group with an integer Gram matrix in a
distinguished basis.  Vectors are plain tuples of coordinates in that basis:
``tuple[int, ...]`` for lattice vectors and ``tuple[Fraction, ...]`` for
rational (glue) vectors.  Everything is exact; there is no floating point.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd, isqrt
from typing import Optional

from . import _intmat
from .errors import (
    DegenerateLattice,
    DependentBasis,
    NonIntegralForm,
    NotNegativeDefinite,
    NotPositiveDefinite,
    OddForm,
    RankTooLarge,
    ZeroVector,
)

Vector = tuple  # tuple[int, ...]
RationalVector = tuple  # tuple[Fraction, ...]

#: Default rank cap for short-vector enumeration.
MAX_ENUMERATION_RANK = 4


@dataclass(frozen=True)
class Signature:
    positive: int
    negative: int
    zero: int = 0

    @property
    def rank(self):
        return self.positive + self.negative + self.zero

    def as_tuple(self):
        return (self.positive, self.negative, self.zero)

    def __str__(self):
        if self.zero:
            return f"({self.positive},{self.negative},{self.zero})"
        return f"({self.positive},{self.negative})"


@dataclass(frozen=True)
class IntegralLattice:
    """Free abelian group of finite rank with a symmetric integer Gram matrix."""

    gram: tuple
    label: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        gram = tuple(tuple(int(x) for x in row) for row in self.gram)
        n = len(gram)
        if any(len(row) != n for row in gram):
            raise ValueError(f"Gram matrix is not square: {gram}")
        if any(gram[i][j] != gram[j][i] for i in range(n) for j in range(i)):
            raise ValueError(f"Gram matrix is not symmetric: {gram}")
        object.__setattr__(self, "gram", gram)

    @property
    def rank(self):
        return len(self.gram)

    def inner(self, u, v):
        g = self.gram
        return sum(u[i] * g[i][j] * v[j] for i in range(len(g)) for j in range(len(g)))

    def square(self, v):
        return self.inner(v, v)

    @cached_property
    def det(self):
        return _intmat.det(self.gram)

    @cached_property
    def signature(self):
        return _signature(self.gram)

    @property
    def is_even(self):
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @property
    def is_degenerate(self):
        return self.det == 0

    @property
    def is_negative_definite(self):
        return self.signature == Signature(0, self.rank, 0)

    def scaled(self, factor, label=None):
        return IntegralLattice([[factor * x for x in row] for row in self.gram], label)

    def __str__(self):
        rows = ",".join("[" + ",".join(str(x) for x in row) + "]" for row in self.gram)
        return f"[{rows}]"


def diagonal(entries, label=None):
    n = len(entries)
    return IntegralLattice([[entries[i] if i == j else 0 for j in range(n)]
                            for i in range(n)], label)


def direct_sum(*lattices, label=None):
    """Orthogonal direct sum, blocks in the order given."""
    n = sum(l.rank for l in lattices)
    gram = [[0] * n for _ in range(n)]
    offset = 0
    for lat in lattices:
        for i in range(lat.rank):
            for j in range(lat.rank):
                gram[offset + i][offset + j] = lat.gram[i][j]
        offset += lat.rank
    return IntegralLattice(gram, label)


def _signature(gram):
    # Congruence diagonalisation over Q; Sylvester's law makes the count
    # of positive / negative pivots an invariant.
    a = [[Fraction(x) for x in row] for row in gram]
    pos = neg = 0
    while a:
        n = len(a)
        p = next((i for i in range(n) if a[i][i] != 0), None)
        if p is None:
            hit = next(((i, j) for i in range(n) for j in range(i + 1, n) if a[i][j] != 0), None)
            if hit is None:
                return Signature(pos, neg, n)
            i, j = hit
            # e_i -> e_i + e_j turns the zero diagonal into 2 a_ij.
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            p = i
        piv = a[p][p]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        rest = [k for k in range(n) if k != p]
        a = [[a[r][c] - a[r][p] * a[p][c] / piv for c in rest] for r in rest]
    return Signature(pos, neg, 0)


def basic_invariants(lat):
    """Return ``(determinant, signature, even)``."""
    return lat.det, lat.signature, lat.is_even


def gram_in_basis(ambient, basis, label=None):
    """Gram matrix ``S G S^T`` of the sublattice spanned by ``basis``.

    Raises DependentBasis when the basis vectors are linearly dependent.
    """
    basis = [tuple(v) for v in basis]
    if any(len(v) != ambient.rank for v in basis):
        raise ValueError("basis vector length does not match the ambient rank")
    if _intmat.rank(basis) < len(basis):
        raise DependentBasis(f"basis {basis} is linearly dependent")
    return IntegralLattice([[ambient.inner(u, v) for v in basis] for u in basis], label)


def sublattice_index(ambient, basis):
    """Index ``|det S|`` of the full-rank sublattice spanned by ``basis``."""
    basis = [tuple(v) for v in basis]
    if len(basis) != ambient.rank:
        raise ValueError("index is only defined for square bases")
    d = _intmat.det(basis)
    if d == 0:
        raise DependentBasis(f"basis {basis} is linearly dependent")
    return abs(d)


def divisibility(ambient, v):
    """Largest ``d`` with ``v / d`` integral in the distinguished basis."""
    if len(v) != ambient.rank:
        raise ValueError("vector length does not match the ambient rank")
    d = reduce(gcd, v, 0)
    if d == 0:
        raise ZeroVector("divisibility of the zero vector is undefined")
    return d


def primitive_part(v):
    d = reduce(gcd, v, 0)
    if d == 0:
        raise ZeroVector("zero vector has no primitive part")
    return tuple(x // d for x in v)


def normalize_sign(v):
    """Flip ``v`` so that its first non-zero coordinate is positive."""
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


# --- Smith normal form and discriminant groups -------------------------------

@dataclass(frozen=True)
class SmithDecomposition:
    """``left @ m @ right == diag(diagonal)`` with unimodular transforms."""

    diagonal: tuple
    left: tuple
    right: tuple


def smith_normal_form(m):
    m = [list(row) for row in m]
    d, left, right = _intmat.snf(m)
    k = min(len(m), len(m[0]) if m else 0)
    return SmithDecomposition(
        diagonal=tuple(d[i][i] for i in range(k)),
        left=tuple(map(tuple, left)),
        right=tuple(map(tuple, right)),
    )


@dataclass(frozen=True)
class DiscriminantGroup:
    """Finite abelian group ``L^* / L`` by its invariant factors."""

    invariant_factors: tuple

    @property
    def length(self):
        return len(self.invariant_factors)

    @property
    def order(self):
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def __str__(self):
        if not self.invariant_factors:
            return "0"
        return " + ".join(f"Z/{d}" for d in self.invariant_factors)


def discriminant_group(lat):
    if lat.is_degenerate:
        raise DegenerateLattice("discriminant group of a degenerate lattice")
    if lat.rank == 0:
        return DiscriminantGroup(())
    snf = smith_normal_form(lat.gram)
    return DiscriminantGroup(tuple(d for d in snf.diagonal if d > 1))


# --- complements, saturation, intersections ----------------------------------

def _left_kernel(m, nrows):
    """Saturated basis (HNF) of ``{x in Z^nrows : x @ m == 0}``."""
    if not m or not m[0]:
        return [tuple(row) for row in _intmat.identity(nrows)]
    d, left, _ = _intmat.snf(m)
    r = sum(1 for i in range(min(len(d), len(d[0]))) if d[i][i])
    kernel = [row for row in left[r:]]
    if not kernel:
        return []
    h, _ = _intmat.hnf(kernel)
    return [tuple(row) for row in h if any(row)]


def orthogonal_complement(ambient, vectors):
    """Basis and Gram of ``{x : <x, v> = 0 for all v in vectors}``.

    The complement is saturated in ``ambient``.  Its basis is returned in
    Hermite normal form, so it is canonical.
    """
    if ambient.is_degenerate:
        raise DegenerateLattice("orthogonal complement in a degenerate lattice")
    vectors = [tuple(v) for v in vectors]
    n = ambient.rank
    cols = [[sum(ambient.gram[i][j] * v[j] for j in range(n)) for v in vectors]
            for i in range(n)]
    basis = _left_kernel(cols if vectors else [], n)
    return basis, gram_in_basis(ambient, basis) if basis else IntegralLattice(())


def saturation(vectors, n):
    """HNF basis of ``(span_Q vectors) ∩ Z^n``."""
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return []
    # Saturation is the double annihilator under the standard dot product.
    ann = _left_kernel(_intmat.transpose(vectors), n)
    if not ann:
        return [tuple(row) for row in _intmat.identity(n)]
    return _left_kernel(_intmat.transpose(ann), n)


def lattice_basis(vectors):
    """HNF basis of the Z-span of ``vectors``."""
    vectors = [list(v) for v in vectors]
    if not vectors:
        return []
    h, _ = _intmat.hnf(vectors)
    return [tuple(row) for row in h if any(row)]


def in_span(basis, v):
    """Integer coordinates of ``v`` in ``basis`` or ``None``."""
    y = _intmat.solve_row([list(b) for b in basis], list(v))
    if y is None or any(c.denominator != 1 for c in y):
        return None
    return tuple(int(c) for c in y)


def intersection(basis_a, basis_b):
    """HNF basis of the intersection of two sublattices of ``Z^n``."""
    if not basis_a or not basis_b:
        return []
    stacked = [list(v) for v in basis_a] + [[-x for x in v] for v in basis_b]
    kernel = _left_kernel(stacked, len(stacked))
    k = len(basis_a)
    n = len(basis_a[0])
    rows = [[sum(x[i] * basis_a[i][j] for i in range(k)) for j in range(n)] for x in kernel]
    return lattice_basis(rows)


# --- overlattices ------------------------------------------------------------

def normalize_glue(g):
    """Reduce a rational vector modulo ``Z^n`` into ``[0, 1)^n``."""
    return tuple(Fraction(x) - (Fraction(x).numerator // Fraction(x).denominator) for x in g)


def glue_group(glue, rank):
    """All elements of the subgroup of ``Q^n / Z^n`` generated by ``glue``.

    Computed by closure under addition; returned sorted.
    """
    zero = tuple(Fraction(0) for _ in range(rank))
    gens = [normalize_glue(g) for g in glue]
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = normalize_glue(tuple(a + b for a, b in zip(x, g)))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


@dataclass(frozen=True)
class Overlattice:
    """Finite-index overlattice ``base + span(glue)`` of an integral lattice.

    ``basis`` holds the overlattice basis as rational rows in base
    coordinates; ``lattice`` is the overlattice with its Gram in that basis.
    """

    base: IntegralLattice
    glue: tuple
    basis: tuple
    lattice: IntegralLattice
    index: int

    def coordinates(self, v):
        """Integer coordinates in ``basis`` of a base-coordinate vector, else None."""
        y = _intmat.solve_row([list(b) for b in self.basis], list(v))
        if y is None or any(c.denominator != 1 for c in y):
            return None
        return tuple(int(c) for c in y)


def overlattice_from_glue(base, glue, label=None):
    """Overlattice of ``base`` generated by rational glue vectors.

    Raises NonIntegralForm if the extended form is not integral and OddForm
    if it is integral but odd.
    """
    n = base.rank
    glue = tuple(normalize_glue(tuple(Fraction(x) for x in g)) for g in glue)
    if any(len(g) != n for g in glue):
        raise ValueError("glue vector length does not match the base rank")
    den = 1
    for g in glue:
        for x in g:
            den = _intmat.lcm(den, x.denominator)
    rows = [[den * int(i == j) for j in range(n)] for i in range(n)]
    rows += [[int(x * den) for x in g] for g in glue]
    h, _ = _intmat.hnf(rows)
    h = [row for row in h if any(row)]
    basis = tuple(tuple(Fraction(x, den) for x in row) for row in h)
    gram = [[sum(u[i] * base.gram[i][j] * v[j] for i in range(n) for j in range(n))
             for v in basis] for u in basis]
    bad = [(i, j) for i in range(n) for j in range(n) if gram[i][j].denominator != 1]
    if bad:
        i, j = bad[0]
        raise NonIntegralForm(f"pairing {gram[i][j]} of overlattice generators {i},{j} is not integral")
    gram = [[int(x) for x in row] for row in gram]
    odd = [i for i in range(n) if gram[i][i] % 2]
    if odd:
        raise OddForm(f"overlattice generator {odd[0]} has odd square {gram[odd[0]][odd[0]]}")
    index = den ** n // abs(_intmat.det(h))
    return Overlattice(base, glue, basis, IntegralLattice(gram, label), index)


def verify_isometry(source, target, images):
    """Check that ``images`` (target coordinates of the source basis) is an isometry onto ``target``.

    The map must preserve the form and be unimodular (hence bijective).
    """
    images = [tuple(v) for v in images]
    if len(images) != source.rank or source.rank != target.rank:
        return False
    if abs(_intmat.det(images)) != 1:
        return False
    return all(target.inner(images[i], images[j]) == source.gram[i][j]
               for i in range(source.rank) for j in range(source.rank))


# --- short vectors -----------------------------------------------------------

def _ldl(gram):
    """Quadratic-form decomposition ``Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2``."""
    n = len(gram)
    q = [[Fraction(x) for x in row] for row in gram]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def _ceil(x):
    return -((-x.numerator) // x.denominator)


def _floor(x):
    return x.numerator // x.denominator


def short_vectors(gram, bound):
    """All ``x`` with ``x G x^T <= bound`` for a positive-definite Gram ``G``.

    Fincke-Pohst enumeration with exact rational arithmetic; the integer
    range for each coordinate is over-approximated and then filtered
    exactly, so the enumeration is complete.
    """
    n = len(gram)
    try:
        q = _ldl(gram)
    except ZeroDivisionError:
        q = None
    if q is None or any(q[i][i] <= 0 for i in range(n)):
        raise NotPositiveDefinite("short-vector enumeration needs a positive-definite Gram matrix")
    bound = Fraction(bound)
    out = []
    x = [0] * n

    def rec(i, budget):
        if i < 0:
            out.append(tuple(x))
            return
        centre = -sum(q[i][j] * x[j] for j in range(i + 1, n))
        r2 = budget / q[i][i]
        rad = isqrt(_floor(r2)) + 1
        for xi in range(_floor(centre) - rad, _ceil(centre) + rad + 1):
            used = q[i][i] * (xi - centre) ** 2
            if used <= budget:
                x[i] = xi
                rec(i - 1, budget - used)
        x[i] = 0

    rec(n - 1, bound)
    return out


def max_square_negative_definite(lat, max_rank=MAX_ENUMERATION_RANK):
    """Maximum of ``x^2`` over non-zero ``x`` in a negative-definite lattice."""
    if lat.rank == 0:
        raise NotNegativeDefinite("rank-0 lattice has no non-zero vectors")
    if lat.rank > max_rank:
        raise RankTooLarge(f"rank {lat.rank} exceeds enumeration cap {max_rank}")
    if not lat.is_negative_definite:
        raise NotNegativeDefinite(f"lattice {lat} has signature {lat.signature}")
    pos = [[-x for x in row] for row in lat.gram]
    c = min(pos[i][i] for i in range(lat.rank))
    best = min(sum(v[i] * pos[i][j] * v[j] for i in range(lat.rank) for j in range(lat.rank))
               for v in short_vectors(pos, c) if any(v))
    return -best


# --- named lattices ----------------------------------------------------------

HYPERBOLIC_PLANE = IntegralLattice([[0, 1], [1, 0]], "H")

# Cartan matrix of E8, Bourbaki labelling: chain 1-3-4-5-6-7-8 with 2 on 4.
_E8_EDGES = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]
E8 = IntegralLattice(
    [[2 if i == j else (-1 if (i, j) in _E8_EDGES or (j, i) in _E8_EDGES else 0)
      for j in range(8)] for i in range(8)],
    "E8",
)

K3_LATTICE = direct_sum(HYPERBOLIC_PLANE, HYPERBOLIC_PLANE, HYPERBOLIC_PLANE,
                        E8.scaled(-1), E8.scaled(-1), label="3H+2E8(-1)")


def known_lattices():
    return {"H": HYPERBOLIC_PLANE, "E8": E8, "K3": K3_LATTICE}
