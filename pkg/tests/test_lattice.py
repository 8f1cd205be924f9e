from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from oracles import (
    brute_glue_order,
    brute_max_square,
    determinantal_divisors,
    leibniz_det,
    signature_descartes,
)
from tcsmatch import _intmat
from tcsmatch.errors import (
    DegenerateLattice,
    DependentBasis,
    NonIntegralForm,
    NotNegativeDefinite,
    NotPositiveDefinite,
    OddForm,
    RankTooLarge,
    ZeroVector,
)
from tcsmatch.lattice import (
    E8,
    HYPERBOLIC_PLANE,
    K3_LATTICE,
    IntegralLattice,
    Signature,
    basic_invariants,
    diagonal,
    discriminant_group,
    divisibility,
    glue_group,
    gram_in_basis,
    in_span,
    intersection,
    known_lattices,
    max_square_negative_definite,
    orthogonal_complement,
    overlattice_from_glue,
    saturation,
    short_vectors,
    smith_normal_form,
    sublattice_index,
    verify_isometry,
)

N_PLUS = IntegralLattice([[6, 6], [6, 2]])
N_MINUS = IntegralLattice([[10, 5], [5, 0]])


def test_gram_matrix_must_be_symmetric_and_square():
    with pytest.raises(ValueError):
        IntegralLattice([[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        IntegralLattice([[1, 2]])


class TestGramInBasis:
    def test_plus_block(self):
        assert gram_in_basis(N_PLUS, [(1, 1), (2, -3)]).gram == ((20, 0), (0, -30))

    def test_minus_block(self):
        assert gram_in_basis(N_MINUS, [(1, 2), (1, -4)]).gram == ((30, 0), (0, -30))

    def test_identity_basis(self):
        assert gram_in_basis(K3_LATTICE, _intmat.identity(22)).gram == K3_LATTICE.gram

    def test_dependent(self):
        with pytest.raises(DependentBasis):
            gram_in_basis(N_PLUS, [(1, 1), (2, 2)])

    def test_non_square_basis(self):
        assert gram_in_basis(K3_LATTICE, [(1,) + (0,) * 21]).gram == ((0,),)


class TestBasicInvariants:
    def test_diagonal(self):
        assert basic_invariants(diagonal([20, -30])) == (-600, Signature(1, 1, 0), True)

    def test_plus_block(self):
        assert basic_invariants(N_PLUS) == (-24, Signature(1, 1, 0), True)

    def test_k3(self):
        assert basic_invariants(K3_LATTICE) == (-1, Signature(3, 19, 0), True)

    def test_zero_diagonal_needs_swap(self):
        assert IntegralLattice([[0, 0, 1], [0, 0, 0], [1, 0, 0]]).signature == Signature(1, 1, 1)

    def test_odd(self):
        assert not IntegralLattice([[1, 0], [0, -2]]).is_even


class TestIndexAndDivisibility:
    def test_index_plus(self):
        assert sublattice_index(N_PLUS, [(1, 1), (2, -3)]) == 5

    def test_index_minus(self):
        assert sublattice_index(N_MINUS, [(1, 2), (1, -4)]) == 6

    def test_identity(self):
        assert sublattice_index(N_PLUS, [(1, 0), (0, 1)]) == 1

    def test_index_dependent(self):
        with pytest.raises(DependentBasis):
            sublattice_index(N_PLUS, [(1, 1), (2, 2)])

    @pytest.mark.parametrize("v, d", [((2, -3), 1), ((4, -6), 2), ((1, 0), 1), ((0, -7), 7)])
    def test_divisibility(self, v, d):
        assert divisibility(N_PLUS, v) == d

    def test_zero_vector(self):
        with pytest.raises(ZeroVector):
            divisibility(N_PLUS, (0, 0))


class TestSmith:
    @pytest.mark.parametrize("m, expected", [
        ([[20, 0], [0, 30]], (10, 60)),
        ([[1, 0], [0, 1]], (1, 1)),
        ([[6, 6], [6, 2]], (2, 12)),
        ([[20, 0, 0], [0, 30, 0], [0, 0, -30]], (10, 30, 60)),
    ])
    def test_examples(self, m, expected):
        # expected values computed with the determinantal-divisor oracle
        assert tuple(determinantal_divisors(m)) == expected
        snf = smith_normal_form(m)
        assert snf.diagonal == expected
        d = _intmat.matmul(_intmat.matmul(snf.left, m), snf.right)
        assert all(d[i][j] == (expected[i] if i == j else 0)
                   for i in range(len(m)) for j in range(len(m)))

    def test_rectangular(self):
        m = [[2, 4, 4], [-6, 6, 12]]
        snf = smith_normal_form(m)
        assert list(snf.diagonal) == determinantal_divisors(m)
        assert abs(_intmat.det(snf.left)) == 1 and abs(_intmat.det(snf.right)) == 1

    @settings(max_examples=200, deadline=None)
    @given(st.integers(1, 3).flatmap(lambda n: st.lists(
        st.lists(st.integers(-30, 30), min_size=n, max_size=n), min_size=n, max_size=n)))
    def test_matches_determinantal_divisors(self, m):
        snf = smith_normal_form(m)
        assert list(snf.diagonal) == determinantal_divisors(m)
        d = _intmat.matmul(_intmat.matmul(snf.left, m), snf.right)
        n = len(m)
        assert all(d[i][j] == (snf.diagonal[i] if i == j else 0) for i in range(n) for j in range(n))
        assert abs(_intmat.det(snf.left)) == 1 and abs(_intmat.det(snf.right)) == 1
        nz = [x for x in snf.diagonal if x]
        assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


class TestDiscriminantGroup:
    def test_rank_one(self):
        g = discriminant_group(IntegralLattice([[-30]]))
        assert g.invariant_factors == (30,) and g.length == 1

    def test_e8_trivial(self):
        assert discriminant_group(E8).length == 0

    def test_frame(self):
        g = discriminant_group(diagonal([20, 30, -30]))
        assert g.invariant_factors == (10, 30, 60) and g.length == 3
        assert g.order == 18000

    def test_plus_block(self):
        assert discriminant_group(N_PLUS).invariant_factors == (2, 12)

    def test_degenerate(self):
        with pytest.raises(DegenerateLattice):
            discriminant_group(IntegralLattice([[0, 0], [0, 2]]))


class TestOverlattice:
    def test_plus_block_from_glue(self):
        over = overlattice_from_glue(diagonal([20, -30]), [(F(3, 5), F(1, 5))])
        assert over.lattice.det == -24 and over.lattice.is_even and over.index == 5
        # H = (3A + B) / 5, E = (2A - B) / 5 witness the isometry with N+.
        images = [over.coordinates((F(3, 5), F(1, 5))), over.coordinates((F(2, 5), F(-1, 5)))]
        assert verify_isometry(N_PLUS, over.lattice, images)

    def test_minus_block_from_glue(self):
        over = overlattice_from_glue(diagonal([30, -30]), [(F(1, 6), F(-1, 6))])
        assert over.lattice.det == -25 and over.lattice.is_even and over.index == 6
        assert over.glue == ((F(1, 6), F(5, 6)),)
        # H = (2A + B) / 3, E = (A - B) / 6
        images = [over.coordinates((F(2, 3), F(1, 3))), over.coordinates((F(1, 6), F(-1, 6)))]
        assert verify_isometry(N_MINUS, over.lattice, images)

    def test_empty_glue(self):
        over = overlattice_from_glue(N_PLUS, [])
        assert over.lattice.gram == N_PLUS.gram and over.index == 1

    def test_non_integral(self):
        with pytest.raises(NonIntegralForm):
            overlattice_from_glue(diagonal([20, -30]), [(F(1, 5), F(0))])

    def test_odd(self):
        # (1/2, 1/2) in diag(4, 8): integral pairings, square 3
        with pytest.raises(OddForm):
            overlattice_from_glue(diagonal([4, 8]), [(F(1, 2), F(1, 2))])

    def test_glue_closure_matches_index(self):
        glue = [(F(3, 5), F(0), F(1, 5)), (F(0), F(2, 3), F(1, 3)), (F(0), F(1, 6), F(5, 6))]
        group = glue_group(glue, 3)
        assert len(group) == brute_glue_order(glue, 3) == 30
        assert overlattice_from_glue(diagonal([20, 30, -30]), glue).index == 30

    def test_stated_one_third_glue_has_order_three(self):
        assert len(glue_group([(F(2, 3), F(1, 3))], 2)) == 3


class TestComplement:
    def test_plus_block(self):
        basis, comp = orthogonal_complement(N_PLUS, [(1, 1)])
        assert basis == [(2, -3)] and comp.gram == ((-30,),)

    def test_empty(self):
        basis, comp = orthogonal_complement(N_PLUS, [])
        assert comp.gram == N_PLUS.gram

    def test_k3_isotropic(self):
        e = (1,) + (0,) * 21
        basis, comp = orthogonal_complement(K3_LATTICE, [e])
        assert comp.rank == 21
        assert in_span(basis, e) is not None
        assert all(K3_LATTICE.inner(b, e) == 0 for b in basis)

    def test_saturated(self):
        lat = diagonal([2, 2, 2])
        basis, _ = orthogonal_complement(lat, [(2, 2, 0)])
        assert basis == saturation(basis, 3)


class TestIntersection:
    def test_simple(self):
        assert intersection([(1, 0), (0, 2)], [(2, 1), (0, 3)]) == [(2, 4), (0, 6)]


class TestMaxSquare:
    def test_rank_one(self):
        assert max_square_negative_definite(IntegralLattice([[-30]])) == -30

    def test_diag(self):
        assert max_square_negative_definite(diagonal([-2, -2])) == -2

    def test_e8_roots(self):
        m = E8.scaled(-1)
        with pytest.raises(RankTooLarge):
            max_square_negative_definite(m)
        assert max_square_negative_definite(m, max_rank=8) == -2
        # 240 roots plus the origin
        assert len(short_vectors(E8.gram, 2)) == 241

    def test_not_definite(self):
        with pytest.raises(NotNegativeDefinite):
            max_square_negative_definite(N_PLUS)

    def test_skewed_form(self):
        # diag(-50, -2) in basis (15, 2), (7, 1): the shortest vector is -7 v1 + 15 v2
        g = [[-11258, -5254], [-5254, -2452]]
        assert brute_max_square(g, c=10) < -2
        assert max_square_negative_definite(IntegralLattice(g)) == brute_max_square(g, c=20) == -2


def _neg_dominant():
    # Strictly diagonally dominant negative-definite forms, |entries| <= 40.
    def build(n, offs, slack):
        g = [[0] * n for _ in range(n)]
        k = 0
        for i in range(n):
            for j in range(i + 1, n):
                g[i][j] = g[j][i] = offs[k]
                k += 1
        for i in range(n):
            g[i][i] = -min(40, sum(abs(g[i][j]) for j in range(n) if j != i) + slack[i])
        return g

    return st.integers(1, 3).flatmap(lambda n: st.builds(
        build, st.just(n),
        st.lists(st.integers(-13, 13), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2),
        st.lists(st.integers(1, 14), min_size=n, max_size=n)))


@settings(max_examples=60, deadline=None)
@given(_neg_dominant())
def test_max_square_matches_brute_force(g):
    lat = IntegralLattice(g)
    assert lat.is_negative_definite
    assert max_square_negative_definite(lat) == brute_max_square(g, c=10)


@settings(max_examples=40, deadline=None)
@given(_neg_dominant(), st.lists(st.integers(-2, 2), min_size=9, max_size=9))
def test_max_square_monotone_under_sublattices(g, coeffs):
    lat = IntegralLattice(g)
    n = lat.rank
    s = [coeffs[i * 3:(i * 3) + n] for i in range(n)]
    if _intmat.det(s) == 0:
        return
    sub = gram_in_basis(lat, s)
    assert max_square_negative_definite(sub) <= max_square_negative_definite(lat)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(
    st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_signature_and_det_match_oracles(m):
    n = len(m)
    g = [[m[i][j] + m[j][i] for j in range(n)] for i in range(n)]
    lat = IntegralLattice(g)
    assert lat.det == leibniz_det(g)
    assert lat.signature.as_tuple() == signature_descartes(g)
    assert lat.is_even


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n),
    st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n))))
def test_evenness_preserved_by_basis_change(pair):
    m, s = pair
    n = len(m)
    lat = IntegralLattice([[m[i][j] + m[j][i] for j in range(n)] for i in range(n)])
    if _intmat.det(s) == 0:
        return
    assert gram_in_basis(lat, s).is_even


def test_known_lattices():
    k = known_lattices()
    assert k["H"].det == -1 and k["H"].signature == Signature(1, 1)
    assert k["E8"].det == 1 and k["E8"].is_even and k["E8"].signature == Signature(8, 0)
    assert k["K3"].rank == 22 and k["K3"].signature == Signature(3, 19) and k["K3"].det == -1
    assert k["K3"].is_even
    assert HYPERBOLIC_PLANE.gram == ((0, 1), (1, 0))


def test_short_vectors_rejects_indefinite():
    with pytest.raises(NotPositiveDefinite):
        short_vectors([[2, 0], [0, -2]], 3)
    with pytest.raises(NotPositiveDefinite):
        short_vectors([[0, 1], [1, 0]], 3)
