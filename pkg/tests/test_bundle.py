from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from tcsmatch.bundle import (
    discriminant_delta,
    gcd_condition,
    kuleshov_c2,
    spherical_identity,
    stability_bound,
    stability_check,
    verify_bundle,
)
from tcsmatch.errors import InvalidMatching, OddSquare
from tcsmatch.lattice import diagonal
from tcsmatch.matching import BlockLatticeData, check_matching


class TestKuleshov:
    def test_paper(self):
        assert kuleshov_c2(2, -30) == -6

    @pytest.mark.parametrize("s", [-30, 0, 2, 100])
    def test_rank_one(self, s):
        assert kuleshov_c2(1, s) == 0

    def test_absent(self):
        assert kuleshov_c2(2, 0) is None

    def test_rank_three(self):
        assert kuleshov_c2(3, -14) == -2

    @given(st.integers(1, 60), st.integers(-500, 500).map(lambda x: 2 * x))
    def test_identity(self, r, s):
        c2 = kuleshov_c2(r, s)
        if c2 is not None:
            assert spherical_identity(r, s, c2) == 0
            assert discriminant_delta(r, s, c2) == 2 * (r * r - 1)

    @pytest.mark.parametrize("r", range(2, 51))
    def test_c1_must_be_nonzero(self, r):
        assert kuleshov_c2(r, 0) is None


class TestDelta:
    def test_paper(self):
        assert discriminant_delta(2, -30, -6) == 6

    def test_rank_one(self):
        assert discriminant_delta(1, 8, 0) == 0

    def test_rank_three(self):
        assert discriminant_delta(3, -14, -2) == 16


class TestGcd:
    def test_paper(self):
        assert gcd_condition(2, -30, -6)

    def test_rank_one(self):
        assert gcd_condition(1, -28, 17)

    def test_fail(self):
        assert not gcd_condition(2, -28, -6)

    def test_odd(self):
        with pytest.raises(OddSquare):
            gcd_condition(2, -29, -6)


@pytest.mark.parametrize("r", range(1, 30))
def test_bound_is_integer(r):
    assert stability_bound(r) == F(-r * r * (r * r - 1), 2)


class TestStability:
    def test_paper(self, block_plus):
        rep = stability_check(block_plus, (1, 1), 2, (2, -3))
        assert (rep.max_square, rep.bound, rep.passed) == (-30, -6, True)
        assert rep.bogomolov_margin == -24

    def test_minus_two_vector(self):
        block = BlockLatticeData("d", diagonal([2, -2]), declared_ample=[(1, 0)])
        rep = stability_check(block, (1, 0), 2, (0, 1))
        assert rep.max_square == -2 and not rep.passed

    def test_rank_three(self, block_plus):
        rep = stability_check(block_plus, (1, 1), 3, (2, -3))
        assert rep.bound == -36 and rep.max_square == -30 and not rep.passed

    def test_sign_invariant(self, block_plus):
        a = stability_check(block_plus, (1, 1), 2, (2, -3))
        b = stability_check(block_plus, (1, 1), 2, (-2, 3))
        assert a == b

    def test_not_coprime(self, block_plus):
        rep = stability_check(block_plus, (1, 1), 2, (4, -6))
        assert rep.max_square < rep.bound and not rep.divisibility_coprime and not rep.passed


class TestVerifyBundle:
    def test_paper(self, paper_matching):
        cert = verify_bundle(paper_matching, 2, 1)
        assert cert.valid and not cert.degenerate
        b = cert.bundle
        assert (b.rank, b.c1_square, b.c2) == (2, -30, -6)
        assert b.c1_plus == (2, -3) and b.c1_minus == (1, -4)
        assert cert.delta == 6 and cert.gcd_witness == 9 and cert.gcd_check

    def test_k_two(self, paper_matching):
        cert = verify_bundle(paper_matching, 2, 2)
        assert not cert.valid
        assert cert.bundle.c1_square == -120 and cert.bundle.c2 is None
        assert any(r.startswith("NonIntegralC2") for r in cert.reasons)

    def test_rank_one_degenerate(self, paper_matching):
        cert = verify_bundle(paper_matching, 1, 1)
        assert cert.valid and cert.degenerate and cert.bundle.c2 == 0

    def test_rank_three_stability_fails(self, paper_matching):
        cert = verify_bundle(paper_matching, 3, 1)
        assert cert.check_map["stabilityPlus"] is False
        assert cert.check_map["stabilityMinus"] is False
        assert any("bound -36" in r for r in cert.reasons)

    @pytest.mark.parametrize("r", [1, 2, 3, 4])
    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
    def test_sign_of_k(self, paper_matching, r, k):
        assert verify_bundle(paper_matching, r, k).valid == verify_bundle(paper_matching, r, -k).valid

    def test_invalid_matching(self, block_plus):
        bad = check_matching(block_plus, (1, 1), block_plus, (1, 1))
        with pytest.raises(InvalidMatching):
            verify_bundle(bad, 2, 1)

    def test_valid_implies_arithmetic(self, paper_matching):
        from math import gcd
        for r in range(1, 6):
            for k in range(1, 8):
                cert = verify_bundle(paper_matching, r, k)
                if not cert.valid:
                    continue
                b = cert.bundle
                assert spherical_identity(r, b.c1_square, b.c2) == 0
                assert gcd(r, abs(b.c1_square // 2 - b.c2)) == 1
                assert cert.stability_plus.max_square < stability_bound(r)
                assert cert.stability_minus.max_square < stability_bound(r)
