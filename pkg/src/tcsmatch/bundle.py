"""Chern-class arithmetic for rigid stable bundles on the matched blocks.

For rank ``r`` and first Chern class ``c1 = k B`` in the common sublattice,
``c2`` is pinned by the spherical (rigid) condition
``2 r c2 - (r - 1) c1^2 - 2 (r^2 - 1) = 0``.  Slope stability on each side
follows from the strict bound ``x^2 < -r^2 (r^2 - 1) / 2`` on ``A^perp`` plus
coprimality of ``r`` with the divisibility of ``c1``; the moduli space
extends over the fibration when ``gcd(r, c1^2 / 2 - c2) = 1``.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional

from .errors import InvalidMatching, NotAmpleDeclared, OddSquare, TcsError
from .lattice import divisibility, in_span, max_square_negative_definite, orthogonal_complement
from .matching import MatchingCertificate


def kuleshov_c2(r, c1_square):
    """``c2`` solving the spherical identity, or ``None`` if it is not an integer."""
    if r < 1:
        raise ValueError("rank must be positive")
    num = (r - 1) * c1_square + 2 * (r * r - 1)
    q, rem = divmod(num, 2 * r)
    return q if rem == 0 else None


def spherical_identity(r, c1_square, c2):
    """Left-hand side ``2 r c2 - (r-1) c1^2 - 2 (r^2 - 1)``; zero for spherical data."""
    return 2 * r * c2 - (r - 1) * c1_square - 2 * (r * r - 1)


def discriminant_delta(r, c1_square, c2):
    return 2 * r * c2 - (r - 1) * c1_square


def euler_characteristic_shadow(c1_square, c2):
    """``c1^2 / 2 - c2``; ``c1^2`` must be even."""
    if c1_square % 2:
        raise OddSquare(f"c1^2 = {c1_square} is odd")
    return c1_square // 2 - c2


def gcd_condition(r, c1_square, c2):
    return gcd(r, abs(euler_characteristic_shadow(c1_square, c2))) == 1


def stability_bound(r):
    """The strict threshold ``-r^2 (r^2 - 1) / 2`` (always an integer)."""
    num = r * r * (r * r - 1)
    assert num % 2 == 0
    return -num // 2


@dataclass(frozen=True)
class StabilityReport:
    bound: int
    max_square: int
    divisibility: int
    divisibility_coprime: bool
    bogomolov_margin: Fraction

    @property
    def passed(self):
        return self.max_square < self.bound and self.divisibility_coprime


def stability_check(block, a, r, c1, max_rank=None):
    """Sufficient arithmetic test for slope stability on one block.

    ``max_square`` is the largest square of a non-zero class orthogonal to
    ``a``; ``bogomolov_margin`` is ``max_square + r^2 Delta / 4`` with
    ``Delta = 2 (r^2 - 1)``, negative exactly when the Bogomolov branch of a
    destabilizing subsheaf is excluded.
    """
    a = tuple(a)
    if a not in block.declared_ample:
        raise NotAmpleDeclared(f"{a} is not a declared ample class of {block.name}")
    basis, comp = orthogonal_complement(block.picard, [a])
    kwargs = {} if max_rank is None else {"max_rank": max_rank}
    max_sq = max_square_negative_definite(comp, **kwargs)
    div = divisibility(block.picard, c1)
    delta = 2 * (r * r - 1)
    return StabilityReport(
        bound=stability_bound(r),
        max_square=max_sq,
        divisibility=div,
        divisibility_coprime=gcd(r, div) == 1,
        bogomolov_margin=max_sq + Fraction(r * r * delta, 4),
    )


@dataclass(frozen=True)
class BundleData:
    """Rank and Chern classes; ``c1 = k B`` given in W and in both block bases."""

    rank: int
    k: int
    c1: tuple
    c1_plus: tuple
    c1_minus: tuple
    c1_square: int
    c2: Optional[int]


BUNDLE_CHECKS = (
    "matchingValid",
    "c1InCommonSublattice",
    "sphericalIdentity",
    "gcdCondition",
    "stabilityPlus",
    "stabilityMinus",
    "ampleRational",
)


@dataclass(frozen=True)
class BundleCertificate:
    matching: MatchingCertificate
    bundle: BundleData
    gcd_check: bool
    gcd_witness: Optional[int]
    stability_plus: Optional[StabilityReport]
    stability_minus: Optional[StabilityReport]
    ample_rational: bool
    delta: Optional[int]
    checks: tuple
    reasons: tuple = ()

    @property
    def check_map(self):
        return dict(self.checks)

    @property
    def valid(self):
        return all(v is True for _, v in self.checks)

    @property
    def degenerate(self):
        """Rank-1 data: line bundles, arithmetically valid but not a search target."""
        return self.bundle.rank == 1

    @property
    def failed_checks(self):
        return tuple(name for name, v in self.checks if v is not True)


def _stability_reason(side, rep):
    parts = []
    if rep.max_square >= rep.bound:
        parts.append(f"max square {rep.max_square} is not below bound {rep.bound}")
    if not rep.divisibility_coprime:
        parts.append(f"divisibility {rep.divisibility} of c1 is not coprime to the rank")
    return f"{side}: " + "; ".join(parts)


def verify_bundle(matching, r, k, max_rank=None):
    """Evaluate every arithmetic hypothesis for ``(r, c1 = k B, c2)`` on a valid matching."""
    if not matching.valid:
        raise InvalidMatching("bundle data requires a valid matching certificate: "
                              + "; ".join(matching.reasons))
    if r < 1 or k == 0:
        raise ValueError("need r >= 1 and k != 0")
    po = matching.pushout
    c1_plus = tuple(k * x for x in matching.ortho_gen_plus)
    c1_minus = tuple(k * x for x in matching.ortho_gen_minus)
    c1 = po.image(po.embed_plus, c1_plus)
    c1_square = po.w.square(c1)
    c2 = kuleshov_c2(r, c1_square)
    reasons = []
    checks = dict.fromkeys(BUNDLE_CHECKS)
    checks["matchingValid"] = True
    checks["c1InCommonSublattice"] = (c1 == po.image(po.embed_minus, c1_minus)
                                      and in_span(po.r_basis, c1) is not None)
    if not checks["c1InCommonSublattice"]:
        reasons.append("c1InCommonSublattice: c1 is not in N+ ∩ N-")

    delta = witness = None
    checks["sphericalIdentity"] = c2 is not None
    if c2 is None:
        reasons.append(f"NonIntegralC2: ((r-1) c1^2 + 2(r^2-1)) / 2r = "
                       f"{Fraction((r - 1) * c1_square + 2 * (r * r - 1), 2 * r)} is not an integer")
        checks["gcdCondition"] = False
        reasons.append("gcdCondition: not evaluated without an integral c2")
    else:
        delta = discriminant_delta(r, c1_square, c2)
        witness = abs(euler_characteristic_shadow(c1_square, c2))
        checks["gcdCondition"] = gcd(r, witness) == 1
        if not checks["gcdCondition"]:
            reasons.append(f"gcdCondition: gcd({r}, {witness}) = {gcd(r, witness)}")

    reports = {}
    for side, block, a, c in (("stabilityPlus", matching.block_plus, matching.ample_plus, c1_plus),
                              ("stabilityMinus", matching.block_minus, matching.ample_minus, c1_minus)):
        try:
            rep = stability_check(block, a, r, c, max_rank=max_rank)
        except TcsError as exc:
            reports[side] = None
            checks[side] = False
            reasons.append(f"{side}: {exc.reason}: {exc}")
            continue
        reports[side] = rep
        checks[side] = rep.passed
        if not rep.passed:
            reasons.append(_stability_reason(side, rep))

    # Declared ample classes are lattice vectors, hence rational.
    checks["ampleRational"] = True

    return BundleCertificate(
        matching=matching,
        bundle=BundleData(r, k, c1, c1_plus, c1_minus, c1_square, c2),
        gcd_check=bool(checks["gcdCondition"]),
        gcd_witness=witness,
        stability_plus=reports["stabilityPlus"],
        stability_minus=reports["stabilityMinus"],
        ample_rational=True,
        delta=delta,
        checks=tuple(checks.items()),
        reasons=tuple(reasons),
    )
