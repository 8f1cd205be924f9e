"""Orthogonal pushouts of block Picard lattices and the matching conditions.

Two rank-2 blocks ``N+`` and ``N-`` are glued along a common rank-1
sublattice ``R = <B>``, where ``B+`` and ``B-`` are the orthogonal
complements of the chosen ample classes ``A+`` and ``A-`` and have equal
square.  The pushout ``W`` is the overlattice of the frame
``<A+> + <A-> + <B>`` generated by the images of both blocks.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import _intmat
from .errors import (
    DegenerateLattice,
    NonIntegralForm,
    NonOrthogonal,
    OddForm,
    NonPrimitiveAmple,
    NotAmpleDeclared,
    OddLattice,
    RankNotTwo,
    SquareMismatch,
    ValidationError,
)
from .lattice import (
    IntegralLattice,
    Signature,
    diagonal,
    discriminant_group,
    divisibility,
    gram_in_basis,
    in_span,
    intersection,
    normalize_sign,
    orthogonal_complement,
    overlattice_from_glue,
)

#: Signature of the K3 lattice ``3H + 2E8(-1)``.
K3_SIGNATURE = Signature(3, 19, 0)


@dataclass(frozen=True)
class BlockLatticeData:
    """Restricted Picard lattice of a building block with its declared ample classes."""

    name: str
    picard: IntegralLattice
    basis_labels: tuple = ()
    declared_ample: tuple = ()
    anticanonical: Optional[tuple] = None
    assumptions: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "basis_labels", tuple(self.basis_labels))
        object.__setattr__(self, "declared_ample", tuple(tuple(v) for v in self.declared_ample))
        object.__setattr__(self, "assumptions", tuple(self.assumptions))
        if self.anticanonical is not None:
            object.__setattr__(self, "anticanonical", tuple(self.anticanonical))
        validate_block(self)


def validate_block(block):
    """Raise ValidationError unless the block satisfies its invariants."""
    lat = block.picard
    if not lat.is_even:
        raise ValidationError("evenness", f"Gram {lat} has an odd diagonal entry", block.name)
    if lat.is_degenerate:
        raise ValidationError("non-degeneracy", f"Gram {lat} is degenerate", block.name)
    if lat.signature != Signature(1, lat.rank - 1, 0):
        raise ValidationError("signature", f"Gram {lat} has signature {lat.signature}, "
                              f"expected (1,{lat.rank - 1})", block.name)
    if block.basis_labels and len(block.basis_labels) != lat.rank:
        raise ValidationError("labels", "one basis label per basis vector is required", block.name)
    for v in block.declared_ample:
        if len(v) != lat.rank:
            raise ValidationError("ample", f"ample class {v} has the wrong length", block.name)
        if lat.square(v) <= 0:
            raise ValidationError("ample", f"declared ample class {v} has square "
                                  f"{lat.square(v)} <= 0", block.name)


def ample_orthogonal_generator(block, a):
    """Primitive generator ``B`` of ``a^perp`` in a rank-2 block, first coordinate positive."""
    a = tuple(a)
    if block.picard.rank != 2:
        raise RankNotTwo(f"{block.name} has rank {block.picard.rank}")
    if a not in block.declared_ample:
        raise NotAmpleDeclared(f"{a} is not a declared ample class of {block.name}")
    if divisibility(block.picard, a) != 1:
        raise NonPrimitiveAmple(f"{a} is not primitive in {block.name}")
    basis, _ = orthogonal_complement(block.picard, [a])
    (b,) = basis
    return normalize_sign(b)


@dataclass(frozen=True)
class PushoutResult:
    """Orthogonal pushout ``W`` with its frame, glue and block embeddings.

    ``embed_plus`` / ``embed_minus`` give the images of the blocks' basis
    vectors in ``W`` coordinates; ``r_basis`` spans ``R = N+ ∩ N-`` in ``W``.
    ``w_basis`` expresses the ``W`` basis in frame coordinates.
    """

    w: IntegralLattice
    frame: IntegralLattice
    glue_vectors: tuple
    w_basis: tuple
    embed_plus: tuple
    embed_minus: tuple
    r_basis: tuple
    index: int

    def image(self, embed, v):
        """``W`` coordinates of a block vector ``v`` under ``embed``."""
        return tuple(sum(v[i] * embed[i][j] for i in range(len(v))) for j in range(self.w.rank))


def _frame_images(a, b):
    # Rows of [a; b]^{-1}: the block basis vectors in the rational frame (a, b).
    return _intmat.inverse([list(a), list(b)])


def orthogonal_pushout(n_plus, a_plus, b_plus, n_minus, a_minus, b_minus):
    """Pushout of ``N+`` and ``N-`` identifying ``b_plus`` with ``b_minus``."""
    if n_plus.inner(a_plus, b_plus) != 0:
        raise NonOrthogonal(f"<a+, b+> = {n_plus.inner(a_plus, b_plus)}")
    if n_minus.inner(a_minus, b_minus) != 0:
        raise NonOrthogonal(f"<a-, b-> = {n_minus.inner(a_minus, b_minus)}")
    sq_plus, sq_minus = n_plus.square(b_plus), n_minus.square(b_minus)
    if sq_plus != sq_minus:
        raise SquareMismatch(f"b+^2 = {sq_plus} but b-^2 = {sq_minus}")
    frame = diagonal([n_plus.square(a_plus), n_minus.square(a_minus), sq_plus], label="frame")

    plus_rows = [(row[0], Fraction(0), row[1]) for row in _frame_images(a_plus, b_plus)]
    minus_rows = [(Fraction(0), row[0], row[1]) for row in _frame_images(a_minus, b_minus)]
    over = overlattice_from_glue(frame, plus_rows + minus_rows, label="W")

    embed_plus = tuple(over.coordinates(v) for v in plus_rows)
    embed_minus = tuple(over.coordinates(v) for v in minus_rows)
    # Both embeddings are integral by construction of the overlattice.
    assert None not in embed_plus and None not in embed_minus
    r_basis = tuple(normalize_sign(v) for v in intersection(embed_plus, embed_minus))
    glue = tuple(g for g in over.glue if any(g))
    return PushoutResult(over.lattice, frame, glue, over.basis, embed_plus, embed_minus,
                         r_basis, over.index)


@dataclass(frozen=True)
class EmbeddabilityVerdict:
    status: str  # "Embeddable" | "NotEmbeddable" | "Inconclusive"
    criterion: str

    @property
    def embeddable(self):
        return self.status == "Embeddable"


def nikulin_embeddable(m, target=K3_SIGNATURE):
    """Decide primitive embeddability of an even lattice into the even unimodular lattice of signature ``target``.

    Necessary: signature fits.  Sufficient: signature fits with room to spare
    and either the rank is at most half the target rank, or the rank plus
    the minimal number of generators of the discriminant group is strictly
    less than the target rank.
    """
    if not m.is_even:
        raise OddLattice(f"{m} is not even")
    if m.is_degenerate:
        raise DegenerateLattice(f"{m} is degenerate")
    sig = m.signature
    lp, lm = target.positive, target.negative
    total = lp + lm
    if sig.positive > lp or sig.negative > lm or m.rank > total:
        return EmbeddabilityVerdict("NotEmbeddable", f"signature {sig} does not fit in ({lp},{lm})")
    if sig.positive < lp and sig.negative < lm:
        if 2 * m.rank <= total:
            return EmbeddabilityVerdict("Embeddable", f"half-rank: rank {m.rank} <= {total // 2}")
        length = discriminant_group(m).length
        if m.rank + length < total:
            return EmbeddabilityVerdict(
                "Embeddable", f"discriminant length: rank {m.rank} + length {length} < {total}")
    return EmbeddabilityVerdict("Inconclusive", "no sufficient criterion applies")


MATCHING_CHECKS = (
    "squareMatch",
    "pushoutIntegral",
    "rNegativeDefinite",
    "perpendicularityPlus",
    "perpendicularityMinus",
    "ampleOrthogonality",
    "evenness",
    "embeddable",
)


@dataclass(frozen=True)
class MatchingCertificate:
    """Arithmetic matching data for an ordered pair of blocks.

    ``checks`` maps each name in MATCHING_CHECKS to True/False, or None when
    the check could not be evaluated because an earlier step failed.
    Perpendicularity is evaluated inside the pushout ``W``.
    """

    block_plus: BlockLatticeData
    block_minus: BlockLatticeData
    ample_plus: tuple
    ample_minus: tuple
    ortho_gen_plus: tuple
    ortho_gen_minus: tuple
    pushout: Optional[PushoutResult]
    embeddability: Optional[EmbeddabilityVerdict]
    checks: tuple  # ((name, bool | None), ...)
    reasons: tuple = ()
    assumptions: tuple = field(default=())

    @property
    def check_map(self):
        return dict(self.checks)

    @property
    def valid(self):
        return all(v is True for _, v in self.checks)


def _perpendicular_inside(w, images_this, images_other):
    # Saturated complement of one block inside W must lie in the other block.
    comp, _ = orthogonal_complement(w, images_this)
    return all(in_span(images_other, v) is not None for v in comp)


def check_matching(block_plus, a_plus, block_minus, a_minus):
    """Build the pushout and evaluate every arithmetic matching condition."""
    a_plus, a_minus = tuple(a_plus), tuple(a_minus)
    b_plus = ample_orthogonal_generator(block_plus, a_plus)
    b_minus = ample_orthogonal_generator(block_minus, a_minus)
    assumptions = tuple(dict.fromkeys(block_plus.assumptions + block_minus.assumptions))
    checks = dict.fromkeys(MATCHING_CHECKS)
    reasons = []
    pushout = verdict = None
    sq_plus = block_plus.picard.square(b_plus)
    sq_minus = block_minus.picard.square(b_minus)
    checks["squareMatch"] = sq_plus == sq_minus
    if sq_plus != sq_minus:
        reasons.append(f"SquareMismatch: B+^2 = {sq_plus} but B-^2 = {sq_minus}")
    else:
        try:
            pushout = orthogonal_pushout(block_plus.picard, a_plus, b_plus,
                                         block_minus.picard, a_minus, b_minus)
            checks["pushoutIntegral"] = True
        except NonIntegralForm as exc:
            checks["pushoutIntegral"] = False
            reasons.append(f"NonIntegralForm: {exc}")
        except OddForm as exc:
            checks["pushoutIntegral"] = True
            checks["evenness"] = False
            reasons.append(f"evenness: {exc}")

    if pushout is not None:
        w = pushout.w
        r = gram_in_basis(w, pushout.r_basis) if pushout.r_basis else IntegralLattice(())
        checks["rNegativeDefinite"] = r.is_negative_definite
        if not checks["rNegativeDefinite"]:
            reasons.append(f"rNegativeDefinite: R = {r} has signature {r.signature}")
        checks["perpendicularityPlus"] = _perpendicular_inside(w, pushout.embed_plus, pushout.embed_minus)
        if not checks["perpendicularityPlus"]:
            reasons.append("perpendicularityPlus: complement of N+ in W is not contained in N-")
        checks["perpendicularityMinus"] = _perpendicular_inside(w, pushout.embed_minus, pushout.embed_plus)
        if not checks["perpendicularityMinus"]:
            reasons.append("perpendicularityMinus: complement of N- in W is not contained in N+")
        ap = pushout.image(pushout.embed_plus, a_plus)
        am = pushout.image(pushout.embed_minus, a_minus)
        checks["ampleOrthogonality"] = (all(w.inner(ap, v) == 0 for v in pushout.embed_minus)
                                        and all(w.inner(am, v) == 0 for v in pushout.embed_plus))
        if not checks["ampleOrthogonality"]:
            reasons.append("ampleOrthogonality: an ample class pairs non-trivially with the other block")
        checks["evenness"] = w.is_even
        if not w.is_even:
            reasons.append(f"evenness: W = {w} is odd")
        else:
            verdict = nikulin_embeddable(w)
            checks["embeddable"] = verdict.embeddable
            if not verdict.embeddable:
                reasons.append(f"embeddable: {verdict.status} ({verdict.criterion})")

    return MatchingCertificate(
        block_plus=block_plus,
        block_minus=block_minus,
        ample_plus=a_plus,
        ample_minus=a_minus,
        ortho_gen_plus=b_plus,
        ortho_gen_minus=b_minus,
        pushout=pushout,
        embeddability=verdict,
        checks=tuple(checks.items()),
        reasons=tuple(reasons),
        assumptions=assumptions,
    )
