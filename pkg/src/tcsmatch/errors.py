"""Exception hierarchy.

Every error carries a short machine-readable ``reason`` (the class name by
default) that certificates and the CLI report verbatim.
"""


class TcsError(ValueError):
    """Base class for all errors raised by this package."""

    @property
    def reason(self):
        return type(self).__name__


# lattice core
class LatticeError(TcsError):
    pass


class DependentBasis(LatticeError):
    pass


class NonIntegralForm(LatticeError):
    pass


class OddForm(LatticeError):
    pass


class ZeroVector(LatticeError):
    pass


class DegenerateLattice(LatticeError):
    pass


class NotNegativeDefinite(LatticeError):
    pass


class NotPositiveDefinite(LatticeError):
    pass


class RankTooLarge(LatticeError):
    pass


# matching engine
class MatchingError(TcsError):
    pass


class NotAmpleDeclared(MatchingError):
    pass


class NonPrimitiveAmple(MatchingError):
    pass


class RankNotTwo(MatchingError):
    pass


class SquareMismatch(MatchingError):
    pass


class NonOrthogonal(MatchingError):
    pass


class OddLattice(MatchingError):
    pass


# bundle arithmetic
class BundleError(TcsError):
    pass


class OddSquare(BundleError):
    pass


class InvalidMatching(BundleError):
    pass


# catalog store
class ParseError(TcsError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class ValidationError(TcsError):
    """A catalog entry or block violates a data invariant.

    ``invariant`` names the failed invariant (``"evenness"``, ``"symmetry"``,
    ``"signature"``, ...), ``entry`` the offending entry if known.
    """

    def __init__(self, invariant, message, entry=None):
        self.invariant = invariant
        self.entry = entry
        prefix = f"{entry}: " if entry else ""
        super().__init__(f"{prefix}{invariant}: {message}")

    @property
    def reason(self):
        return f"ValidationError({self.invariant})"
