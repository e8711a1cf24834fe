"""Exception types.

Every error carries a short machine-readable ``code`` (``MALFORMED_PD``,
``RING_NOT_FIELD``, ...) so the command line can report it uniformly.
"""


class KhlabError(Exception):
    code = "ERROR"

    def __init__(self, message="", code=None):
        super().__init__(message)
        if code is not None:
            self.code = code

    def __str__(self):
        msg = super().__str__()
        return f"{self.code}: {msg}" if msg else self.code


class DiagramError(KhlabError):
    """Raised for unparseable or inconsistent link diagrams."""


class MalformedPD(DiagramError):
    code = "MALFORMED_PD"


class InconsistentDiagram(DiagramError):
    code = "INCONSISTENT_DIAGRAM"


class BadLetter(DiagramError):
    code = "BAD_LETTER"


class AlgebraError(KhlabError):
    pass


class RingNotField(AlgebraError):
    code = "RING_NOT_FIELD"


class ShapeMismatch(AlgebraError):
    code = "SHAPE_MISMATCH"


class RingMismatch(AlgebraError):
    code = "RING_MISMATCH"


class NotDiagonalizable(AlgebraError):
    code = "NOT_DIAGONALIZABLE"


class NoSquareRatio(AlgebraError):
    code = "NO_SQUARE_RATIO"


class CharTwoUnsupported(AlgebraError):
    code = "CHAR_TWO_UNSUPPORTED"


class CubeTooLarge(KhlabError):
    code = "CUBE_TOO_LARGE"


class ZeroChain(KhlabError):
    code = "ZERO_CHAIN"


class MixedDegree(KhlabError):
    code = "MIXED_DEGREE"


class GammaVanishesModP(KhlabError):
    code = "GAMMA_VANISHES_MOD_P"


class NotAKnot(KhlabError):
    code = "NOT_A_KNOT"


class HypothesisViolated(KhlabError):
    code = "HYPOTHESIS_VIOLATED"


class TableNotFound(KhlabError):
    code = "FILE_NOT_FOUND"
