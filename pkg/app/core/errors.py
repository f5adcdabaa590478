# app/core/errors.py


class Cat1Error(ValueError):
    """Base class for every error raised by the library"""


class DegenerateTriangleError(Cat1Error):
    pass


class NonUnitVectorError(Cat1Error):
    pass


class GroupCapExceededError(Cat1Error):
    pass


class BallCapExceededError(Cat1Error):
    pass


class UnknownDiagramError(Cat1Error):
    pass


class UnknownVertexError(Cat1Error):
    pass


class UnknownGeneratorError(Cat1Error):
    pass


class InvalidPatternError(Cat1Error):
    pass


class InvalidComplexError(Cat1Error):
    """Complex failed validation before a check"""

    def __init__(self, message: str, violations=None):
        self.violations = list(violations or [])
        super().__init__(message)


class ComplexFormatError(Cat1Error):
    """Malformed complex file line"""

    def __init__(self, message: str, line_number: int = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class GalleryError(Cat1Error):
    """Gallery is not a chain of adjacent triangles, or types do not match"""


class QuadGalleryError(Cat1Error):
    pass


class EmptyPathError(Cat1Error):
    """A path needs at least two points"""


class TypingCorruptionError(Cat1Error):
    """A link contains a vertex whose type cannot occur there"""


class MissingFillingError(Cat1Error):
    """A triangle promised by condition (3) is absent"""


class InjectivityViolationError(Cat1Error):
    """Two distinct elements share an image under the B_n -> A_2n-1 map"""


class JoinViolationError(Cat1Error):
    """Two incomparable minimal upper bounds were certified"""


# Errors that mean the input itself was unusable (exit code 3)
INPUT_ERRORS = (
    DegenerateTriangleError,
    NonUnitVectorError,
    GroupCapExceededError,
    BallCapExceededError,
    UnknownDiagramError,
    UnknownVertexError,
    UnknownGeneratorError,
    InvalidPatternError,
    ComplexFormatError,
    InvalidComplexError,
    GalleryError,
    QuadGalleryError,
    EmptyPathError,
    TypingCorruptionError,
    MissingFillingError,
)

# Errors that contradict a proven statement (exit code 1)
THEOREM_VIOLATIONS = (InjectivityViolationError, JoinViolationError)
