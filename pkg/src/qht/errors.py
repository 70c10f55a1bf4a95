"""Exception hierarchy shared by the simulator, circuit, and pipeline layers."""


class QhtError(Exception):
    """Base class for all package errors."""


class QubitCountOutOfRange(QhtError):
    """Requested register size falls outside the simulable range."""


class InvalidQubitIndex(QhtError):
    """A gate references a qubit that does not exist in the target state."""


class DuplicateQubit(QhtError):
    """A gate references the same qubit twice."""


class ZeroNorm(QhtError):
    """An amplitude vector or tensor with zero norm cannot be encoded."""


class NonPowerOfTwoLength(QhtError):
    """Array length must be a power of two."""


class PostselectionImpossible(QhtError):
    """The postselected measurement branch carries (numerically) no probability."""

    def __init__(self, message, probability=0.0):
        super().__init__(message)
        self.probability = probability


class ShapeMismatch(QhtError):
    """Tensor shape is not N x ... x N with N a power of two, or disagrees with a layout."""


class LayoutMismatch(QhtError):
    """A register layout is inconsistent with the requested circuit mode."""


class EmptyRegister(QhtError):
    """A transform was requested on an empty qubit list."""


class UnsupportedGate(QhtError):
    """The resource decomposer received a gate outside the supported set."""


class EmptyInput(QhtError):
    """An input file contained no samples."""


class NonNumericRow(QhtError):
    """A CSV row could not be parsed as a number."""

    def __init__(self, line_number, content):
        super().__init__(f"line {line_number}: not a number: {content!r}")
        self.line_number = line_number


class BadPgmHeader(QhtError):
    """A PGM file does not start with a valid P2/P5 header."""


class NonSquareImage(QhtError):
    """Corner detection requires a square image."""


class NonPowerOfTwoSide(QhtError):
    """Image side length must be a power of two."""


# error codes shared by the HTTP service and the CLI's exit-code mapping
EXIT_CODES = {
    "bad_input": 2,
    "postselection_impossible": 3,
    "qubit_limit": 4,
}


def error_code(exc: Exception) -> str:
    """Stable machine-readable code for a domain error."""
    if isinstance(exc, PostselectionImpossible):
        return "postselection_impossible"
    if isinstance(exc, QubitCountOutOfRange):
        return "qubit_limit"
    return "bad_input"
