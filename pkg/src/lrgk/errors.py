"""Exception hierarchy.

ValidationError covers malformed inputs and out-of-domain parameters
(CLI exit code 2); NumericError covers failures arising during
computation (CLI exit code 3).
"""


class LrgkError(Exception):
    """Base class for all library errors."""


class ValidationError(LrgkError):
    """Bad input data or parameters."""


class NumericError(LrgkError):
    """Failure detected while computing."""


class InvalidWeight(ValidationError):
    """Edge weight is non-positive or non-finite."""


class InvalidEdge(ValidationError):
    """Self-loop or node index outside [1..N]."""


class DuplicateEdge(ValidationError):
    """An undirected pair was listed more than once."""


class GraphFormatError(ValidationError):
    """Graph text file does not follow the `N E` / `i j w` layout."""


class IsolatedNode(ValidationError):
    """Node with zero degree; the degree normalization is undefined."""

    def __init__(self, node):
        self.node = node
        super().__init__(f"node {node} has degree 0")


class DimensionMismatch(ValidationError):
    """Operand shape incompatible with the operator or embedding."""


class ParameterOutOfDomain(ValidationError):
    """Kernel parameter outside its admissible range."""


class KOutOfRange(ValidationError):
    """Target rank K outside [1..N] (or outside the operation's domain)."""


class InvalidParams(ValidationError):
    """Generator or configuration parameters are inconsistent."""


class TooLarge(ValidationError):
    """Problem size exceeds the dense-path cap."""

    def __init__(self, n, cap):
        self.n = n
        self.cap = cap
        super().__init__(f"N={n} exceeds dense cap {cap}")


class EmptySweep(ValidationError):
    """A sweep was requested over an empty parameter list."""


class NonFiniteSample(NumericError):
    """Target function returned NaN/inf at a quadrature node."""


class RankDeficient(NumericError):
    """A column collapsed during orthogonalization."""

    def __init__(self, column):
        self.column = column
        super().__init__(f"column {column} is numerically dependent")


class Disconnected(NumericError):
    """Random generator failed to produce a connected graph."""


class AssumptionViolated(NumericError):
    """Spectral-gap / passband assumption does not hold; bound is vacuous."""


def annotate_stage(exc, stage):
    """Attach the pipeline stage name to an in-flight exception."""
    note = f"stage: {stage}"
    if hasattr(exc, "add_note"):  # py >= 3.11
        exc.add_note(note)
    else:
        exc.args = tuple(list(exc.args) + [note])
    return exc
