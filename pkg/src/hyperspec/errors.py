"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line can map failures
to the documented process status without a lookup table.
"""


class HyperspecError(Exception):
    exit_code = 1


class ValidationError(HyperspecError, ValueError):
    """Bad input: malformed hypergraph, weights, parameters or files."""

    exit_code = 2


class EmptyVertexSet(ValidationError):
    pass


class DuplicateVertex(ValidationError):
    pass


class LoopEdge(ValidationError):
    pass


class UnknownVertex(ValidationError, KeyError):
    pass


class NonPositiveWeight(ValidationError):
    pass


class NoEdges(ValidationError):
    pass


class TrivialCut(ValidationError):
    pass


class DeletesAllVertices(ValidationError):
    pass


class MissingCustomValue(ValidationError):
    pass


class NonPositiveCustom(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class UnknownKind(ValidationError):
    pass


class NotSelfAdjointKind(ValidationError):
    pass


class IsolatedVertex(ValidationError):
    pass


class IsolatedVertexUnderNormalized(IsolatedVertex):
    pass


class ZeroVector(ValidationError):
    pass


class InvalidParams(ValidationError):
    pass


class MissingAnnotations(ValidationError):
    pass


class SchemeMismatch(ValidationError):
    pass


class TooLarge(ValidationError):
    pass


class StepTooLarge(ValidationError):
    pass


class ParseError(ValidationError):
    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class NumericalFailure(HyperspecError, ArithmeticError):
    exit_code = 3


class HypothesisFailed(HyperspecError):
    """A theorem or bound precondition does not hold for the input."""

    exit_code = 4


class HypothesisViolated(HypothesisFailed):
    pass


class Disconnected(HypothesisFailed):
    def __init__(self, message, component_diameters=None):
        super().__init__(message)
        self.component_diameters = component_diameters or []


class NoWeakCut(HypothesisFailed):
    pass
