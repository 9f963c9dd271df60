"""Exception hierarchy for iobound."""


class IOBoundError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(IOBoundError, ValueError):
    """A graph or graph file violates a structural invariant."""


class CycleDetected(ValidationError):
    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"graph contains a cycle through vertex {vertex}")


class DanglingEdge(ValidationError):
    def __init__(self, edge, n):
        self.edge = tuple(edge)
        super().__init__(f"edge {self.edge} references a vertex outside 0..{n - 1}")


class SelfLoop(ValidationError):
    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"self-loop on vertex {vertex}")


class KindMismatch(ValidationError):
    pass


class InvalidVertexId(ValidationError, IndexError):
    pass


class DimensionMismatch(IOBoundError, ValueError):
    pass


class ZeroDegreeVertex(IOBoundError, ValueError):
    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"vertex {vertex} has zero weighted degree")


class SizeOverflow(IOBoundError, ValueError):
    pass


class NotPowerOfTwo(IOBoundError, ValueError):
    pass


class ConvergenceFailure(IOBoundError, RuntimeError):
    """The iterative eigensolver did not reach the requested residual."""

    def __init__(self, message, residual=None, converged=0):
        self.residual = residual
        self.converged = converged
        super().__init__(message)


class AlphaOutOfRange(IOBoundError, ValueError):
    pass


class BadString(IOBoundError, ValueError):
    pass


class ParseError(IOBoundError, ValueError):
    def __init__(self, message, line=None, offset=None):
        self.line = line
        self.offset = offset
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", offset {offset})" if offset is not None else ")")
        super().__init__(message + where)


class TraceError(IOBoundError):
    pass


class UseAfterBuild(TraceError):
    pass


class UnknownHandle(TraceError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown handle"
