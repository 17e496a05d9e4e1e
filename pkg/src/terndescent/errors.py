"""Errors shared across the toolkit, all CLI-reportable."""


class ToolError(Exception):
    """Base class for errors the command line maps to exit code 1."""


class ParseError(ToolError):
    pass


class InvalidPositionError(ToolError):
    pass


class NonterminationRisk(ToolError):
    """Raised when normalization is requested for a system whose rules do
    not all shrink, so termination is not guaranteed."""


class MalformedTable(ToolError):
    pass


class NotARing(ToolError):
    pass


class NotASubalgebra(ToolError):
    pass


class NotAMonomorphism(ToolError):
    pass


class ForeignElement(ToolError):
    pass


class BoundExceeded(ToolError):
    pass
