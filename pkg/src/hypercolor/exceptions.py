"""Exception types raised by hypercolor."""


class HypercolorError(Exception):
    """Base class for all package errors."""


class ContractError(HypercolorError, ValueError):
    """An argument violates a documented precondition."""


class ParseError(HypercolorError, ValueError):
    """Malformed text input. Carries the 1-based line number when known."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class UnitClauseError(HypercolorError, ValueError):
    """A clause with a single literal can never be not-all-equal satisfied."""

    def __init__(self, clause_index, literal):
        self.clause_index = clause_index
        self.literal = literal
        super().__init__(
            f"clause {clause_index} has the single literal {literal}; "
            "the formula is NAE-unsatisfiable by this unit clause"
        )


class ImproperColoringError(HypercolorError, ValueError):
    """A coloring leaves at least one edge monochromatic."""

    def __init__(self, edge_index, edge):
        self.edge_index = edge_index
        self.edge = edge
        super().__init__(f"edge {edge_index} {list(edge)} is monochromatic")
