"""Exception hierarchy shared by all modules."""


class SlabColorError(Exception):
    """Base class for every error raised by this package."""


class ParseError(SlabColorError, ValueError):
    """Malformed distance-set or slab-coloring text.

    ``position`` is the 0-based character offset where parsing failed.
    """

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class BudgetExceeded(SlabColorError):
    """A search would exceed its configured state or node budget."""


class PropagationContradiction(SlabColorError):
    """Forced propagation reached a point whose neighbors carry all colors."""

    def __init__(self, point, neighbors):
        self.point = point
        self.neighbors = neighbors
        super().__init__(
            f"point {point} sees all colors among its neighbors: {neighbors}"
        )
