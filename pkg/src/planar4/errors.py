"""Exception types shared across the package."""


class Planar4Error(Exception):
    """Base class for all library errors."""


class NotPlanarError(Planar4Error):
    """The input graph admits no plane embedding."""


class FormatError(Planar4Error):
    """A graph6 / planar_code stream is malformed.

    ``offset`` is the byte offset (or line number for ascii formats) of the
    first unreadable record.
    """

    def __init__(self, message, offset=None):
        super().__init__(message if offset is None else f"{message} (offset {offset})")
        self.offset = offset


class GenerationError(Planar4Error):
    """A generator could not satisfy its post-condition within budget."""


class CounterexampleFound(Planar4Error):
    """A structural guarantee failed on a concrete graph.

    This is a critical report, never a recoverable condition: it carries the
    offending graph serialized as graph6 so the instance can be replayed.
    """

    def __init__(self, message, graph6=None, details=None):
        super().__init__(message)
        self.graph6 = graph6
        self.details = details


class InternalInvariantError(Planar4Error):
    """An internal consistency check failed; indicates a bug, not bad input."""
