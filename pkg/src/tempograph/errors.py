"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for every toolkit-specific error."""


class EmptyEventError(ToolkitError, ValueError):
    """An event surface form contains no non-whitespace characters."""


class SelfLoopError(ToolkitError, ValueError):
    """An edge would connect an event to itself."""


class OrderMismatchError(ToolkitError, ValueError):
    """A requested edge order is not a permutation of the graph's edges."""


class UnparseableTargetError(ToolkitError, ValueError):
    """A target string is not clean, line-structured edge statements."""


class EmptySpanError(ToolkitError, ValueError):
    """A pooling span selects no positions."""


class SpanOutOfRangeError(ToolkitError, IndexError):
    """A span index falls outside the hidden-state matrix."""


class DuplicateIndexError(ToolkitError, ValueError):
    """A span repeats positions while deduplication is disabled."""


class DegenerateVectorError(ToolkitError, ValueError):
    """A vector norm is too small for cosine distance."""


class DimensionMismatchError(ToolkitError, ValueError):
    """Two matrices or embedding sets disagree on vector dimension."""


class MergeRegimeMismatchError(ToolkitError, ValueError):
    """Compared graphs disagree on whether reciprocal labels were merged."""


class EmptyGraphError(ToolkitError, ValueError):
    """A statistic is undefined on a graph with no nodes."""


class InvalidCountsError(ToolkitError, ValueError):
    """Salience counts violate their preconditions."""


class UnparseableAnnotationError(ToolkitError, ValueError):
    """An annotation row cannot be converted into a document."""
