"""Exception hierarchy shared by every freqalloc module."""


class FreqallocError(Exception):
    """Base class for all library errors."""


class ConfigError(FreqallocError, ValueError):
    """Invalid experiment configuration, optionally pinned to a source line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}" if line is not None else message)


class DegenerateGeometryError(FreqallocError, ValueError):
    """An AP and a UE share a position, so path loss is undefined."""


class ZfInfeasibleError(FreqallocError, ArithmeticError):
    """Zero-forcing cannot be formed for a UE (singular or ill-conditioned Gram)."""


class UnassignedUeError(FreqallocError, ValueError):
    """A per-subband query was made for a UE that holds no subband."""


class ShapeMismatchError(FreqallocError, ValueError):
    """Array dimensions do not chain or do not match the declared layout."""


class StaleCacheError(FreqallocError, RuntimeError):
    """A forward cache was used after the network parameters changed."""


class BufferNotReadyError(FreqallocError, RuntimeError):
    """The replay buffer holds fewer transitions than the requested batch."""


class FormatError(FreqallocError, ValueError):
    """A persisted binary file has a bad magic or truncated payload."""


class PlotError(FreqallocError, ValueError):
    """Nothing plottable was supplied."""
