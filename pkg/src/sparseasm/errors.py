"""Exception classes shared across the package."""


class BadIndex(ValueError):
    """An index is < 1, non-integral, NaN/Inf, or not representable."""

    def __init__(self, position, value):
        self.position = position
        self.value = value
        super().__init__(f"bad index at position {position}: {value!r}")


class LengthMismatch(ValueError):
    """Input arrays disagree in length and no scalar broadcast applies."""


class DimensionTooSmall(ValueError):
    """Explicit matrix dimensions cannot hold the given indices."""


class ParseError(ValueError):
    """Malformed input file; carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResultMismatch(RuntimeError):
    """Two implementations produced different matrices."""


class InstrumentationUnavailable(RuntimeError):
    """Access counting was requested but instrumentation is disabled."""


class UnknownDataset(ValueError):
    """Benchmark dataset id outside {1, 2, 3}."""
