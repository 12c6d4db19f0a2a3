"""Exception types shared across the toolkit.

Every error raised on purpose derives from :class:`SpikecastError`.  The
``exit_code`` attribute drives the CLI exit status: 1 for input/precondition
problems, 2 for failures that occur while a computation or backend is running.
"""


class SpikecastError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


# --- series-core ---------------------------------------------------------

class AllZeroSeries(SpikecastError):
    """Normalization (or a ratio) is undefined because the series sums to 0."""


class LengthMismatch(SpikecastError):
    """Paired sequences have different lengths."""


class EmptyInput(SpikecastError):
    """An operation received an empty sequence."""


class NegativeInput(SpikecastError):
    """A value that must be non-negative was negative."""


class FinerTarget(SpikecastError):
    """Aggregation target granularity is not coarser than the source."""


# --- forecast-models -----------------------------------------------------

class EmptyHistory(SpikecastError):
    """A forecaster was asked to predict from an empty history."""


class InsufficientHistory(SpikecastError):
    """The history is too short for the requested lag or model order."""


class NonFiniteInput(SpikecastError):
    """Input contains NaN or infinite values."""


class ExogMismatch(SpikecastError):
    """Exogenous inputs are missing, extra, or the wrong width."""


class MissingBackend(SpikecastError):
    """A foundation-model forecaster was requested without a bridge backend."""


# --- srgm -----------------------------------------------------------------

class UnsupportedKind(SpikecastError):
    """The reliability-model kind does not support this operation."""


class InvalidParams(SpikecastError):
    """Parameter values are outside the model's legal domain."""


class IndexExceedsFaults(SpikecastError):
    """Failure index is larger than the initial fault population."""


class ExhaustedFaults(SpikecastError):
    """The residual fault term is non-positive at this failure index."""


class NonMonotoneData(SpikecastError):
    """Cumulative failure counts must be non-decreasing."""


class TooFewPoints(SpikecastError):
    """Not enough data points to identify the model parameters."""


# --- statfit ---------------------------------------------------------------

class TooFewSamples(SpikecastError):
    """Not enough samples to fit a distribution."""


class SupportViolation(SpikecastError):
    """Samples fall outside the distribution's support or are degenerate."""


class EmptySamples(SpikecastError):
    """A statistical test received no samples."""


class SeriesTooShort(SpikecastError):
    """The series is too short for the requested stationarity test."""


class SingularRegression(SpikecastError):
    """The test regression matrix is rank deficient (e.g. constant series)."""


# --- eval-harness ----------------------------------------------------------

class EmptyReport(SpikecastError):
    """A selection was requested from a report with no rows."""


class BackendFailure(SpikecastError):
    """The forecasting bridge process or connection failed mid-run."""

    exit_code = 2


# --- synthgen ----------------------------------------------------------------

class InvalidSpec(SpikecastError):
    """A generator spec has out-of-range or inconsistent fields."""


# --- cli-app -----------------------------------------------------------------

class MissingFile(SpikecastError):
    """The input file does not exist."""


class SchemaViolation(SpikecastError):
    """The input file does not conform to the CSV schema."""


class NegativeCount(SpikecastError):
    """A count column contains a negative value."""


class UnsupportedFormat(SpikecastError):
    """The requested report format is not supported."""
