"""Exception hierarchy.

Every error carries a short machine-readable ``category`` that the CLI
prints as ``error:<category>:<message>`` on a single line.
"""


class OodbenchError(Exception):
    """Base class for all toolkit errors."""

    category = "data"


class InvalidKernelError(OodbenchError):
    category = "invalid-kernel"


class InvalidSizeError(OodbenchError):
    category = "invalid-size"


class ShapeError(OodbenchError):
    category = "shape"


class InvalidSeverityError(OodbenchError):
    category = "invalid-severity"


class ParameterError(OodbenchError):
    category = "parameter"


class MissingAssetError(OodbenchError):
    category = "missing-asset"


class NoThresholdError(OodbenchError):
    category = "no-threshold"


class UndefinedAccuracyError(OodbenchError):
    category = "undefined-accuracy"


class IncompleteGridError(OodbenchError):
    category = "incomplete-grid"


class DivisionByZeroError(OodbenchError):
    category = "division-by-zero"


class EmptyInputError(OodbenchError):
    category = "empty-input"


class PartitionError(OodbenchError):
    category = "partition"


class CoverageError(OodbenchError):
    category = "coverage"


class FormatError(OodbenchError):
    category = "format"


class CorruptFileError(OodbenchError):
    category = "corrupt-file"


class ParseError(OodbenchError):
    category = "parse"


class DegenerateEmbeddingError(OodbenchError):
    category = "degenerate-embedding"


class PartialManifestError(OodbenchError):
    category = "partial-manifest"


class IoError(OodbenchError):
    category = "io"
