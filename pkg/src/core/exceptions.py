"""Custom exceptions for the tweet classification toolkit."""


class ConfigurationError(Exception):
    """Raised when configuration is invalid or missing."""
    pass


class DatasetNotFoundError(Exception):
    """Raised when a requested dataset is not declared in the manifest."""
    pass


class DataError(Exception):
    """Base class for problems with input data, models or bundles."""
    pass


class MissingFileError(DataError):
    """Raised when an expected dataset or bundle file does not exist."""
    pass


class MissingColumnError(DataError):
    """Raised when a CSV header lacks a configured column."""
    pass


class CorpusFormatError(DataError):
    """Raised when a CSV file cannot be parsed (e.g. unbalanced quote at end of file)."""
    pass


class EmptyCorpusError(DataError):
    """Raised when a file or collection yields no usable documents."""
    pass


class LabelError(DataError):
    """Raised when a label is unknown to a schema, mapping or model."""
    pass


class SplitError(DataError):
    """Raised when a split or fold specification cannot be satisfied."""
    pass


class VocabularyError(DataError):
    """Raised when a vocabulary cannot be built."""
    pass


class TrainingError(DataError):
    """Raised when a model cannot be trained on the given data."""
    pass


class EvaluationError(DataError):
    """Raised when predictions cannot be scored."""
    pass


class BundleVersionError(DataError):
    """Raised when a model bundle has an unrecognized format version."""
    pass


class BundleCorruptError(DataError):
    """Raised when a model bundle is truncated or fails its checksum."""
    pass


class AcceptanceError(Exception):
    """Raised when a reproduced score falls outside its acceptance band."""
    pass


class ConvergenceWarning(UserWarning):
    """Emitted when an optimizer stops at its iteration limit."""
    pass
