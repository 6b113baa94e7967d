"""Exception types shared across the package.

The CLI maps these onto process exit codes: ConfigError -> 1,
DataError (and subclasses) -> 2, InvariantError -> 3.
"""


class ConfigError(Exception):
    """Invalid run configuration or command-line usage."""


class DataError(Exception):
    """Problem with input data: missing file, malformed row, non-finite value."""


class SchemaError(DataError):
    """Persisted artifact (model, selection, report) fails schema validation."""


class InvariantError(Exception):
    """An internal invariant was violated; indicates a bug, not bad input."""
