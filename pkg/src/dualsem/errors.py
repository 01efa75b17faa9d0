"""Exception hierarchy shared across the toolkit.

The CLI maps these onto exit codes: ConfigError -> 2, DataError -> 3,
TrainingError / EvaluationError -> 4.
"""


class DualsemError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(DualsemError):
    """Invalid or inconsistent configuration."""


class DataError(DualsemError):
    """Problem with input data files or their contents."""


class SchemaError(DataError):
    """A record does not match the expected file schema."""


class ValidationError(DataError):
    """A record is schema-valid but violates a content invariant."""


class CheckpointError(DualsemError):
    """Checkpoint missing, corrupt, or incompatible with the requested model."""


class TrainingError(DualsemError):
    """Training aborted; carries diagnostic context where available."""


class EvaluationError(DualsemError):
    """Evaluation could not be carried out on the given inputs."""
