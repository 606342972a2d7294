"""Exception hierarchy shared across the engine.

Each class maps to one CLI exit-code family, so raising the right type
matters more than the message text.
"""


class MiraiError(Exception):
    """Base class for all engine errors."""


class ConfigError(MiraiError):
    """Invalid run configuration (bad weights, unknown model, missing target)."""


class DataError(MiraiError):
    """Dataset cannot be ingested or violates an invariant."""


class SchemaError(DataError):
    """Column roles in the schema do not match the file."""


class MetricError(MiraiError):
    """A metric computation failed hard (NaN input, degenerate cohort)."""


class AdapterError(MiraiError):
    """External model adapter misbehaved (row mismatch, bad probability)."""
