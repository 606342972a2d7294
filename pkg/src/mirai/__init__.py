"""Five-dimension trustworthiness scoring for tabular binary classifiers.

The engine trains or wraps a cohort of models, measures explainability,
fairness, sustainability, robustness, and privacy on a shared held-out
split, aligns every metric so 1 is best, and aggregates each model into a
single weighted index ranked against a designated target model.
"""

from .config import DEFAULT_WEIGHTS, DIMENSIONS, RunConfig, load_config
from .errors import (AdapterError, ConfigError, DataError, MetricError,
                     MiraiError, SchemaError)
from .pipeline import evaluate_run
from .report import MiraiReport, load_report, render_table, save_report, write_csv
from .scoring import (DimensionScore, MetricRecord, ModelReport, align, mirai,
                      rank_and_compare)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_WEIGHTS", "DIMENSIONS", "RunConfig", "load_config",
    "MiraiError", "ConfigError", "DataError", "SchemaError", "MetricError",
    "AdapterError", "evaluate_run", "MiraiReport", "load_report",
    "save_report", "render_table", "write_csv", "MetricRecord",
    "DimensionScore", "ModelReport", "align", "mirai", "rank_and_compare",
    "__version__",
]
