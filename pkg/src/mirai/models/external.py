"""Adapters that wrap externally trained models behind the handle protocol."""

from __future__ import annotations

import hashlib
import json
import shlex
import subprocess
import tempfile
from pathlib import Path

import numpy as np

from ..errors import AdapterError, ConfigError
from .base import ClassifierHandle, ResourceInfo


def _declared_resources(resources) -> ResourceInfo | None:
    if resources is None:
        return None
    try:
        params = int(resources["parameter_count"])
        macs = int(resources["macs_per_sample"])
    except (KeyError, TypeError, ValueError):
        raise ConfigError(
            "external resources need integer parameter_count and macs_per_sample"
        ) from None
    return ResourceInfo.from_macs(params, macs)


def _parse_probabilities(lines, n_rows, source):
    values = [ln.strip() for ln in lines if ln.strip() != ""]
    if len(values) != n_rows:
        raise AdapterError(f"{source}: expected {n_rows} probabilities, got {len(values)}")
    try:
        p = np.array([float(v) for v in values], dtype=np.float64)
    except ValueError:
        raise AdapterError(f"{source}: non-numeric probability line") from None
    if not np.all(np.isfinite(p)) or p.min() < 0.0 or p.max() > 1.0:
        raise AdapterError(f"{source}: probability outside [0,1]")
    return p


class CommandModel(ClassifierHandle):
    """Batch-command adapter.

    Each prediction call writes the query rows to a temporary CSV, runs the
    configured command with that path appended, and parses one decimal
    probability per line from stdout. Text is parsed at full precision, so
    results are bit-exact with respect to the external program's output.
    """

    family = "external"

    def __init__(self, model_id: str, command, resources=None, seed: int = 0):
        super().__init__(model_id, seed)
        if isinstance(command, str):
            command = shlex.split(command)
        if not command:
            raise ConfigError(f"model {model_id!r}: empty external command")
        self.command = [str(c) for c in command]
        self._resources = _declared_resources(resources)
        self._fitted = True
        self.train_flops = float(resources.get("train_flops", 0.0)) if resources else 0.0

    def _fit(self, X, y):
        return None

    def fit(self, X, y):
        # external models arrive trained; fitting is a no-op
        return self

    def _proba(self, X):
        with tempfile.NamedTemporaryFile("w", suffix=".csv", delete=False) as fh:
            tmp = Path(fh.name)
            for row in X:
                fh.write(",".join(repr(v) for v in row) + "\n")
        try:
            proc = subprocess.run(self.command + [str(tmp)], capture_output=True,
                                  text=True, check=False)
            if proc.returncode != 0:
                raise AdapterError(
                    f"external command failed (exit {proc.returncode}): "
                    f"{proc.stderr.strip()[:200]}")
            return _parse_probabilities(proc.stdout.splitlines(), X.shape[0],
                                        f"command {self.command[0]}")
        finally:
            tmp.unlink(missing_ok=True)

    def resource_info(self) -> ResourceInfo | None:
        return self._resources


class PredictionFileModel(ClassifierHandle):
    """Precomputed-prediction adapter.

    The file maps split names to probability lists. The pipeline registers
    each split's feature matrix once; later queries are matched to a
    registered matrix by content. Inputs that were never registered cannot
    be scored, so metrics that synthesize new rows are unavailable for this
    adapter.
    """

    family = "external"

    def __init__(self, model_id: str, predictions_path, resources=None, seed: int = 0):
        super().__init__(model_id, seed)
        path = Path(predictions_path)
        if not path.exists():
            raise ConfigError(f"prediction file not found: {path}")
        try:
            table = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError:
            raise ConfigError(f"prediction file is not valid JSON: {path}") from None
        if not isinstance(table, dict) or not table:
            raise ConfigError("prediction file must map split names to probability lists")
        self._by_split = {}
        for split_name, values in table.items():
            lines = [str(v) for v in values]
            self._by_split[str(split_name)] = lines
        self._bound: dict[str, np.ndarray] = {}
        self._resources = _declared_resources(resources)
        self._fitted = True
        self.train_flops = float(resources.get("train_flops", 0.0)) if resources else 0.0

    def fit(self, X, y):
        return self

    def _fit(self, X, y):
        return None

    @staticmethod
    def _fingerprint(X):
        h = hashlib.sha256()
        h.update(str(X.shape).encode())
        h.update(np.ascontiguousarray(X, dtype=np.float64).tobytes())
        return h.hexdigest()

    def bind_split(self, split_name: str, X):
        X = np.asarray(X, dtype=np.float64)
        if split_name not in self._by_split:
            raise AdapterError(f"prediction file has no split named {split_name!r}")
        lines = self._by_split[split_name]
        p = _parse_probabilities(lines, X.shape[0], f"split {split_name!r}")
        self._bound[self._fingerprint(X)] = p

    def _proba(self, X):
        key = self._fingerprint(X)
        if key not in self._bound:
            raise AdapterError(
                f"model {self.model_id!r} has no predictions for these rows; "
                "prediction-file adapters only score registered splits")
        return self._bound[key]

    def resource_info(self) -> ResourceInfo | None:
        return self._resources
