"""CSV ingestion, split management, encoding, and sensitive-group partitions."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, SchemaError
from .seeding import derive_rng


@dataclass
class ColumnSchema:
    """Column roles for one CSV file.

    Feature columns are every header not named as label, sensitive, or
    dropped. The sensitive column is used for group partitions only and is
    not part of the feature matrix.
    """

    label: str
    sensitive: str | None = None
    categorical: list[str] = field(default_factory=list)
    drop: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    seed: int = 0
    stratified: bool = True


@dataclass(frozen=True)
class SensitiveSpec:
    column: str
    privileged_value: str
    unprivileged_value: str

    def __post_init__(self):
        if self.privileged_value == self.unprivileged_value:
            raise DataError("privileged and unprivileged values must differ")


class TabularDataset:
    """Immutable feature matrix with binary labels and sensitive codes.

    ``sensitive`` holds small integer codes; ``sensitive_values`` maps the
    code back to the original cell text. Arrays are write-locked after
    construction so the dataset can be shared across parallel evaluations.
    """

    def __init__(self, name, features, labels, feature_names, sensitive,
                 sensitive_values=(), numeric_columns=None):
        features = np.asarray(features, dtype=np.float64)
        labels = np.asarray(labels, dtype=np.int64)
        sensitive = np.asarray(sensitive, dtype=np.int64)
        if features.ndim != 2:
            raise DataError("features must be a 2-D matrix")
        n = features.shape[0]
        if labels.shape != (n,) or sensitive.shape != (n,):
            raise DataError("features, labels, and sensitive lengths disagree")
        if not np.all((labels == 0) | (labels == 1)):
            raise DataError("labels must contain only 0 and 1")
        if not np.all(np.isfinite(features)):
            raise DataError("features contain NaN or infinite values")
        if len(feature_names) != features.shape[1]:
            raise DataError("feature_names length does not match feature count")
        self.name = name
        self.features = features
        self.labels = labels
        self.feature_names = list(feature_names)
        self.sensitive = sensitive
        self.sensitive_values = tuple(sensitive_values)
        self.numeric_columns = (list(range(features.shape[1]))
                                if numeric_columns is None else list(numeric_columns))
        for arr in (self.features, self.labels, self.sensitive):
            arr.flags.writeable = False

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]


def _parse_cell(text, column, row_index):
    try:
        return float(text)
    except ValueError:
        raise DataError(
            f"row {row_index}: cannot parse {text!r} in column {column!r}"
        ) from None


def ingest_csv(path, schema: ColumnSchema, name: str | None = None) -> TabularDataset:
    """Read an RFC-4180 CSV with a header row into a TabularDataset.

    Categorical columns are one-hot encoded in first-occurrence order.
    Rows with missing (empty) cells are rejected and counted, not imputed;
    an unparseable non-empty cell is an error naming the row. Numeric
    columns are kept raw here; ``standardize`` applies train-split z-scores.
    """
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read dataset {path}: {exc}") from None
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        rows = list(reader)

    col_index = {h: i for i, h in enumerate(header)}
    if schema.label not in col_index:
        raise SchemaError(f"label column {schema.label!r} not in header")
    if schema.sensitive is not None and schema.sensitive not in col_index:
        raise SchemaError(f"sensitive column {schema.sensitive!r} not in header")
    for c in schema.categorical:
        if c not in col_index:
            raise SchemaError(f"categorical column {c!r} not in header")

    skip = {schema.label} | set(schema.drop)
    if schema.sensitive is not None:
        skip.add(schema.sensitive)
    feature_cols = [h for h in header if h not in skip]
    categorical = [c for c in feature_cols if c in set(schema.categorical)]
    numeric = [c for c in feature_cols if c not in set(schema.categorical)]

    kept_rows = []
    n_rejected = 0
    for r_idx, row in enumerate(rows):
        if len(row) != len(header):
            raise DataError(f"row {r_idx}: expected {len(header)} cells, got {len(row)}")
        if any(row[col_index[c]].strip() == "" for c in feature_cols + [schema.label]
               + ([schema.sensitive] if schema.sensitive else [])):
            n_rejected += 1
            continue
        kept_rows.append((r_idx, row))
    if not kept_rows:
        raise DataError(f"{path}: no complete rows after rejecting missing values")

    labels = np.empty(len(kept_rows), dtype=np.int64)
    for out_i, (r_idx, row) in enumerate(kept_rows):
        raw = row[col_index[schema.label]].strip()
        val = _parse_cell(raw, schema.label, r_idx)
        if val not in (0.0, 1.0):
            raise DataError(f"row {r_idx}: label {raw!r} is not binary")
        labels[out_i] = int(val)

    # category levels in first-occurrence order, stable across runs
    cat_levels: dict[str, list[str]] = {c: [] for c in categorical}
    for _, row in kept_rows:
        for c in categorical:
            v = row[col_index[c]].strip()
            if v not in cat_levels[c]:
                cat_levels[c].append(v)

    feature_names: list[str] = []
    blocks: list[np.ndarray] = []
    numeric_positions: list[int] = []
    for c in feature_cols:
        if c in cat_levels:
            levels = cat_levels[c]
            block = np.zeros((len(kept_rows), len(levels)))
            lut = {lv: j for j, lv in enumerate(levels)}
            for out_i, (_, row) in enumerate(kept_rows):
                block[out_i, lut[row[col_index[c]].strip()]] = 1.0
            blocks.append(block)
            feature_names.extend(f"{c}={lv}" for lv in levels)
        else:
            col = np.empty((len(kept_rows), 1))
            for out_i, (r_idx, row) in enumerate(kept_rows):
                col[out_i, 0] = _parse_cell(row[col_index[c]].strip(), c, r_idx)
            numeric_positions.append(len(feature_names))
            blocks.append(col)
            feature_names.append(c)
    features = np.hstack(blocks) if blocks else np.zeros((len(kept_rows), 0))

    if schema.sensitive is not None:
        sens_levels: list[str] = []
        codes = np.empty(len(kept_rows), dtype=np.int64)
        for out_i, (_, row) in enumerate(kept_rows):
            v = row[col_index[schema.sensitive]].strip()
            if v not in sens_levels:
                sens_levels.append(v)
            codes[out_i] = sens_levels.index(v)
        sensitive, sensitive_values = codes, tuple(sens_levels)
    else:
        sensitive, sensitive_values = np.zeros(len(kept_rows), dtype=np.int64), ("",)

    ds = TabularDataset(
        name=name or str(path),
        features=features,
        labels=labels,
        feature_names=feature_names,
        sensitive=sensitive,
        sensitive_values=sensitive_values,
        numeric_columns=numeric_positions,
    )
    ds.n_rejected_rows = n_rejected
    return ds


def split(ds: TabularDataset, spec: SplitSpec):
    """Deterministic train/test index split; stratified keeps label ratio.

    Per-class train counts are round(fraction * class size), so a stratified
    split preserves the label ratio within one sample per class.
    """
    if not 0.0 < spec.train_fraction < 1.0:
        raise DataError("train_fraction must lie strictly between 0 and 1")
    rng = derive_rng(spec.seed, "split")
    n = ds.n_samples

    def _round(x):
        return int(np.floor(x + 0.5))

    if spec.stratified:
        train_parts = []
        test_parts = []
        for cls in (0, 1):
            idx = np.flatnonzero(ds.labels == cls)
            perm = idx[rng.permutation(len(idx))]
            k = _round(spec.train_fraction * len(idx))
            train_parts.append(perm[:k])
            test_parts.append(perm[k:])
        train_idx = np.sort(np.concatenate(train_parts))
        test_idx = np.sort(np.concatenate(test_parts))
    else:
        perm = rng.permutation(n)
        k = _round(spec.train_fraction * n)
        train_idx = np.sort(perm[:k])
        test_idx = np.sort(perm[k:])

    for cls in (0, 1):
        if not np.any(ds.labels[train_idx] == cls):
            raise DataError(f"split leaves class {cls} empty in the training set")
    return train_idx, test_idx


def standardize(ds: TabularDataset, train_idx) -> TabularDataset:
    """Z-score numeric columns using training-split statistics only.

    One-hot columns stay 0/1. Constant columns get scale 1 to avoid a
    divide-by-zero; their standardized value is then a constant 0.
    """
    feats = ds.features.copy()
    cols = ds.numeric_columns
    if cols:
        mu = feats[np.asarray(train_idx)][:, cols].mean(axis=0)
        sd = feats[np.asarray(train_idx)][:, cols].std(axis=0)
        sd = np.where(sd == 0.0, 1.0, sd)
        feats[:, cols] = (feats[:, cols] - mu) / sd
    out = TabularDataset(ds.name, feats, ds.labels, ds.feature_names,
                         ds.sensitive, ds.sensitive_values, ds.numeric_columns)
    out.n_rejected_rows = getattr(ds, "n_rejected_rows", 0)
    return out


def group_partition(ds: TabularDataset, spec: SensitiveSpec):
    """Index sets for the privileged and unprivileged groups.

    Rows whose sensitive value is neither configured value are excluded;
    the count of exclusions is returned alongside the two index sets.
    """
    if spec.privileged_value not in ds.sensitive_values:
        raise DataError(f"privileged value {spec.privileged_value!r} absent from dataset")
    if spec.unprivileged_value not in ds.sensitive_values:
        raise DataError(f"unprivileged value {spec.unprivileged_value!r} absent from dataset")
    priv_code = ds.sensitive_values.index(spec.privileged_value)
    unpriv_code = ds.sensitive_values.index(spec.unprivileged_value)
    priv = np.flatnonzero(ds.sensitive == priv_code)
    unpriv = np.flatnonzero(ds.sensitive == unpriv_code)
    excluded = ds.n_samples - len(priv) - len(unpriv)
    if len(priv) == 0 or len(unpriv) == 0:
        raise DataError("a sensitive group partition is empty")
    return priv, unpriv, excluded
