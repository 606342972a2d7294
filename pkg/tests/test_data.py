"""CSV ingestion, encoding, splitting, and standardization."""

import numpy as np
import pytest

from mirai.data import (ColumnSchema, SensitiveSpec, SplitSpec, TabularDataset,
                        group_partition, ingest_csv, split, standardize)
from mirai.errors import DataError, SchemaError


def write_csv(path, text):
    path.write_text(text.strip() + "\n", encoding="utf-8")
    return path


BASIC = """
age,color,sex,label
1.0,blue,m,1
2.0,red,f,0
3.0,blue,m,1
4.0,green,f,0
"""


def test_ingest_one_hot_first_occurrence_order(tmp_path):
    p = write_csv(tmp_path / "d.csv", BASIC)
    ds = ingest_csv(p, ColumnSchema(label="label", sensitive="sex",
                                    categorical=["color"]))
    assert ds.feature_names == ["age", "color=blue", "color=red", "color=green"]
    assert ds.features.shape == (4, 4)
    np.testing.assert_array_equal(ds.features[:, 1], [1, 0, 1, 0])
    np.testing.assert_array_equal(ds.labels, [1, 0, 1, 0])
    assert ds.numeric_columns == [0]


def test_ingest_sensitive_codes(tmp_path):
    p = write_csv(tmp_path / "d.csv", BASIC)
    ds = ingest_csv(p, ColumnSchema(label="label", sensitive="sex",
                                    categorical=["color"]))
    assert ds.sensitive_values == ("m", "f")
    np.testing.assert_array_equal(ds.sensitive, [0, 1, 0, 1])


def test_ingest_missing_cells_rejected_and_counted(tmp_path):
    p = write_csv(tmp_path / "d.csv", """
a,label
1.0,1
,0
2.0,0
""")
    ds = ingest_csv(p, ColumnSchema(label="label"))
    assert ds.n_samples == 2
    assert ds.n_rejected_rows == 1


def test_ingest_unparseable_cell_names_row(tmp_path):
    p = write_csv(tmp_path / "d.csv", """
a,label
1.0,1
oops,0
""")
    with pytest.raises(DataError, match="row 1"):
        ingest_csv(p, ColumnSchema(label="label"))


def test_ingest_non_binary_label(tmp_path):
    p = write_csv(tmp_path / "d.csv", "a,label\n1.0,2\n")
    with pytest.raises(DataError, match="binary"):
        ingest_csv(p, ColumnSchema(label="label"))


def test_ingest_missing_label_column(tmp_path):
    p = write_csv(tmp_path / "d.csv", "a,b\n1.0,2.0\n")
    with pytest.raises(SchemaError):
        ingest_csv(p, ColumnSchema(label="label"))


def test_ingest_drop_columns(tmp_path):
    p = write_csv(tmp_path / "d.csv", "a,junk,label\n1.0,x,1\n2.0,y,0\n")
    ds = ingest_csv(p, ColumnSchema(label="label", drop=["junk"]))
    assert ds.feature_names == ["a"]


def test_dataset_arrays_write_locked():
    ds = TabularDataset("t", [[1.0], [2.0]], [0, 1], ["a"], [0, 0])
    with pytest.raises(ValueError):
        ds.features[0, 0] = 9.0


def test_dataset_rejects_nan():
    with pytest.raises(DataError, match="NaN"):
        TabularDataset("t", [[np.nan]], [0], ["a"], [0])


def test_split_stratified_counts():
    labels = np.array([0] * 30 + [1] * 70)
    ds = TabularDataset("t", np.arange(100, dtype=float).reshape(-1, 1),
                        labels, ["a"], np.zeros(100, dtype=int))
    train, test = split(ds, SplitSpec(train_fraction=0.8, seed=3))
    assert len(train) == 80 and len(test) == 20
    assert int(ds.labels[train].sum()) == 56
    assert sorted(np.concatenate([train, test])) == list(range(100))


def test_split_deterministic():
    labels = np.array([0, 1] * 50)
    ds = TabularDataset("t", np.arange(100, dtype=float).reshape(-1, 1),
                        labels, ["a"], np.zeros(100, dtype=int))
    a = split(ds, SplitSpec(0.7, seed=11))
    b = split(ds, SplitSpec(0.7, seed=11))
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1], b[1])


def test_split_empty_class_error():
    labels = np.array([0] * 99 + [1])
    ds = TabularDataset("t", np.arange(100, dtype=float).reshape(-1, 1),
                        labels, ["a"], np.zeros(100, dtype=int))
    with pytest.raises(DataError, match="class"):
        split(ds, SplitSpec(train_fraction=0.01, seed=0))


def test_standardize_uses_train_statistics():
    rng = np.random.default_rng(0)
    feats = np.column_stack([rng.normal(5.0, 2.0, 50), np.ones(50)])
    ds = TabularDataset("t", feats, rng.integers(0, 2, 50), ["x", "hot"],
                        np.zeros(50, dtype=int), numeric_columns=[0])
    train = np.arange(40)
    out = standardize(ds, train)
    assert abs(out.features[train, 0].mean()) < 1e-12
    assert abs(out.features[train, 0].std() - 1.0) < 1e-12
    np.testing.assert_array_equal(out.features[:, 1], np.ones(50))


def test_standardize_constant_column():
    feats = np.full((10, 1), 3.0)
    ds = TabularDataset("t", feats, np.array([0, 1] * 5), ["c"],
                        np.zeros(10, dtype=int))
    out = standardize(ds, np.arange(10))
    np.testing.assert_array_equal(out.features, np.zeros((10, 1)))


def test_group_partition_counts_exclusions():
    ds = TabularDataset("t", np.zeros((6, 1)), [0, 1, 0, 1, 0, 1],
                        ["a"], [0, 1, 2, 0, 1, 2], sensitive_values=("m", "f", "x"))
    priv, unpriv, excluded = group_partition(
        ds, SensitiveSpec("s", privileged_value="m", unprivileged_value="f"))
    np.testing.assert_array_equal(priv, [0, 3])
    np.testing.assert_array_equal(unpriv, [1, 4])
    assert excluded == 2


def test_group_partition_missing_value():
    ds = TabularDataset("t", np.zeros((2, 1)), [0, 1], ["a"], [0, 0],
                        sensitive_values=("m",))
    with pytest.raises(DataError):
        group_partition(ds, SensitiveSpec("s", "m", "f"))


def test_sensitive_spec_must_differ():
    with pytest.raises(DataError):
        SensitiveSpec("s", "m", "m")
