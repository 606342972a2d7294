"""End-to-end command-line behavior: verbs, exit codes, and artifacts."""

import json
from types import SimpleNamespace

import numpy as np
import pytest
import yaml

import mirai.cli as cli
from mirai.cli import main


def _write_dataset(path, n=140, missing_row=False):
    rng = np.random.default_rng(101)
    x1, x2, x3 = rng.normal(size=(3, n))
    grp = rng.choice(["a", "b"], size=n)
    sex = rng.choice(["m", "f"], size=n, p=[0.6, 0.4])
    z = (1.2 * x1 - 0.8 * x2 + 0.3 * (grp == "a") + 0.2 * (sex == "m")
         + rng.normal(scale=0.5, size=n))
    label = (z > 0).astype(int)
    lines = ["x1,x2,x3,grp,sex,label"]
    for i in range(n):
        lines.append(f"{x1[i]:.6f},{x2[i]:.6f},{x3[i]:.6f},"
                     f"{grp[i]},{sex[i]},{label[i]}")
    if missing_row:
        lines.append("0.1,,0.3,a,m,1")
    path.write_text("\n".join(lines) + "\n")


def _config_doc(data_path, out_dir):
    return {
        "dataset": {"path": str(data_path), "label": "label", "name": "cli-toy",
                    "categorical": ["grp"]},
        "sensitive": {"column": "sex", "privileged": "m", "unprivileged": "f"},
        "models": [
            {"name": "tree", "kind": "tree",
             "params": {"max_depth": 3, "min_leaf": 4}},
            {"name": "linear", "kind": "linear", "params": {"epochs": 80}},
        ],
        "target_model": "tree",
        "seed": 11,
        "output_dir": str(out_dir),
        "explain": {"n_explain": 6, "n_background": 8, "n_coalitions": 32,
                    "lipschitz_neighbours": 2, "faithfulness_subsets": 4,
                    "faithfulness_size": 2},
        "attack": {"n_points": 2, "query_budget": 200, "init_trials": 8,
                   "grad_samples": 6, "iterations": 3},
        "drift": {"noise_levels": [0.1], "n_permutations": 100, "max_points": 40},
        "privacy": {"knn_k": 3, "max_shadow_points": 60,
                    "max_valuation_points": 40},
    }


@pytest.fixture()
def workspace(tmp_path):
    data = tmp_path / "data.csv"
    _write_dataset(data)
    out = tmp_path / "out"
    cfg_path = tmp_path / "run.yaml"
    cfg_path.write_text(yaml.safe_dump(_config_doc(data, out)))
    return SimpleNamespace(tmp=tmp_path, config=cfg_path, out=out, data=data)


def _last_line(capsys):
    return capsys.readouterr().out.strip().splitlines()[-1]


def test_validate_prints_plan(workspace, capsys):
    rc = main(["validate", "--config", str(workspace.config)])
    out = capsys.readouterr().out
    assert rc == 0
    assert "cli-toy" in out
    assert "<- target" in out
    assert "split: " in out
    assert "sex" in out


def test_train_prints_metrics_table(workspace, capsys):
    rc = main(["train", "--config", str(workspace.config)])
    out = capsys.readouterr().out
    assert rc == 0
    assert "accuracy" in out and "tree" in out and "linear" in out


def test_evaluate_writes_report_path_last(workspace, capsys):
    rc = main(["evaluate", "--config", str(workspace.config)])
    assert rc == 0
    path = _last_line(capsys)
    assert path.endswith("report.json")
    doc = json.loads(open(path).read())
    assert set(doc["models"]) == {"tree", "linear"}
    assert doc["target_model"] == "tree"


def test_evaluate_deterministic_across_runs(workspace, capsys):
    main(["evaluate", "--config", str(workspace.config),
          "--output-dir", str(workspace.tmp / "r1")])
    p1 = _last_line(capsys)
    main(["evaluate", "--config", str(workspace.config),
          "--output-dir", str(workspace.tmp / "r2")])
    p2 = _last_line(capsys)
    a = json.loads(open(p1).read())
    b = json.loads(open(p2).read())
    assert a["determinism_hash"] == b["determinism_hash"]
    a.pop("meta")
    b.pop("meta")
    assert a == b


def test_seed_flag_changes_outcome(workspace, capsys):
    main(["evaluate", "--config", str(workspace.config),
          "--output-dir", str(workspace.tmp / "s1")])
    base = json.loads(open(_last_line(capsys)).read())
    main(["evaluate", "--config", str(workspace.config), "--seed", "99",
          "--output-dir", str(workspace.tmp / "s2")])
    other = json.loads(open(_last_line(capsys)).read())
    assert other["seed"] == 99
    assert other["determinism_hash"] != base["determinism_hash"]


def test_set_override_changes_outcome(workspace, capsys):
    main(["evaluate", "--config", str(workspace.config),
          "--output-dir", str(workspace.tmp / "o1")])
    base = json.loads(open(_last_line(capsys)).read())
    main(["evaluate", "--config", str(workspace.config),
          "--set", "privacy.knn_k=1",
          "--output-dir", str(workspace.tmp / "o2")])
    other = json.loads(open(_last_line(capsys)).read())
    assert other["determinism_hash"] != base["determinism_hash"]
    assert other["config_hash"] != base["config_hash"]


def test_compare_prints_table_and_deltas(workspace, capsys):
    rc = main(["compare", "--config", str(workspace.config)])
    out = capsys.readouterr().out
    assert rc == 0
    assert "MIRAI" in out
    assert "deltas vs target (tree):" in out
    assert out.strip().splitlines()[-1].endswith("report.json")


def test_report_renders_without_recomputing(workspace, capsys, monkeypatch):
    main(["evaluate", "--config", str(workspace.config)])
    capsys.readouterr()

    def _boom(*a, **k):
        raise AssertionError("report must not re-run the evaluation")

    monkeypatch.setattr(cli, "evaluate_run", _boom)
    rc = main(["report", "--config", str(workspace.config)])
    out = capsys.readouterr().out
    assert rc == 0
    assert (workspace.out / "report.csv").exists()
    assert (workspace.out / "dimension_scores.png").exists()
    assert (workspace.out / "ranking.png").exists()
    assert out.strip().splitlines()[-1].endswith("report.json")


def test_report_explicit_path(workspace, capsys, tmp_path):
    main(["evaluate", "--config", str(workspace.config)])
    stored = _last_line(capsys)
    rc = main(["report", "--config", str(workspace.config),
               "--report-path", stored,
               "--output-dir", str(tmp_path / "rendered")])
    assert rc == 0
    assert (tmp_path / "rendered" / "report.csv").exists()


def test_report_without_stored_run_is_data_error(workspace, capsys):
    rc = main(["report", "--config", str(workspace.config)])
    assert rc == 3
    assert "not found" in capsys.readouterr().err


def test_missing_config_is_config_error(tmp_path, capsys):
    rc = main(["validate", "--config", str(tmp_path / "absent.yaml")])
    assert rc == 2
    assert "config error" in capsys.readouterr().err


def test_missing_dataset_is_data_error(workspace, capsys):
    doc = _config_doc(workspace.tmp / "gone.csv", workspace.out)
    cfg = workspace.tmp / "bad-data.yaml"
    cfg.write_text(yaml.safe_dump(doc))
    rc = main(["validate", "--config", str(cfg)])
    assert rc == 3


def test_bad_target_is_config_error(workspace, capsys):
    doc = _config_doc(workspace.data, workspace.out)
    doc["target_model"] = "nope"
    cfg = workspace.tmp / "bad-target.yaml"
    cfg.write_text(yaml.safe_dump(doc))
    assert main(["validate", "--config", str(cfg)]) == 2


def test_override_validation(workspace, capsys):
    assert main(["evaluate", "--config", str(workspace.config),
                 "--set", "attack-epsilon-2"]) == 2
    assert main(["evaluate", "--config", str(workspace.config),
                 "--set", "attack.no_such_key=1"]) == 2
    assert main(["evaluate", "--config", str(workspace.config),
                 "--set", "models.tree=1"]) == 2


def test_prediction_file_models_rejected(workspace, capsys):
    doc = _config_doc(workspace.data, workspace.out)
    doc["models"].append({"name": "frozen", "kind": "external_file",
                          "params": {"predictions": "preds.json"},
                          "resources": {"parameter_count": 5,
                                        "macs_per_sample": 5}})
    cfg = workspace.tmp / "file-model.yaml"
    cfg.write_text(yaml.safe_dump(doc))
    rc = main(["validate", "--config", str(cfg)])
    assert rc == 2
    assert "external_command" in capsys.readouterr().err


def test_rows_with_missing_values_warn(workspace, capsys):
    data = workspace.tmp / "gappy.csv"
    _write_dataset(data, missing_row=True)
    doc = _config_doc(data, workspace.tmp / "warn-out")
    cfg = workspace.tmp / "warn.yaml"
    cfg.write_text(yaml.safe_dump(doc))
    rc = main(["evaluate", "--config", str(cfg)])
    out = capsys.readouterr().out
    assert rc == 5
    assert "dropped for missing values" in out


def test_renormalized_weights_warn_on_validate(workspace, capsys):
    doc = _config_doc(workspace.data, workspace.out)
    doc["weights"] = {d: 1.0 for d in
                      ("explainability", "fairness", "sustainability",
                       "robustness", "privacy")}
    cfg = workspace.tmp / "renorm.yaml"
    cfg.write_text(yaml.safe_dump(doc))
    rc = main(["validate", "--config", str(cfg)])
    out = capsys.readouterr().out
    assert rc == 5
    assert "renormalized" in out


def test_config_dir_env_fallback(workspace, capsys, monkeypatch):
    monkeypatch.chdir(workspace.out.parent)
    monkeypatch.setenv("MIRAI_CONFIG_DIR", str(workspace.config.parent))
    assert main(["validate", "--config", "run.yaml"]) == 0


def test_workers_flag_matches_serial_result(workspace, capsys):
    main(["evaluate", "--config", str(workspace.config),
          "--output-dir", str(workspace.tmp / "w1")])
    serial = json.loads(open(_last_line(capsys)).read())
    main(["evaluate", "--config", str(workspace.config), "--workers", "2",
          "--output-dir", str(workspace.tmp / "w2")])
    threaded = json.loads(open(_last_line(capsys)).read())
    assert serial["determinism_hash"] == threaded["determinism_hash"]
