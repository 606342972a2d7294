"""Boundary attack quality against geometric ground truth and budget limits."""

import numpy as np
import pytest

from mirai.errors import ConfigError
from mirai.models import DecisionTree
from mirai.robustness.hsja import (AttackBudget, hsja_attack,
                                   hsja_robustness_score)


class _Halfspace:
    """Hard-label classifier: class 1 iff w @ x + b > 0."""

    def __init__(self, w, b=0.0):
        self.w = np.asarray(w, dtype=float)
        self.b = b

    def predict_proba(self, X):
        return (np.atleast_2d(X) @ self.w + self.b > 0).astype(float)

    def predict(self, X):
        return self.predict_proba(X).astype(int)


class _Constant:
    def predict_proba(self, X):
        return np.full(np.atleast_2d(X).shape[0], 0.9)

    def predict(self, X):
        return np.ones(np.atleast_2d(X).shape[0], dtype=int)


BUDGET = AttackBudget(max_queries=4000, epsilon=2.0, n_eval_points=4,
                      init_trials=40, boundary_tol=1e-3, grad_samples=24,
                      iterations=12)


def test_linear_boundary_near_optimal():
    # boundary is the hyperplane x0 = 0; from (1, 0) the true minimum is 1
    h = _Halfspace([1.0, 0.0])
    res = hsja_attack(h, np.array([1.0, 0.0]), BUDGET,
                      rng=np.random.default_rng(0))
    assert res.success
    assert h.predict(res.adversarial[None, :])[0] == 0
    assert 1.0 <= res.perturbation_norm <= 1.5


def test_linear_boundary_oblique():
    w = np.array([3.0, 4.0])
    h = _Halfspace(w, b=-5.0)   # distance from origin is 5/||w|| = 1
    x = np.array([2.0, 1.0])    # w@x - 5 = 5, distance 5/5 = 1
    res = hsja_attack(h, x, BUDGET, rng=np.random.default_rng(1))
    assert res.success
    assert 1.0 <= res.perturbation_norm <= 1.5


def test_constant_classifier_attack_fails():
    res = hsja_attack(_Constant(), np.zeros(3), BUDGET,
                      rng=np.random.default_rng(2))
    assert not res.success
    assert res.perturbation_norm == np.inf


def test_adversarial_point_really_flips():
    h = _Halfspace([1.0, -2.0], b=0.3)
    x = np.array([1.5, 0.2])
    orig = h.predict(x[None, :])[0]
    res = hsja_attack(h, x, BUDGET, rng=np.random.default_rng(3))
    assert res.success
    assert h.predict(res.adversarial[None, :])[0] != orig


def test_tree_matches_grid_oracle():
    rng = np.random.default_rng(4)
    X = rng.uniform(-2.0, 2.0, size=(300, 2))
    y = ((X[:, 0] > 0.3) ^ (X[:, 1] > -0.5)).astype(int)
    h = DecisionTree("t", max_depth=2, min_leaf=5).fit(X, y)

    x = np.array([1.4, 0.8])
    label = h.predict(x[None, :])[0]
    step = 0.02
    axis = np.arange(-2.0, 2.0 + step, step)
    gx, gy = np.meshgrid(axis, axis)
    grid = np.column_stack([gx.ravel(), gy.ravel()])
    flipped = grid[h.predict(grid) != label]
    oracle = np.min(np.linalg.norm(flipped - x, axis=1))

    res = hsja_attack(h, x, BUDGET, rng=np.random.default_rng(5))
    assert res.success
    assert res.perturbation_norm >= oracle - 2 * step
    assert res.perturbation_norm <= 2 * oracle + 2 * step


def test_trajectory_monotone_and_budget_respected():
    h = _Halfspace([1.0, 1.0, -0.5])
    tight = AttackBudget(max_queries=150, epsilon=2.0, n_eval_points=2,
                         init_trials=10, grad_samples=8, iterations=6)
    res = hsja_attack(h, np.array([2.0, 1.0, 0.0]), tight,
                      rng=np.random.default_rng(6))
    assert res.queries <= 150
    traj = np.asarray(res.norm_trajectory)
    assert np.all(np.diff(traj) <= 1e-12)


def test_attack_deterministic_given_rng():
    h = _Halfspace([1.0, -1.0])
    a = hsja_attack(h, np.array([1.0, -1.0]), BUDGET, np.random.default_rng(7))
    b = hsja_attack(h, np.array([1.0, -1.0]), BUDGET, np.random.default_rng(7))
    assert a.perturbation_norm == b.perturbation_norm
    assert a.queries == b.queries


def test_score_epsilon_semantics():
    h = _Halfspace([1.0, 0.0])
    X = np.array([[1.0, 0.0], [1.1, 2.0], [-0.9, 1.0], [1.05, -3.0]])
    y = h.predict(X)
    # every row sits about one unit from the boundary
    tight = AttackBudget(max_queries=4000, epsilon=0.5, n_eval_points=4)
    score, details, flags = hsja_robustness_score(h, X, y, tight, seed=11)
    assert score == 1.0   # attacks land near norm 1, beyond the 0.5 budget
    assert flags == []
    assert all(d["success"] for d in details)

    loose = AttackBudget(max_queries=4000, epsilon=2.0, n_eval_points=4)
    score, details, _ = hsja_robustness_score(h, X, y, loose, seed=11)
    assert score == 0.0   # the same perturbations now fall inside the budget
    assert {d["row"] for d in details} == {0, 1, 2, 3}


def test_score_skips_misclassified_rows():
    h = _Halfspace([1.0, 0.0])
    X = np.array([[1.0, 0.0], [2.0, 1.0]])
    y = np.array([0, 1])   # the first row is already misclassified
    score, details, _ = hsja_robustness_score(h, X, y, BUDGET, seed=1)
    assert [d["row"] for d in details] == [1]


def test_score_no_correct_predictions():
    h = _Halfspace([1.0, 0.0])
    X = np.array([[1.0, 0.0], [2.0, 1.0]])
    y = np.array([0, 0])
    score, details, flags = hsja_robustness_score(h, X, y, BUDGET, seed=1)
    assert score == 1.0
    assert details == []
    assert flags == ["no_correct_predictions"]


def test_score_deterministic():
    h = _Halfspace([2.0, -1.0], b=0.2)
    rng = np.random.default_rng(8)
    X = rng.normal(size=(10, 2))
    y = h.predict(X)
    small = AttackBudget(max_queries=800, epsilon=1.0, n_eval_points=3,
                         init_trials=15, grad_samples=8, iterations=5)
    a = hsja_robustness_score(h, X, y, small, seed=21)
    b = hsja_robustness_score(h, X, y, small, seed=21)
    assert a == b


def test_budget_validation():
    with pytest.raises(ConfigError):
        AttackBudget(max_queries=0)
    with pytest.raises(ConfigError):
        AttackBudget(epsilon=0.0)
