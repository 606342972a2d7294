"""Shared fixtures and the acceptance-line reporter."""

import numpy as np
import pytest

_ACCEPTANCE: dict[int, str] = {}


def record_criterion(number: int, passed: bool, detail: str) -> None:
    word = "PASS" if passed else "FAIL"
    _ACCEPTANCE[number] = f"criterion {number:02d}: {word} - {detail}"


@pytest.fixture
def criterion():
    return record_criterion


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[number])


def make_blobs(n_per_class, d, rng, separation=3.0):
    """Two spherical Gaussian clusters along the first axis."""
    center = np.zeros(d)
    center[0] = separation / 2.0
    X0 = rng.normal(0.0, 1.0, size=(n_per_class, d)) - center
    X1 = rng.normal(0.0, 1.0, size=(n_per_class, d)) + center
    X = np.vstack([X0, X1])
    y = np.concatenate([np.zeros(n_per_class, dtype=np.int64),
                        np.ones(n_per_class, dtype=np.int64)])
    perm = rng.permutation(len(y))
    return X[perm], y[perm]


@pytest.fixture
def blobs():
    return make_blobs
