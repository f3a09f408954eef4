"""Shared fixtures; `slow` tests only run with SAEA_RUN_SLOW=1"""

import os

import numpy as np
import pytest

RUN_SLOW = os.getenv("SAEA_RUN_SLOW") == "1"


def pytest_collection_modifyitems(config, items):
    if RUN_SLOW:
        return
    skip_slow = pytest.mark.skip(reason="set SAEA_RUN_SLOW=1 to run desk-scale experiments")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(autouse=True)
def _no_seed_override(monkeypatch):
    monkeypatch.delenv("SAEA_SEED", raising=False)
