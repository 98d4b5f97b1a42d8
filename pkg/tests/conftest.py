"""tests/conftest.py — Shared pytest options.

Tests marked ``slow`` run full-size experiments and are skipped unless
``--runslow`` is given.
"""

from __future__ import annotations

import pytest


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run full-size experiments")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-size experiment, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="full-size experiment, use --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
