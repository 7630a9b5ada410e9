from __future__ import annotations

import pytest


def pytest_addoption(parser):
    parser.addoption("--full", action="store_true", default=False,
                     help="also run the multi-hour reproduction rows")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--full"):
        return
    skip = pytest.mark.skip(reason="long-running; use --full")
    for item in items:
        if "full" in item.keywords:
            item.add_marker(skip)
