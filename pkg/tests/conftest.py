"""
Shared fixtures for the postlb test suite.
"""

import logging

import pytest

from postlb.config import get_settings
from postlb.machine import Program, parse_program

ALWAYS_REJECT = "1: STOP\n"
ALWAYS_ACCEPT = "1: MARK -> 2\n2: STOP\n"
HEAD_MOVING = "1: RIGHT -> 2\n2: LEFT -> 3\n3: STOP\n"
BRANCH_ON_HEAD = "1: BRANCH marked=2 blank=3\n2: STOP\n3: STOP\n"
# Reads the last box of the first part.
READS_FIRST_PART = "1: LEFT -> 2\n2: BRANCH marked=3 blank=4\n3: STOP\n4: STOP\n"


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Point the config directory at a temp dir and drop cached settings."""
    monkeypatch.setattr("postlb.config.get_config_dir", lambda: tmp_path / ".postlb")
    monkeypatch.delenv("POSTLB_SEED", raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def restore_logging():
    """Undo handler changes made by setup_logging."""
    root = logging.getLogger()
    reports = logging.getLogger("reports")
    saved = (root.handlers[:], root.level, reports.handlers[:], reports.propagate)
    yield
    for handler in root.handlers + reports.handlers:
        if handler not in saved[0] and handler not in saved[2]:
            handler.close()
    root.handlers, root.level = saved[0], saved[1]
    reports.handlers, reports.propagate = saved[2], saved[3]


@pytest.fixture
def always_reject() -> Program:
    return parse_program(ALWAYS_REJECT)


@pytest.fixture
def always_accept() -> Program:
    return parse_program(ALWAYS_ACCEPT)


@pytest.fixture
def branch_on_head() -> Program:
    return parse_program(BRANCH_ON_HEAD)
