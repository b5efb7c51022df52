import logging

import pytest


@pytest.fixture(autouse=True)
def isolated_home(tmp_path, monkeypatch):
    """Keep tests away from ~/.fippbench and FIPP_THREADS."""
    monkeypatch.setenv("FIPPBENCH_HOME", str(tmp_path / "home"))
    monkeypatch.delenv("FIPP_THREADS", raising=False)
    return tmp_path / "home"


@pytest.fixture(autouse=True)
def restore_log_level():
    # the command line sets the root level
    root = logging.getLogger()
    level = root.level
    yield
    root.setLevel(level)
