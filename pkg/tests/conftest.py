from __future__ import annotations

import shutil
import sys
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for line in results:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return FIXTURES / "corpus"


@pytest.fixture(scope="session")
def quotes_dir() -> Path:
    return FIXTURES / "cache" / "quotes"


@pytest.fixture()
def workspace(tmp_path, corpus_dir, quotes_dir) -> Path:
    """Fresh working directory with the fixture corpus and quote cache."""
    shutil.copytree(corpus_dir, tmp_path / "corpus")
    shutil.copytree(quotes_dir, tmp_path / "cache" / "quotes")
    return tmp_path


@pytest.fixture(scope="session")
def fake_plugin() -> Path:
    path = Path(__file__).parent / "fake_plugin.py"
    path.chmod(0o755)
    return path
