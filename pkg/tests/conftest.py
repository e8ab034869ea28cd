"""
Shared fixtures: corpus fans, the random complete fan set and a CLI runner
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import pytest

from config import config
from core import corpus
from cli.app import main as cli_main
from utils.logger import ROOT_LOGGER_NAME


@pytest.fixture(autouse=True, scope="session")
def _quiet_config():
    config.log_to_file = False
    config.output_format = "text"
    yield


@pytest.fixture(autouse=True)
def _fresh_logger():
    # Console handlers bind the stderr of the test that created them
    yield
    logger = logging.getLogger(ROOT_LOGGER_NAME)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()


@pytest.fixture
def corpus_dir() -> Path:
    return config.get_corpus_dir()


@pytest.fixture
def p1():
    return corpus.p1()


@pytest.fixture
def p2():
    return corpus.p2()


@pytest.fixture
def p1xp1():
    return corpus.p1xp1()


@pytest.fixture
def f1():
    return corpus.hirzebruch_f1()


@pytest.fixture
def p3():
    return corpus.p3()


@pytest.fixture
def a2():
    return corpus.affine_space(2)


@pytest.fixture
def a3():
    return corpus.affine_space(3)


@pytest.fixture
def trivial():
    return corpus.trivial_fan(0)


@dataclass
class CliRun:
    code: int
    out: str
    err: str

    def json(self) -> dict:
        return json.loads(self.out)


@pytest.fixture
def run_cli(capsys):
    """Run the CLI in-process and capture its streams"""

    def run(*argv: str) -> CliRun:
        code = cli_main(list(argv))
        captured = capsys.readouterr()
        return CliRun(code=code, out=captured.out, err=captured.err)

    return run
