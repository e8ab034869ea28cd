"""
Tests for the built-in corpus, the random fan generator and settings
"""

import random

import pytest

from config import PROJECT_ROOT, Settings
from core.corpus import complete_standard_fans, random_complete_fan, random_complete_fans, standard_fans
from core.fans import is_complete, validate_fan
from services.fan_document import FanDocumentCodec
from utils.exceptions import FanError


def test_standard_fans_match_corpus_files(corpus_dir):
    codec = FanDocumentCodec()
    for name, f in standard_fans().items():
        assert codec.load_fan(corpus_dir / f"{name}.fan") == f, name


def test_complete_standard_fans():
    assert [f.name for f in complete_standard_fans()] == ["p1", "p2", "p1xp1", "f1", "p3"]


def test_random_fans_are_reproducible():
    first = random_complete_fans(4, seed=7)
    second = random_complete_fans(4, seed=7)
    assert first == second
    assert [f.rank for f in first] == [2, 3, 2, 3]
    assert first[0].name == "random0_rank2"


@pytest.mark.parametrize("rank", [2, 3])
def test_random_fans_are_valid_and_complete(rank):
    rng = random.Random(11)
    for _ in range(3):
        f = random_complete_fan(rng, rank)
        assert validate_fan(f) == []
        assert is_complete(f)


def test_unsupported_rank():
    with pytest.raises(FanError):
        random_complete_fan(random.Random(0), 4)


def test_relative_corpus_dir_resolves_against_project():
    settings = Settings(corpus_dir="data/corpus")
    assert settings.get_corpus_dir() == PROJECT_ROOT / "data" / "corpus"


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("FANIFOLD_JOBS", "3")
    monkeypatch.setenv("FANIFOLD_OUTPUT_FORMAT", "json")
    settings = Settings()
    assert settings.jobs == 3
    assert settings.output_format == "json"
