import json
import os

import pytest

from src.base import ParseError
from src.config import get_settings, load_settings, set_settings


@pytest.fixture(autouse=True)
def isolated(monkeypatch, tmp_path):
    """No stray .env or HYPERCURVES_* variables."""
    monkeypatch.chdir(tmp_path)
    for name in list(os.environ):
        if name.startswith("HYPERCURVES_"):
            monkeypatch.delenv(name)
    set_settings(None)
    yield
    set_settings(None)


def test_defaults():
    settings = load_settings()
    assert settings.seed == 0
    assert settings.height == 50
    assert settings.max_retries == 32
    assert settings.sieve.bound == 10
    assert settings.sieve.support == 3
    assert settings.sieve.prime_count == 5
    assert settings.sieve.op_budget == 10 ** 8


def test_environment(monkeypatch):
    monkeypatch.setenv("HYPERCURVES_HEIGHT", "7")
    monkeypatch.setenv("HYPERCURVES_SIEVE__BOUND", "4")
    settings = load_settings()
    assert settings.height == 7
    assert settings.sieve.bound == 4


def test_dotenv(tmp_path):
    (tmp_path / ".env").write_text("HYPERCURVES_MAX_RETRIES=5\n")
    assert load_settings().max_retries == 5


def test_precedence(monkeypatch, tmp_path):
    monkeypatch.setenv("HYPERCURVES_HEIGHT", "7")
    monkeypatch.setenv("HYPERCURVES_SEED", "3")
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"height": 9, "seed": 4, "sieve": {"support": 2}}))
    settings = load_settings(config, {"seed": 5, "height": None, "sieve": {"bound": None}})
    assert settings.seed == 5
    assert settings.height == 9
    assert settings.sieve.support == 2
    assert settings.sieve.bound == 10


def test_malformed_file(tmp_path):
    config = tmp_path / "config.json"
    config.write_text("{not json")
    with pytest.raises(ParseError) as excinfo:
        load_settings(config)
    assert str(config) in excinfo.value.details["location"]


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        load_settings(tmp_path / "absent.json")


@pytest.mark.parametrize(
    "overrides",
    [{"seed": -1}, {"seed": 1 << 64}, {"height": 0}, {"sieve": {"classes": "P"}}],
)
def test_invalid_values(overrides):
    with pytest.raises(ParseError):
        load_settings(None, overrides)


def test_global_instance():
    first = get_settings()
    assert get_settings() is first
    custom = load_settings(None, {"seed": 11})
    set_settings(custom)
    assert get_settings().seed == 11
