"""
Test settings, error records and output helpers
"""
import json
import os
from fractions import Fraction

import mpmath
import pytest
from pydantic import ValidationError

from walker.config import Settings, get_settings, load_dotenv_into_environ, precision_context
from walker.errors import DomainError, PoleError, WalkerError
from walker.utils import format_real, write_file


def test_defaults():
    s = Settings()
    assert s.precision == 50
    assert s.quad_dps == 25
    assert s.workers == 1
    assert s.log_level == "WARNING"


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("WALKER_PRECISION", "80")
    monkeypatch.setenv("WALKER_LOG_LEVEL", "debug")
    get_settings.cache_clear()
    s = get_settings()
    assert s.precision == 80
    assert s.log_level == "DEBUG"
    # cached until cleared
    monkeypatch.setenv("WALKER_PRECISION", "60")
    assert get_settings().precision == 80


def test_invalid_settings(monkeypatch):
    with pytest.raises(ValidationError):
        Settings(log_level="chatty")
    monkeypatch.setenv("WALKER_WORKERS", "0")
    with pytest.raises(ValidationError):
        Settings.from_env()


def test_dotenv_loader(tmp_path, monkeypatch):
    monkeypatch.delenv("WALKER_SEED", raising=False)
    monkeypatch.setenv("WALKER_QUAD_DPS", "40")
    env = tmp_path / ".env"
    env.write_text("# local\nWALKER_SEED='7'\n\nWALKER_QUAD_DPS=30\nnot a pair\n", encoding="utf-8")
    load_dotenv_into_environ(env)
    assert os.environ["WALKER_SEED"] == "7"
    assert os.environ["WALKER_QUAD_DPS"] == "40"
    os.environ.pop("WALKER_SEED")
    load_dotenv_into_environ(tmp_path / "missing.env")


def test_precision_context():
    with precision_context(70) as dps:
        assert dps == 70
        assert mpmath.mp.dps == 70
    assert mpmath.mp.dps == 30
    with precision_context() as dps:
        assert dps == get_settings().precision


def test_error_records_are_json_ready():
    err = PoleError("pole at s=-2", pole=Fraction(-2), sign=-1)
    record = err.to_dict()
    assert record["type"] == "PoleError"
    assert record["code"] == "pole"
    assert record["details"] == {"pole": "-2", "sign": -1}
    json.dumps(record)
    assert isinstance(DomainError("x"), ValueError)
    assert isinstance(DomainError("x"), WalkerError)


def test_format_real():
    assert format_real(Fraction(3, 4), 10) == "3/4"
    assert format_real(7, 10) == "7"
    assert format_real(mpmath.mpf(1) / 3, 5) == "0.33333"
    assert format_real(float("nan"), 5) == "nan"


def test_write_file(tmp_path):
    target = tmp_path / "out.csv"
    write_file(target, "k,value\n0,1\n")
    assert target.read_text(encoding="utf-8") == "k,value\n0,1\n"
