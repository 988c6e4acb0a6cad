"""Unit tests for FreqallocSettings config and env loading."""

from pathlib import Path

from freqalloc_core.config import FreqallocSettings


def test_defaults():
    s = FreqallocSettings()
    assert s.MAX_WORKERS == 4
    assert s.OUTPUT_DIR == "runs"
    assert s.DESK_PROFILE == Path("configs/desk.cfg")
    assert s.ZF_CONDITION_LIMIT == 1e12
    assert s.LOG_LEVEL == "INFO"


def test_env_override(monkeypatch):
    monkeypatch.setenv("MAX_WORKERS", "1")
    monkeypatch.setenv("ZF_CONDITION_LIMIT", "1e8")
    monkeypatch.setenv("LOG_LEVEL", "DEBUG")
    s = FreqallocSettings()
    assert s.MAX_WORKERS == 1
    assert s.ZF_CONDITION_LIMIT == 1e8
    assert s.LOG_LEVEL == "DEBUG"


def test_env_names_are_case_sensitive(monkeypatch):
    monkeypatch.setenv("max_workers", "9")
    assert FreqallocSettings().MAX_WORKERS == 4
