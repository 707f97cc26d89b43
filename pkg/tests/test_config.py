import logging.config

from config import (
    get_check_config,
    get_config,
    get_environment,
    get_error_message,
    get_logging_config,
    get_precision_config,
    validate_config,
)
from config.settings import EXIT_CODES, Settings


def test_configuration_is_valid():
    assert validate_config()
    assert set(get_config()) >= {"precision", "check", "io", "exit_codes", "logging"}


def test_exit_codes():
    assert EXIT_CODES == {"ok": 0, "check_failed": 1, "error": 2}


def test_precision_defaults():
    precision = get_precision_config()
    assert precision["default_depth"] >= precision["default_weight"]
    assert precision["generator_names"][:2] == ["x", "y"]


def test_error_messages():
    assert get_error_message("check", "big_cell") == "Point is not on the big cell."
    assert get_error_message("check", "missing") == "An unknown error occurred."


def test_thread_count_from_the_environment(monkeypatch):
    env = get_check_config()["threads_env"]
    monkeypatch.setenv(env, "3")
    assert Settings.thread_count() == 3
    assert get_environment()["threads"] == 3
    monkeypatch.setenv(env, "0")
    assert Settings.thread_count() == 1
    monkeypatch.setenv(env, "many")
    assert Settings.thread_count() == 1


def test_logging_config_applies():
    logging.config.dictConfig(get_logging_config())
    assert logging.getLogger().level == logging.WARNING
