"""
Configuration for the Sato Grassmannian toolkit: accessors over the
dictionaries in settings.py and a sanity check run at import.
"""

import os

from .settings import (
    APP_METADATA,
    CHECK_CONFIG,
    ERROR_MESSAGES,
    EXIT_CODES,
    IO_CONFIG,
    LOGGING_CONFIG,
    PRECISION_CONFIG,
    Settings,
)

# Application Version
__version__ = APP_METADATA["version"]
__author__ = APP_METADATA["author"]


def get_config():
    """Get complete configuration dictionary"""
    return Settings.get_all_settings()


def get_precision_config():
    """Get arithmetic and truncation defaults"""
    return PRECISION_CONFIG


def get_check_config():
    """Get identity check configuration"""
    return CHECK_CONFIG


def get_io_config():
    """Get input/output configuration"""
    return IO_CONFIG


def get_logging_config():
    """Get the logging dictConfig"""
    return LOGGING_CONFIG


def get_error_message(category, key):
    """Message template for an error category and key"""
    return Settings.get_error_message(category, key)


class ConfigurationError(Exception):
    """Raised when the settings dictionaries are missing or inconsistent"""


def validate_config():
    """Check that every section is present and the precision defaults are usable"""
    sections = {
        "APP_METADATA": APP_METADATA,
        "PRECISION_CONFIG": PRECISION_CONFIG,
        "CHECK_CONFIG": CHECK_CONFIG,
        "IO_CONFIG": IO_CONFIG,
        "LOGGING_CONFIG": LOGGING_CONFIG,
        "EXIT_CODES": EXIT_CODES,
    }
    empty = [name for name, section in sections.items() if not section]
    if empty:
        raise ConfigurationError(f"Empty configuration sections: {', '.join(empty)}")

    weight = PRECISION_CONFIG["default_weight"]
    if weight < 0:
        raise ConfigurationError("default_weight must be non-negative")
    if min(PRECISION_CONFIG["default_depth"], PRECISION_CONFIG["default_precision"]) < weight:
        raise ConfigurationError("default depth and precision must reach default_weight")
    if sorted(EXIT_CODES.values()) != [0, 1, 2]:
        raise ConfigurationError("exit codes must be 0, 1 and 2")
    return True


def get_environment():
    """Thread count as resolved from the environment, with the raw value"""
    return {
        "threads": Settings.thread_count(),
        "threads_env": CHECK_CONFIG["threads_env"],
        "raw_threads": os.getenv(CHECK_CONFIG["threads_env"]),
        "version": __version__,
    }


validate_config()


__all__ = [
    'get_config',
    'get_precision_config',
    'get_check_config',
    'get_io_config',
    'get_logging_config',
    'get_error_message',
    'get_environment',
    'validate_config',
    'ConfigurationError',
    'ERROR_MESSAGES',
]
