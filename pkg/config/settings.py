"""
Settings Configuration Module
Contains all configuration settings for the Sato Grassmannian toolkit
"""

import os
from typing import Dict, Any

# Application Metadata
APP_METADATA = {
    "name": "sato-toolkit",
    "version": "1.0.0",
    "author": "Sato Toolkit Team",
    "description": "Exact-arithmetic desk calculator for the Sato Grassmannian, "
                   "tau-functions and Baker-Akhiezer functions",
}

# Arithmetic and truncation defaults
PRECISION_CONFIG = {
    "default_weight": 4,
    "default_depth": 12,
    "default_precision": 12,
    # slack added on top of the minimal Krichever root precision
    "root_slack": 2,
    "generator_names": ["x", "y", "w", "v", "s", "r"],
}

# Identity check settings
CHECK_CONFIG = {
    "default_weight": 4,
    "consistent_message": "consistent through weight {weight}",
    "failure_message": "inconsistent at weight {weight}",
    "threads_env": "SATO_THREADS",
    "default_threads": 1,
}

# Input/output settings
IO_CONFIG = {
    "schema_version": "sato.v1",
    "indent": 2,
    "sort_keys": True,
}

# Exit codes for the command line
EXIT_CODES = {
    "ok": 0,
    "check_failed": 1,
    "error": 2,
}

# Logging configuration (dictConfig schema)
LOGGING_CONFIG = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "standard": {
            "format": "%(asctime)s %(levelname)s %(name)s: %(message)s",
        },
    },
    "handlers": {
        "stderr": {
            "class": "logging.StreamHandler",
            "formatter": "standard",
            "stream": "ext://sys.stderr",
        },
    },
    "root": {
        "handlers": ["stderr"],
        "level": "WARNING",
    },
}

# Error Messages
ERROR_MESSAGES = {
    "input": {
        "invalid_window": "Window must satisfy lo <= hi.",
        "dependent_frame": "Frame members are linearly dependent within the precision window.",
        "index_mismatch": "Points must have the same index.",
        "non_monic": "Curve equation leading data has no root in the field.",
    },
    "precision": {
        "window_too_small": "Requested window exceeds the precision of the input.",
        "depth_too_small": "Point depth is too small for the requested weight.",
        "weight_too_small": "Truncation weight is too shallow for this operator.",
    },
    "field": {
        "mismatch": "Operands live over different fields.",
        "characteristic": "This operation requires characteristic zero.",
        "not_prime": "Field characteristic must be 0 or a prime.",
    },
    "check": {
        "big_cell": "Point is not on the big cell.",
        "certification": "Exact certification failed.",
    },
    "curve": {
        "not_coprime": "Curve exponents must be coprime.",
        "bad_root": "Newton recursion failed for the curve expansion.",
        "depth_unreachable": "Requested depth does not reach the conductor.",
    },
}


class Settings:
    """Settings management class"""

    @staticmethod
    def get_all_settings() -> Dict[str, Any]:
        """Get all settings as a dictionary"""
        return {
            "app_metadata": APP_METADATA,
            "precision": PRECISION_CONFIG,
            "check": CHECK_CONFIG,
            "io": IO_CONFIG,
            "exit_codes": EXIT_CODES,
            "logging": LOGGING_CONFIG,
            "errors": ERROR_MESSAGES,
        }

    @staticmethod
    def get_error_message(category: str, key: str) -> str:
        """Get specific error message"""
        return ERROR_MESSAGES.get(category, {}).get(key, "An unknown error occurred.")

    @staticmethod
    def thread_count() -> int:
        """Worker threads for partition scans, read from SATO_THREADS"""
        raw = os.getenv(CHECK_CONFIG["threads_env"], str(CHECK_CONFIG["default_threads"]))
        try:
            return max(1, int(raw))
        except ValueError:
            return CHECK_CONFIG["default_threads"]


# Export settings
__all__ = [
    'Settings',
    'APP_METADATA',
    'PRECISION_CONFIG',
    'CHECK_CONFIG',
    'IO_CONFIG',
    'EXIT_CODES',
    'LOGGING_CONFIG',
    'ERROR_MESSAGES',
]
