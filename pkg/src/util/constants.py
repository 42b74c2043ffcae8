"""
This module contains numerical tolerances, environment settings,
error message templates and default values.
"""

from __future__ import annotations

import logging
import math
import os
import sys
from dataclasses import dataclass
from typing import Any, ClassVar

from dotenv import find_dotenv, load_dotenv

########################################################
#       Base Config Class
########################################################


@dataclass
class BaseConfig:
    def _convert_env_value(self, value: str, field_type: type, current_value: Any) -> Any:
        try:
            return field_type(value)
        except (ValueError, TypeError):
            return current_value

    def update_from_env(self) -> None:
        for field_name, default_value in getattr(self, "DEFAULTS", {}).items():
            if field_name in os.environ:
                value = self._convert_env_value(
                    os.environ[field_name], type(default_value), getattr(self, field_name)
                )
                setattr(self, field_name, value)

    @classmethod
    def validate_all(cls, *config_classes: type[BaseConfig]) -> None:
        invalid_vars = []

        for config_class in config_classes:
            for field_name, default_value in getattr(config_class, "DEFAULTS", {}).items():
                if field_name not in os.environ:
                    continue
                value = os.environ[field_name]
                field_type = type(default_value)
                try:
                    if not value:
                        invalid_vars.append(f"{field_name} (empty value)")
                    elif field_type in (int, float):
                        parsed = field_type(value)
                        if field_name.endswith(("_TOL", "_LIMIT")) and parsed <= 0:
                            invalid_vars.append(f"{field_name} (must be positive)")
                except (ValueError, TypeError) as e:
                    invalid_vars.append(f"{field_name} ({str(e)})")

        if invalid_vars:
            msg = (
                f"❌ Invalid environment variable values: {', '.join(invalid_vars)}"
                "\n❌ Please check your .env file and fix these issues."
            )
            raise ValueError(msg)


########################################################
#       Error Messages and Class
########################################################


ERROR_MESSAGES = {
    "DOMAIN_ERROR": "{error}",
    "GEOMETRY_ERROR": "{error}",
    "ENCLOSURE_ERROR": "{error}",
    "SINGULAR_ERROR": "{error}",
    "WEIGHT_ERROR": "{error}",
    "CERTIFICATE_ERROR": "{error}",
    "KERNEL_ERROR": "{error}",
    "NUMERICAL_ERROR": "{error}",
    "APPROX_ERROR": "{error}",
    "SEARCH_ERROR": "{error}",
    "INGEST_ERROR": "line {line}: {error}",
    "USAGE_ERROR": "{error}",
    "NETWORK_ERROR": "{error}",
}


@dataclass
class ErrMsg(BaseConfig):

    def __post_init__(self) -> None:
        for key in ERROR_MESSAGES:
            setattr(self, key, ERROR_MESSAGES[key])
            if (value := os.getenv(key)) is not None:
                setattr(self, key, value)


########################################################
#       Config Class
########################################################


@dataclass
class Config(BaseConfig):
    DEFAULTS: ClassVar[dict[str, Any]] = {
        "LOG_LEVEL": "INFO",
        # Geometry
        "UNIT_TOL": 1e-12,
        "POLE_TOL": 1e-12,
        "DOMAIN_TOL": 1e-12,
        # Linear algebra
        "COND_LIMIT": 1e12,
        "WEIGHT_SUM_TOL": 1e-8,
        "GRAM_TOL": 1e-6,
        "EXACT_NORM_MAX_T": 60,
        # Worst-case error
        "NEGATIVE_E2_TOL": 1e-12,
        "SERIES_ELL_MAX": 5000,
        "PAIRWISE_CHUNK": 512,
        "EVAL_CHUNK": 8192,
        # Design search
        "SEARCH_MAX_ITER": 200,
        "SEARCH_TOL": 1e-10,
        "SEARCH_RESTARTS": 5,
        "SEARCH_JITTER": 0.15,
        "DEFAULT_SEED": 20150101,
        # Approximation
        "GRID_SIZE": 100000,
        # Fixture downloads
        "USER_AGENT": "teps/Python",
        "HTTP_TIMEOUT_TOTAL": 120.0,
        "HTTP_TIMEOUT_CONNECT": 30.0,
        "HTTP_TIMEOUT_READ": 90.0,
        "HTTP_MAX_RETRIES": 3,
    }

    def __post_init__(self) -> None:
        for field_name, default_value in self.DEFAULTS.items():
            setattr(self, field_name, default_value)
        self.update_from_env()

    def tolerances(self) -> dict[str, Any]:
        """Snapshot of every numeric setting, recorded in output artifacts."""
        return {
            key: getattr(self, key)
            for key, value in self.DEFAULTS.items()
            if isinstance(value, int | float) and not key.startswith("HTTP_")
        }


########################################################
#       Load Config and Error Messages
########################################################


def load_config() -> tuple[Config, ErrMsg]:
    if env_path := find_dotenv(usecwd=True):
        load_dotenv(env_path, override=True)
        error_msgs_path = os.path.join(os.path.dirname(env_path), ".error_messages")
        if os.path.exists(error_msgs_path):
            load_dotenv(error_msgs_path, override=True)

    BaseConfig.validate_all(Config)
    return Config(), ErrMsg()


########################################################
#       Initialize Module
########################################################

config, err = load_config()

FOUR_PI = 4.0 * math.pi
HEADERS = {"User-Agent": config.USER_AGENT}
logger = logging.getLogger("teps")
if not logger.handlers:
    logger.addHandler(logging.StreamHandler(sys.stderr))
logger.setLevel(getattr(logging, str(config.LOG_LEVEL).upper(), logging.INFO))


__all__ = ["config", "err", "HEADERS", "FOUR_PI", "logger"]
