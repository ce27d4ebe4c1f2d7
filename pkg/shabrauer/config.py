# shabrauer/config.py

import os
from dataclasses import dataclass, replace
from typing import Optional

from dotenv import load_dotenv


@dataclass(frozen=True)
class Config:
    # Groups
    max_group_order: int = 256

    # Oracle budgets
    oracle_max_enumeration: int = 10 ** 7
    oracle_max_group_order: int = 12

    # Thread pool size for per-subgroup restrictions
    workers: int = 1

    # Logging
    log_level: str = "WARNING"
    log_file: Optional[str] = None

    def __post_init__(self):
        for name in ("max_group_order", "oracle_max_enumeration", "oracle_max_group_order", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"Config.{name} must be positive, got {getattr(self, name)}")

    def with_overrides(self, **overrides) -> "Config":
        """Returns a copy with the given fields replaced; None values are ignored."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    @classmethod
    def from_env(cls, dotenv_path: Optional[str] = None) -> "Config":
        """
        Builds a Config from SHABRAUER_* environment variables, loading a .env file first.

        Args:
            dotenv_path (Optional[str]): Explicit .env location; python-dotenv searches upwards when omitted.

        Returns:
            Config: Defaults overridden by whatever the environment sets.
        """
        load_dotenv(dotenv_path)
        defaults = cls()
        return cls(
            max_group_order=int(os.getenv('SHABRAUER_MAX_ORDER', defaults.max_group_order)),
            oracle_max_enumeration=int(
                os.getenv('SHABRAUER_ORACLE_MAX_ENUMERATION', defaults.oracle_max_enumeration)
            ),
            oracle_max_group_order=int(
                os.getenv('SHABRAUER_ORACLE_MAX_GROUP_ORDER', defaults.oracle_max_group_order)
            ),
            workers=int(os.getenv('SHABRAUER_WORKERS', defaults.workers)),
            log_level=os.getenv('SHABRAUER_LOG_LEVEL', defaults.log_level),
            log_file=os.getenv('SHABRAUER_LOG_FILE') or None,
        )


DEFAULT_CONFIG = Config()
