# SPDX-License-Identifier: Apache-2.0
"""
Configuration settings for postlb.
"""

import os
import sys
import tomllib
from functools import lru_cache
from pathlib import Path
from typing import Literal

from pydantic import Field, ValidationError
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

from postlb.convention import Convention
from postlb.errors import ConfigurationError

SEED_ENV_VAR = "POSTLB_SEED"


def get_config_dir() -> Path:
    """Get config directory.

    Returns:
        Path to the config directory (~/.postlb)
    """
    return Path.home() / ".postlb"


def get_config_file() -> Path:
    """Get config file path.

    Returns:
        Path to the config file (~/.postlb/config.toml)
    """
    return get_config_dir() / "config.toml"


def _restrict(path: Path, mode: int) -> None:
    if sys.platform != "win32":
        path.chmod(mode)


DEFAULT_CONFIG = """# postlb configuration file
# Place this file at ~/.postlb/config.toml

# Step cap for run, trace and attack
step_cap = 100000

# Randomised Lemma 2 probe
lemma2_step_cap = 10000
lemma2_trials = 1000
max_program_size = 40

# Random seed; the POSTLB_SEED environment variable overrides it
seed = 0

# Full representation style: "minterm-dnf" or "maxterm-cnf"
repr_style = "minterm-dnf"

# Logging
log_level = "INFO"
log_dir = ""  # Empty uses platform-specific default

# Default symbol space convention
[convention]
initial_head = 0
split = 0
first_anchor = -1
second_anchor = 0
answer_box = 0
answer_marked_means = "accept"
"""


def create_default_config() -> bool:
    """Create default config file if not exists.

    Returns:
        True if a new config file was created, False if it already exists
    """
    config_file = get_config_file()
    if config_file.exists():
        return False

    config_dir = get_config_dir()
    config_dir.mkdir(parents=True, exist_ok=True)
    _restrict(config_dir, 0o700)

    config_file.write_text(DEFAULT_CONFIG, encoding="utf-8")
    _restrict(config_file, 0o600)
    return True


def create_config_from_dict(config: dict) -> None:
    """Create config file from dictionary, replacing any existing one.

    Args:
        config: Dictionary containing configuration values
    """
    import tomli_w

    config_file = get_config_file()
    config_dir = get_config_dir()
    config_dir.mkdir(parents=True, exist_ok=True)
    _restrict(config_dir, 0o700)

    defaults = Settings()
    toml_config: dict = {
        "step_cap": config.get("step_cap", defaults.step_cap),
        "lemma2_step_cap": config.get("lemma2_step_cap", defaults.lemma2_step_cap),
        "lemma2_trials": config.get("lemma2_trials", defaults.lemma2_trials),
        "max_program_size": config.get("max_program_size", defaults.max_program_size),
        "seed": config.get("seed", defaults.seed),
        "repr_style": config.get("repr_style", defaults.repr_style),
        "log_level": config.get("log_level", defaults.log_level),
        "log_dir": config.get("log_dir", defaults.log_dir),
    }
    convention = config.get("convention")
    if convention:
        # validate before writing
        toml_config["convention"] = Convention(**convention).model_dump(
            mode="json", exclude_none=True
        )

    with open(config_file, "wb") as f:
        tomli_w.dump(toml_config, f)
    _restrict(config_file, 0o600)


def load_config_from_file() -> dict:
    """Load configuration from TOML file.

    Returns:
        Dictionary containing configuration values, empty dict if file doesn't exist
    """
    config_file = get_config_file()
    if not config_file.exists():
        return {}
    try:
        with open(config_file, "rb") as f:
            return tomllib.load(f)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f"{config_file}: {exc}") from exc


class Settings(BaseSettings):
    """Settings loaded from the config file.

    Environment variables are ignored except POSTLB_SEED, which
    ``from_config`` applies on top of the file.
    """

    model_config = SettingsConfigDict(extra="ignore")

    # Simulation
    step_cap: int = Field(default=100_000, ge=1, description="Step cap for single runs and attacks")

    # Lemma 2 probe
    lemma2_step_cap: int = Field(default=10_000, ge=1, description="Step cap for probe runs")
    lemma2_trials: int = Field(default=1000, ge=1, description="Number of random probe trials")
    max_program_size: int = Field(default=40, ge=1, description="Largest random program")
    seed: int = Field(default=0, description="Random seed")

    repr_style: Literal["minterm-dnf", "maxterm-cnf"] = Field(
        default="minterm-dnf", description="Full representation style"
    )

    # Logging
    log_level: str = Field(default="INFO", description="Log level (DEBUG, INFO, WARNING, ERROR)")
    log_dir: str = Field(default="", description="Log directory (empty for platform default)")

    convention: Convention = Field(default_factory=Convention)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        return (init_settings,)

    @classmethod
    def from_config(cls) -> "Settings":
        """Load settings from ~/.postlb/config.toml plus the POSTLB_SEED override.

        Returns:
            Settings instance populated from config file
        """
        config_data = load_config_from_file()

        # Filter out empty values
        kwargs = {key: value for key, value in config_data.items() if value not in (None, "")}

        seed = os.environ.get(SEED_ENV_VAR)
        if seed is not None:
            try:
                kwargs["seed"] = int(seed)
            except ValueError:
                raise ConfigurationError(f"{SEED_ENV_VAR} must be an integer, got {seed!r}")

        try:
            return cls(**kwargs)
        except ValidationError as exc:
            raise ConfigurationError(str(exc)) from exc


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance; a missing config file yields defaults."""
    return Settings.from_config()
