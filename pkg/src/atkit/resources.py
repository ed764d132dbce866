"""Locating and reading the shipped, human-editable configuration files.

All configuration (topic registry, questionnaire, method definitions,
adaptation rules, toolbox catalog, presentation library) lives in a
single directory of plain text files.  Resolution order:

1. explicit path argument,
2. ``AT_CONFIG_DIR`` environment variable,
3. ``./config`` relative to the working directory,
4. the copies packaged with atkit.

The shared record format is pipe-separated fields, one record per line;
``#`` starts a comment, blank lines are ignored.
"""

from __future__ import annotations

import os
from importlib import resources as importlib_resources
from pathlib import Path


class ConfigError(ValueError):
    """A configuration file is missing or malformed."""


def packaged_config_dir() -> Path:
    return Path(str(importlib_resources.files("atkit") / "config"))


def config_dir() -> Path:
    env = os.environ.get("AT_CONFIG_DIR")
    if env:
        return Path(env)
    local = Path("config")
    if local.is_dir():
        return local
    return packaged_config_dir()


def config_path(name: str, explicit: str | os.PathLike | None = None) -> Path:
    """Resolve a configuration file, trying the resolution order above."""
    if explicit is not None:
        path = Path(explicit)
        if not path.exists():
            raise ConfigError(f"configuration file not found: {path}")
        return path
    path = config_dir() / name
    if path.exists():
        return path
    fallback = packaged_config_dir() / name
    if fallback.exists():
        return fallback
    raise ConfigError(f"configuration file not found: {name}")


def read_records(path: Path) -> list[tuple[int, list[str]]]:
    """Parse a pipe-separated config file into (lineno, fields) records."""
    records = []
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    for lineno, line in enumerate(text.split("\n"), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        fields = [field.strip() for field in stripped.split("|")]
        records.append((lineno, fields))
    return records
