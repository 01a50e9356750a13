"""Load run configurations from flat ``key=value`` files.

Keys are the leaf field names of :class:`~wprelay.schema.run.RunConfig`
sections; missing keys keep their defaults::

    ps_dbm=30
    eta=1.0
    beta_rr=-inf
"""

from __future__ import annotations

import io
import logging

from pathlib import Path
from typing import Any, Optional, Union

from dotenv import dotenv_values
from dotenv.parser import parse_stream
from pydantic import BaseModel, ValidationError

from wprelay.schema.run import (
    RunConfig,
    SamplingSettings,
    SweepSettings,
    SystemSettings,
    ToleranceSettings,
)
from wprelay.schema.system import GeometryConfig

logger = logging.getLogger(__name__)

SECTIONS: dict[str, type[BaseModel]] = {
    'geometry': GeometryConfig,
    'system': SystemSettings,
    'sweep': SweepSettings,
    'tolerances': ToleranceSettings,
    'sampling': SamplingSettings,
}
TOP_LEVEL_KEYS = ('output_path',)


class ConfigError(Exception):
    """Base class for configuration errors."""

    ...


class ConfigParseError(ConfigError):
    """A configuration file is unreadable, malformed or has unknown keys."""

    ...


class ConfigValidationError(ConfigError):
    """Configuration values violate field constraints."""

    def __init__(self, errors: list[str]) -> None:
        self.errors = errors
        super().__init__('invalid configuration: ' + '; '.join(errors))


def _key_sections() -> dict[str, str]:
    index = {}
    for section, model in SECTIONS.items():
        for name in model.model_fields:
            index[name] = section
    return index


def _check_syntax(text: str, source: str) -> None:
    for binding in parse_stream(io.StringIO(text)):
        if binding.error:
            raise ConfigParseError(
                f'{source}:{binding.original.line}: malformed line '
                f'{binding.original.string.rstrip()!r}'
            )


def _describe(exc: ValidationError) -> list[str]:
    messages = []
    for error in exc.errors():
        loc = error['loc']
        field = loc[-1] if len(loc) > 1 else loc[0] if loc else 'config'
        messages.append(f'{field}: {error["msg"]}')
    return messages


def _group(values: dict[str, Optional[str]], source: str) -> dict[str, Any]:
    sections = _key_sections()
    data: dict[str, Any] = {name: {} for name in SECTIONS}
    for key, value in values.items():
        if value is None:
            raise ConfigParseError(f'{source}: key {key!r} has no value')
        if key in TOP_LEVEL_KEYS:
            data[key] = value or None
        elif key in sections:
            data[sections[key]][key] = value
        else:
            raise ConfigParseError(f'{source}: unknown key {key!r}')
    return data


def load_config(path: Union[str, Path, None] = None) -> RunConfig:
    """Read, validate and log the effective run configuration.

    Parameters
    ----------
    path : str, Path or None
        Configuration file; ``None`` yields the defaults.

    Raises
    ------
    ConfigParseError
        If the file cannot be read, a line is malformed or a key is
        unknown.
    ConfigValidationError
        If a value violates its field constraints.
    """
    if path is None:
        config = RunConfig()
    else:
        source = str(path)
        try:
            text = Path(path).read_text(encoding='utf-8')
        except OSError as exc:
            raise ConfigParseError(f'cannot read {source}: {exc}') from exc
        _check_syntax(text, source)
        values = dotenv_values(stream=io.StringIO(text), interpolate=False)
        data = _group(dict(values), source)
        try:
            config = RunConfig.model_validate(data)
        except ValidationError as exc:
            raise ConfigValidationError(_describe(exc)) from exc
    logger.info('effective configuration:\n%s', render_config(config))
    return config


def _render_value(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_config(config: RunConfig) -> str:
    """Render ``config`` as flat ``key=value`` lines that load back."""
    lines = []
    for section in SECTIONS:
        for key, value in getattr(config, section).model_dump().items():
            lines.append(f'{key}={_render_value(value)}')
    if config.output_path is not None:
        lines.append(f'output_path={config.output_path}')
    return '\n'.join(lines)
