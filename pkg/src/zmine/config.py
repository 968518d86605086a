"""YAML configuration and data-root resolution.

One document configures the whole pipeline, with a section per concern.
Every CLI command resolves its data root in the same order: explicit
flag, then the ZMINE_DATA_ROOT environment variable, then the config
file, then ./data.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

DATA_ROOT_ENV = "ZMINE_DATA_ROOT"
DEFAULT_DATA_ROOT = "data"
DEFAULT_KEYWORDS = ["iGaming", "Pharmaceuticals", "Aviation", "Tourism"]


class ConfigError(ValueError):
    """The config file is unreadable or malformed."""


@dataclass(frozen=True)
class FetcherConfig:
    kind: str = "directory"
    root: str | None = None
    url_template: str | None = None
    delay_seconds: float = 1.0
    max_retries: int = 3


@dataclass(frozen=True)
class MappingConfig:
    keywords: list[str] = field(default_factory=lambda: list(DEFAULT_KEYWORDS))
    explicit: dict[str, str] | None = None


@dataclass(frozen=True)
class ModelConfig:
    kind: str = "gbm"
    learning_rate: float | None = None
    epochs: int | None = None
    standardize: bool = True
    sentiment_variables: str = "all"
    class_weights: dict[int, float] = field(
        default_factory=lambda: {2013: 9.78, 2014: 9.78, 2015: 20.0, 2016: 14.0}
    )


@dataclass(frozen=True)
class SmoteSettings:
    k: int = 4
    target_fraction: float = 0.5
    scale: bool = False


@dataclass(frozen=True)
class SplitConfig:
    train_fraction: float = 0.7


@dataclass(frozen=True)
class ServerConfig:
    host: str = "127.0.0.1"
    port: int = 8000


@dataclass(frozen=True)
class AppConfig:
    data_root: str | None = None
    fetcher: FetcherConfig = field(default_factory=FetcherConfig)
    lexicon_path: str | None = None
    mapping: MappingConfig = field(default_factory=MappingConfig)
    model: ModelConfig = field(default_factory=ModelConfig)
    smote: SmoteSettings = field(default_factory=SmoteSettings)
    split: SplitConfig = field(default_factory=SplitConfig)
    threshold: float = 0.98
    server: ServerConfig = field(default_factory=ServerConfig)


def _section(document: dict, name: str) -> dict:
    value = document.get(name, {})
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ConfigError(f"config section {name!r} must be a mapping")
    return value


def load_config(path: str | Path | None) -> AppConfig:
    """Parse the YAML config; a missing path gives pure defaults."""
    if path is None:
        return AppConfig()
    path = Path(path)
    try:
        document = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from exc
    if document is None:
        return AppConfig()
    if not isinstance(document, dict):
        raise ConfigError(f"{path}: config must be a mapping at the top level")

    fetcher = _section(document, "fetcher")
    mapping = _section(document, "mapping")
    model = _section(document, "model")
    smote = _section(document, "smote")
    split = _section(document, "split")
    server = _section(document, "server")
    lexicon = _section(document, "lexicon") if isinstance(
        document.get("lexicon"), dict
    ) else {"path": document.get("lexicon")}

    raw_weights = model.get("class_weights")
    class_weights = (
        {int(y): float(w) for y, w in raw_weights.items()}
        if isinstance(raw_weights, dict)
        else ModelConfig().class_weights
    )
    return AppConfig(
        data_root=document.get("data_root"),
        fetcher=FetcherConfig(
            kind=fetcher.get("kind", "directory"),
            root=fetcher.get("root"),
            url_template=fetcher.get("url_template"),
            delay_seconds=float(fetcher.get("delay_seconds", 1.0)),
            max_retries=int(fetcher.get("max_retries", 3)),
        ),
        lexicon_path=lexicon.get("path"),
        mapping=MappingConfig(
            keywords=list(mapping.get("keywords", DEFAULT_KEYWORDS)),
            explicit=mapping.get("explicit"),
        ),
        model=ModelConfig(
            kind=model.get("kind", "gbm"),
            learning_rate=model.get("learning_rate"),
            epochs=model.get("epochs"),
            standardize=bool(model.get("standardize", True)),
            sentiment_variables=model.get("sentiment_variables", "all"),
            class_weights=class_weights,
        ),
        smote=SmoteSettings(
            k=int(smote.get("k", 4)),
            target_fraction=float(smote.get("target_fraction", 0.5)),
            scale=bool(smote.get("scale", False)),
        ),
        split=SplitConfig(train_fraction=float(split.get("train_fraction", 0.7))),
        threshold=float(document.get("threshold", 0.98)),
        server=ServerConfig(
            host=server.get("host", "127.0.0.1"),
            port=int(server.get("port", 8000)),
        ),
    )


def resolve_data_root(cli_value: str | None, config: AppConfig) -> Path:
    if cli_value:
        return Path(cli_value)
    env_value = os.environ.get(DATA_ROOT_ENV)
    if env_value:
        return Path(env_value)
    if config.data_root:
        return Path(config.data_root)
    return Path(DEFAULT_DATA_ROOT)
