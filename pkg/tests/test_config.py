from pathlib import Path

import pytest

from zmine.config import (
    AppConfig,
    ConfigError,
    DATA_ROOT_ENV,
    DEFAULT_KEYWORDS,
    load_config,
    resolve_data_root,
)


def test_missing_path_gives_defaults():
    config = load_config(None)
    assert config.model.kind == "gbm"
    assert config.smote.k == 4
    assert config.threshold == 0.98
    assert config.mapping.keywords == DEFAULT_KEYWORDS
    assert config.model.class_weights == {2013: 9.78, 2014: 9.78,
                                          2015: 20.0, 2016: 14.0}


def test_empty_file_gives_defaults(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("")
    assert load_config(path) == AppConfig()


def test_full_document(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("""
data_root: /srv/risk
lexicon: /srv/lexicon.csv
fetcher:
  kind: http
  url_template: "http://news.test/{sector}/{year}"
  delay_seconds: 0.5
  max_retries: 5
mapping:
  keywords: [A, B, C, D]
model:
  kind: mlp
  learning_rate: 0.02
  epochs: 250
  sentiment_variables: none
  class_weights:
    2013: 5
    2014: 5
    2015: 10
    2016: 7
smote:
  k: 3
  target_fraction: 0.4
  scale: true
split:
  train_fraction: 0.8
threshold: 0.95
server:
  host: 0.0.0.0
  port: 9100
""")
    config = load_config(path)
    assert config.data_root == "/srv/risk"
    assert config.lexicon_path == "/srv/lexicon.csv"
    assert config.fetcher.kind == "http"
    assert config.fetcher.delay_seconds == 0.5
    assert config.fetcher.max_retries == 5
    assert config.mapping.keywords == ["A", "B", "C", "D"]
    assert config.model.kind == "mlp"
    assert config.model.learning_rate == 0.02
    assert config.model.epochs == 250
    assert config.model.sentiment_variables == "none"
    assert config.model.class_weights == {2013: 5.0, 2014: 5.0,
                                          2015: 10.0, 2016: 7.0}
    assert config.smote.k == 3
    assert config.smote.scale is True
    assert config.split.train_fraction == 0.8
    assert config.threshold == 0.95
    assert config.server.port == 9100


def test_lexicon_section_as_mapping(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("lexicon:\n  path: /data/lm.csv\n")
    assert load_config(path).lexicon_path == "/data/lm.csv"


def test_invalid_yaml(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("model: [unclosed")
    with pytest.raises(ConfigError):
        load_config(path)


def test_non_mapping_document(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("- a\n- b\n")
    with pytest.raises(ConfigError):
        load_config(path)


def test_non_mapping_section(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("model: gbm\n")
    with pytest.raises(ConfigError):
        load_config(path)


def test_unreadable_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.yaml")


def test_data_root_precedence(monkeypatch, tmp_path):
    config = load_config(None)
    monkeypatch.delenv(DATA_ROOT_ENV, raising=False)
    assert resolve_data_root(None, config) == Path("data")

    with_config = AppConfig(data_root="/from/config")
    assert resolve_data_root(None, with_config) == Path("/from/config")

    monkeypatch.setenv(DATA_ROOT_ENV, "/from/env")
    assert resolve_data_root(None, with_config) == Path("/from/env")

    assert resolve_data_root("/from/cli", with_config) == Path("/from/cli")
