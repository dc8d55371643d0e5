import pytest

from eblparse.config import Config, ConfigError, load_config
from eblparse.resources import fixture_path


def test_defaults():
    cfg = Config()
    assert cfg.runtime_max_deletions == 2
    assert cfg.runtime_time_budget_ms == 50
    assert (cfg.train_cap_base, cfg.train_cap_per_generalizable) == (2, 2)
    assert cfg.tagger_default_tag == "noun"


def test_shipped_file_matches_defaults():
    assert load_config(fixture_path("config.txt").read_text()) == Config()


def test_parse_values():
    cfg = load_config("runtime.max_deletions = 1\nsegmenter.markers = oh well\n# c\n\ntrain.top=5\n")
    assert cfg.runtime_max_deletions == 1
    assert cfg.segmenter_markers == ("OH", "WELL")
    assert cfg.train_top == 5


@pytest.mark.parametrize("text", ["runtime.nope = 1", "runtime.max_deletions = two", "just words"])
def test_errors(text):
    with pytest.raises(ConfigError, match="line 1"):
        load_config(text)


def test_overrides_skip_none():
    cfg = Config().with_overrides(train_top=3, runtime_max_deletions=None)
    assert cfg.train_top == 3 and cfg.runtime_max_deletions == 2
