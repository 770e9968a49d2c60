"""Tests for configuration loading and validation."""
from pathlib import Path

import pytest

from src.utils.validators import default_config, load_config, substitute_env_vars

REPO_CONFIG = Path(__file__).resolve().parent.parent / "config" / "config.yaml"


def _write(tmp_path, text):
    path = tmp_path / "config.yaml"
    path.write_text(text)
    return str(path)


class TestLoadConfig:

    def test_defaults_fill_missing_sections(self, tmp_path):
        config = load_config(_write(tmp_path, "experiments:\n  trials: 5\n"))
        assert config['experiments']['trials'] == 5
        assert config['experiments']['seed'] == 7
        assert config['output']['format'] == "csv"
        assert config['guards']['max_ray_columns'] == 12

    def test_repository_config(self, monkeypatch):
        monkeypatch.delenv("LPDECODE_SEED", raising=False)
        config = load_config(str(REPO_CONFIG))
        assert config['experiments']['seed'] == 7

    def test_environment_substitution(self, tmp_path, monkeypatch):
        monkeypatch.setenv("TEST_TRIALS", "12")
        config = load_config(_write(tmp_path, "experiments:\n  trials: ${TEST_TRIALS}\n"))
        assert config['experiments']['trials'] == 12

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_config(str(tmp_path / "nope.yaml"))

    @pytest.mark.parametrize("text", [
        "guards:\n  max_magic: 3\n",
        "guards:\n  max_ray_columns: 0\n",
        "experiments:\n  workers: two\n",
        "output:\n  format: xml\n",
        "logging:\n  level: LOUD\n",
        "- just\n- a list\n",
    ])
    def test_invalid(self, tmp_path, text):
        with pytest.raises(ValueError):
            load_config(_write(tmp_path, text))

    def test_default_config(self):
        assert default_config()['logging']['file'] is None


class TestSubstituteEnvVars:

    def test_default_value(self, monkeypatch):
        monkeypatch.delenv("UNSET_FOR_TEST", raising=False)
        assert substitute_env_vars("a: ${UNSET_FOR_TEST:-3}") == "a: 3"

    def test_unset_without_default(self, monkeypatch):
        monkeypatch.delenv("UNSET_FOR_TEST", raising=False)
        with pytest.raises(ValueError):
            substitute_env_vars("a: ${UNSET_FOR_TEST}")
