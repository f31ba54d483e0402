import json

from kisinlab.config_manager import ConfigManager, Settings, get_settings, use_settings
from kisinlab.matrix import DEFAULT_PRECISION, working_precision


class TestConfigManager:
    def test_defaults_when_missing(self, tmp_path):
        manager = ConfigManager(silent=True, project_root=tmp_path)
        assert manager.load_settings() == Settings()
        assert not manager.has_errors()

    def test_load_file(self, tmp_path):
        (tmp_path / "kisinlab_config.json").write_text(
            json.dumps({"census_guard_bits": 12, "working_precision": 40}), encoding="utf-8")
        settings = ConfigManager(silent=True, project_root=tmp_path).load_settings()
        assert settings.census_guard_bits == 12
        assert settings.working_precision == 40
        assert settings.max_workers == Settings().max_workers

    def test_invalid_values_are_repaired(self, tmp_path):
        (tmp_path / "kisinlab_config.json").write_text(
            json.dumps({"census_guard_bits": 99, "max_workers": 2, "unknown": 1}), encoding="utf-8")
        manager = ConfigManager(silent=True, project_root=tmp_path)
        settings = manager.load_settings()
        assert settings.census_guard_bits == Settings().census_guard_bits
        assert settings.max_workers == 2
        assert all(e.code == "config_invalid_field" for e in manager.get_errors())
        assert len(manager.get_errors()) == 2

    def test_malformed_file(self, tmp_path):
        (tmp_path / "kisinlab_config.json").write_text("{", encoding="utf-8")
        manager = ConfigManager(silent=True, project_root=tmp_path)
        assert manager.load_settings() == Settings()
        assert manager.get_errors()[0].code == "config_parse_error"

    def test_save(self, tmp_path):
        manager = ConfigManager(silent=True, project_root=tmp_path)
        config = dict(manager.create_default_config(), random_seed=7)
        assert manager.save_config(config)
        assert ConfigManager(silent=True, project_root=tmp_path).load_settings().random_seed == 7

    def test_save_rejects_invalid(self, tmp_path):
        manager = ConfigManager(silent=True, project_root=tmp_path)
        assert not manager.save_config({"log_level": "LOUD"})
        assert not (tmp_path / "kisinlab_config.json").exists()

    def test_custom_path(self, tmp_path):
        (tmp_path / "alt.json").write_text(json.dumps({"hom_exhaust_limit": 3}), encoding="utf-8")
        settings = ConfigManager(silent=True, project_root=tmp_path).load_settings("alt.json")
        assert settings.hom_exhaust_limit == 3


class TestActiveSettings:
    def test_use_settings_restores(self):
        before = get_settings()
        with use_settings(working_precision=17) as inside:
            assert get_settings() is inside
            assert working_precision(50) == 17
        assert get_settings() == before
        assert working_precision(50) == 50
        assert working_precision() == DEFAULT_PRECISION

    def test_fixture_disables_progress(self):
        assert get_settings().show_progress is False
