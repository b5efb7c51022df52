import json
import os

import yaml

from fippbench import storage


def test_defaults_without_a_file(isolated_home):
    settings = storage.load_settings()
    assert settings["depth"] == 20
    assert settings.threads() == 1
    assert storage.settings_file() == os.path.join(str(isolated_home), "settings.yaml")


def test_file_overrides_defaults(isolated_home):
    isolated_home.mkdir()
    (isolated_home / "settings.yaml").write_text(
        yaml.safe_dump({"threads": 4, "budget": 3, "unrelated": True}), encoding="utf-8")
    settings = storage.load_settings()
    assert settings["budget"] == 3
    assert settings.threads() == 4
    assert "unrelated" not in settings.values


def test_thread_precedence(monkeypatch):
    settings = storage.Settings(dict(storage.DEFAULT_SETTINGS, threads=2))
    assert settings.threads() == 2
    monkeypatch.setenv("FIPP_THREADS", "5")
    assert settings.threads() == 5
    assert settings.threads(3) == 3
    assert settings.threads(0) == 1
    monkeypatch.setenv("FIPP_THREADS", "many")
    assert settings.threads() == 2


def test_broken_settings_fall_back(tmp_path, caplog):
    path = tmp_path / "settings.yaml"
    path.write_text("threads: [1,\n", encoding="utf-8")
    assert storage.load_settings(str(path))["threads"] == 1
    assert "Failed to read settings" in caplog.text
    path.write_text("- 1\n- 2\n", encoding="utf-8")
    assert storage.load_settings(str(path))["threads"] == 1


def test_dump_report_is_canonical():
    a = storage.dump_report({"b": 1, "a": [1, 2], "s": "⟨⟩"})
    b = storage.dump_report({"s": "⟨⟩", "a": [1, 2], "b": 1})
    assert a == b
    assert "⟨⟩" in a


def test_save_report_keeps_a_backup(tmp_path):
    path = tmp_path / "out" / "report.json"
    storage.save_report({"run": 1}, str(path))
    storage.save_report({"run": 2}, str(path))
    assert json.loads(path.read_text(encoding="utf-8")) == {"run": 2}
    assert json.loads((tmp_path / "out" / "report.json.bak").read_text(encoding="utf-8")) == {"run": 1}
