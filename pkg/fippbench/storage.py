import json
import logging
import os
import shutil
import yaml
from dataclasses import dataclass
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)


def data_dir() -> str:
    return os.environ.get("FIPPBENCH_HOME") or os.path.expanduser("~/.fippbench")


def settings_file() -> str:
    return os.path.join(data_dir(), "settings.yaml")


DEFAULT_SETTINGS = {
    "threads": 1,
    "log_level": "WARNING",
    "depth": 20,  # probe depth
    "budget": 8,  # search budgets (stability point, cylinder refutation, eval)
    "max_witnesses": 64,  # witnesses kept in a JSON report
}


@dataclass
class Settings:
    values: Dict[str, Any]

    def __getitem__(self, key: str) -> Any:
        return self.values[key]

    def threads(self, flag: Optional[int] = None) -> int:
        """Flag, then FIPP_THREADS, then the settings file."""
        if flag is not None:
            return max(1, flag)
        env = os.environ.get("FIPP_THREADS")
        if env:
            try:
                return max(1, int(env))
            except ValueError:
                logger.warning("Ignoring FIPP_THREADS=%r: not an integer", env)
        return max(1, int(self.values["threads"]))


def load_settings(path: Optional[str] = None) -> Settings:
    path = path or settings_file()
    settings = {}
    if os.path.exists(path):
        try:
            with open(path, 'r', encoding='utf-8') as f:
                settings = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            logger.warning("Failed to read settings %s: %s", path, e)
            settings = {}
        if not isinstance(settings, dict):
            logger.warning("Settings %s is not a mapping, using defaults", path)
            settings = {}
    merged = DEFAULT_SETTINGS.copy()
    merged.update({k: v for k, v in settings.items() if k in DEFAULT_SETTINGS})
    return Settings(merged)


def dump_report(payload: Dict[str, Any]) -> str:
    # sorted keys: same input, same bytes
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)


def save_report(payload: Dict[str, Any], path: str) -> None:
    """Write a JSON report, keeping the previous file as PATH.bak."""
    if os.path.exists(path):
        try:
            shutil.copy2(path, path + ".bak")
        except OSError as e:
            logger.warning("Failed to back up %s: %s", path, e)
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(dump_report(payload))
        f.write("\n")
