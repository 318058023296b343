import json
import logging
from pathlib import Path

from sascsim import __version__
from sascsim.errors import ConfigurationError

logger = logging.getLogger(__name__)

RUN_FILE = "run.json"


def load_config_file(path: str | Path, command: str) -> dict:
    """Options from a JSON config file; a run.json contributes its params."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigurationError(f"config file {path} does not exist") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config file {path}: invalid JSON ({exc.msg})") from exc
    if not isinstance(data, dict):
        raise ConfigurationError(f"config file {path} must hold a JSON object")
    if "params" in data and "command" in data:
        if data["command"] != command:
            logger.warning(
                "config %s was written by %r, applying it to %r", path, data["command"], command
            )
        return dict(data["params"])
    return data


def run_record(command: str, params: dict) -> str:
    return json.dumps(
        {"command": command, "version": __version__, "params": params},
        indent=2,
        sort_keys=True,
    )


def write_run_record(directory: str | Path, command: str, params: dict) -> Path:
    path = Path(directory) / RUN_FILE
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(run_record(command, params) + "\n", encoding="utf-8")
    return path
