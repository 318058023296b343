"""Command options, shared by argparse and JSON config files."""

from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

from sascsim.errors import ConfigurationError


def _float_list(value) -> list[float]:
    if isinstance(value, str):
        value = [part for part in value.split(",") if part.strip()]
    return [float(v) for v in value]


@dataclass(frozen=True)
class Option:
    name: str
    type: Callable[[Any], Any] = str
    default: Any = None
    help: str = ""
    choices: tuple | None = None
    multiple: bool = False  # one or more values on the command line
    flag: bool = False
    required: bool = False

    @property
    def flag_name(self) -> str:
        return "--" + self.name.replace("_", "-")

    def coerce(self, value):
        if value is None:
            return None
        try:
            if self.flag:
                return bool(value)
            if self.multiple:
                values = value if isinstance(value, (list, tuple)) else [value]
                return [self.type(v) for v in values]
            coerced = self.type(value)
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(f"{self.flag_name}: invalid value {value!r}") from exc
        if self.choices is not None and coerced not in self.choices:
            raise ConfigurationError(
                f"{self.flag_name}: {coerced!r} is not one of {self.choices}"
            )
        return coerced


COMMAND_OPTIONS: dict[str, tuple[Option, ...]] = {
    "extract-stats": (
        Option("annotations", multiple=True, required=True, help="RTTM or conversation JSON files"),
        Option("format", default="auto", choices=("auto", "rttm", "json")),
        Option("mode", default="sasc", choices=("sasc", "csasc")),
        Option("output", required=True, help="statistics model JSON to write"),
        Option("alpha", float, 0.1, "residual KDE bandwidth of SASC models [s]"),
        Option("eps_mu", float, 0.01, "floor of the mean-gap bandwidth [s]"),
        Option("eps_r", float, 0.01, "floor of the residual bandwidth [s]"),
        Option("eps_d", float, 0.05, "floor of the duration bandwidth [s]"),
        Option("min_obs", int, 3, "gaps needed per speaker and transition type"),
        Option("speaker_scope", default="global", choices=("global", "conversation")),
        Option("transitions_from", help="reuse the turn matrix of this model file"),
        Option("source", default="", help="label stored in the model metadata"),
    ),
    "simulate": (
        Option("manifest", required=True),
        Option("stats", help="statistics model (required for sasc/csasc)"),
        Option("mode", default="sasc", choices=("sasc", "csasc", "naive", "nosim")),
        Option("pairs", int, 1, "max. number of pairs per speaker (K)"),
        Option("seed", int, 0),
        Option("out", required=True, help="output directory"),
        Option("d_min", float, 2.0),
        Option("d_max", float, 10.0),
        Option("fixed_gap", float, 0.25, "pause of the naive baseline [s]"),
        Option("clamp_min_start_delta", float, 0.01),
        Option("max_pair_retries", int, 100),
        Option("workers", int, 1),
        Option("real_hours", float, None, "hours of real training data, for the ratio"),
    ),
    "render": (
        Option("plans", required=True, help="plan directory (or a simulate output dir)"),
        Option("manifest", required=True),
        Option("audio_root", help="base directory of manifest audio paths"),
        Option("rir_dir"),
        Option("rir_fraction", float, 0.4),
        Option("sample_rate", int, 16000),
        Option("window", float, 30.0, "chunk length [s]"),
        Option("peak_target", float, 0.99),
        Option("workers", int, 1),
        Option("out", required=True),
    ),
    "chunk": (
        Option("rendered", required=True, help="directory of rendered dialogues"),
        Option("window", float, 30.0),
        Option("out", help="output directory (default: in place)"),
    ),
    "evaluate": (
        Option("ref", help="reference transcripts (TSV or JSON)"),
        Option("hyp", multiple=True, help="one or two hypothesis files"),
        Option("pairs_file", help="JSON array of {id, reference, hypothesis}"),
        Option("metrics", multiple=True, default=["wer", "cer", "cpwer", "cpcer", "sc_acc"]),
        Option("bootstrap", int, 0, "bootstrap resamples (0: no significance test)"),
        Option("alpha", float, 0.05),
        Option("seed", int, 0),
        Option("out", help="report JSON to write"),
        Option("per_pair_csv", help="per-pair breakdown CSV"),
    ),
    "inspect-stats": (
        Option("stats", required=True),
        Option("out", required=True),
        Option("grid", help="low:high[:points], default derived per component"),
        Option("d_star", _float_list, [2.0, 5.0, 8.0], "conditioning durations (C-SASC)"),
        Option("manifest", help="add an utterance-duration histogram"),
        Option("bin_width", float, 0.5),
        Option("posterior", int, 0, "number of posterior gap draws (0: none)"),
        Option("seed", int, 0),
        Option("plot", flag=True, default=False, help="also write PNG figures"),
    ),
}


def get_options(command: str) -> tuple[Option, ...]:
    if command not in COMMAND_OPTIONS:
        raise ConfigurationError(f"unknown command {command!r}")
    return COMMAND_OPTIONS[command]


def resolve_params(command: str, cli_values: dict, file_values: dict | None = None) -> dict:
    """Merge defaults < config file < command line and check required options."""
    params = {}
    file_values = {k.replace("-", "_"): v for k, v in (file_values or {}).items()}
    for option in get_options(command):
        value = option.default
        if file_values.get(option.name) is not None:
            value = file_values[option.name]
        if cli_values.get(option.name) is not None:
            value = cli_values[option.name]
        value = option.coerce(value)
        if option.required and value in (None, []):
            raise ConfigurationError(f"{command}: {option.flag_name} is required")
        params[option.name] = value
    return params
