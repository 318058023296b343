"""Utterance manifests and the duration-filtered simulation pool."""

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from sascsim.errors import SchemaError, ValidationError

logger = logging.getLogger(__name__)

DEFAULT_D_MIN = 2.0
DEFAULT_D_MAX = 10.0


@dataclass(frozen=True)
class UtteranceEntry:
    """One single-speaker recording available to the simulator."""

    speaker: str
    utterance_id: str
    audio_path: str
    duration: float
    chrono_index: int
    text: str = ""

    def __post_init__(self):
        if not self.duration > 0:
            raise ValidationError(
                f"utterance {self.utterance_id!r} has non-positive duration "
                f"{self.duration}"
            )
        if self.chrono_index < 0:
            raise ValidationError(
                f"utterance {self.utterance_id!r} has negative chrono_index "
                f"{self.chrono_index}"
            )

    def to_dict(self) -> dict:
        return {
            "speaker": self.speaker,
            "utterance_id": self.utterance_id,
            "audio_path": self.audio_path,
            "duration": self.duration,
            "chrono_index": self.chrono_index,
            "text": self.text,
        }


@dataclass(frozen=True)
class UtterancePool:
    """Utterances grouped by speaker, each group in chronological order."""

    groups: dict[str, tuple[UtteranceEntry, ...]] = field(default_factory=dict)

    @classmethod
    def from_entries(cls, entries) -> "UtterancePool":
        grouped: dict[str, list[UtteranceEntry]] = {}
        for entry in entries:
            grouped.setdefault(entry.speaker, []).append(entry)

        groups = {}
        for speaker in sorted(grouped):
            ordered = sorted(grouped[speaker], key=lambda e: e.chrono_index)
            for previous, current in zip(ordered, ordered[1:]):
                if previous.chrono_index == current.chrono_index:
                    raise ValidationError(
                        f"speaker {speaker!r} has duplicate chrono_index "
                        f"{current.chrono_index} ({previous.utterance_id!r}, "
                        f"{current.utterance_id!r})"
                    )
            groups[speaker] = tuple(ordered)
        return cls(groups)

    @property
    def speakers(self) -> list[str]:
        return list(self.groups)

    def get_group(self, speaker: str) -> tuple[UtteranceEntry, ...]:
        return self.groups.get(speaker, ())

    def entries(self):
        for group in self.groups.values():
            yield from group

    def get_entry(self, utterance_id: str) -> UtteranceEntry | None:
        for entry in self.entries():
            if entry.utterance_id == utterance_id:
                return entry
        return None

    def durations(self) -> np.ndarray:
        return np.array([entry.duration for entry in self.entries()], dtype=float)

    def total_duration(self) -> float:
        return float(self.durations().sum())

    def __len__(self) -> int:
        return sum(len(group) for group in self.groups.values())


@dataclass(frozen=True)
class FilterSummary:
    """What filter_pool kept and dropped."""

    kept: int
    dropped: int
    emptied_speakers: tuple[str, ...]


_MANIFEST_FIELDS = {
    "speaker": str,
    "utterance_id": str,
    "audio_path": str,
    "duration": (int, float),
    "chrono_index": int,
    "text": str,
}


def _entry_from_json(raw, path: str) -> UtteranceEntry:
    if not isinstance(raw, dict):
        raise SchemaError("expected an object", path)
    values = {}
    for key, kinds in _MANIFEST_FIELDS.items():
        if key not in raw:
            if key == "text":
                values[key] = ""
                continue
            raise SchemaError("missing required field", f"{path}.{key}")
        value = raw[key]
        if isinstance(value, bool) or not isinstance(value, kinds):
            raise SchemaError(f"unexpected type {type(value).__name__}", f"{path}.{key}")
        values[key] = value
    values["duration"] = float(values["duration"])
    return UtteranceEntry(**values)


def load_manifest(text: str) -> UtterancePool:
    """Parse a JSON manifest into a pool grouped by speaker."""
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON ({exc.msg})", "$") from exc
    if not isinstance(document, list):
        raise SchemaError("expected an array of utterances", "$")

    entries = [_entry_from_json(raw, f"$[{i}]") for i, raw in enumerate(document)]
    pool = UtterancePool.from_entries(entries)
    logger.debug("loaded %d utterances of %d speakers", len(pool), len(pool.groups))
    return pool


def write_manifest(pool: UtterancePool) -> str:
    return json.dumps(
        [entry.to_dict() for entry in pool.entries()], indent=2, ensure_ascii=False
    )


def filter_pool_with_summary(
    pool: UtterancePool, d_min: float = DEFAULT_D_MIN, d_max: float = DEFAULT_D_MAX
) -> tuple[UtterancePool, FilterSummary]:
    if not 0 < d_min < d_max:
        raise ValidationError(f"need 0 < d_min < d_max, got [{d_min}, {d_max}]")

    groups = {}
    emptied = []
    kept = dropped = 0
    for speaker, group in pool.groups.items():
        retained = tuple(e for e in group if d_min <= e.duration <= d_max)
        kept += len(retained)
        dropped += len(group) - len(retained)
        if group and not retained:
            emptied.append(speaker)
        groups[speaker] = retained

    summary = FilterSummary(kept, dropped, tuple(emptied))
    if emptied:
        logger.warning(
            "duration filter [%.2f, %.2f] s emptied %d speakers: %s",
            d_min,
            d_max,
            len(emptied),
            ", ".join(emptied),
        )
    logger.info("duration filter kept %d, dropped %d utterances", kept, dropped)
    return UtterancePool(groups), summary


def filter_pool(
    pool: UtterancePool, d_min: float = DEFAULT_D_MIN, d_max: float = DEFAULT_D_MAX
) -> UtterancePool:
    """Keep utterances with d_min <= duration <= d_max (bounds inclusive)."""
    return filter_pool_with_summary(pool, d_min, d_max)[0]


def duration_histogram(
    durations, bin_width: float = 0.5
) -> tuple[np.ndarray, np.ndarray]:
    """Histogram of utterance durations with fixed-width bins starting at 0."""
    if bin_width <= 0:
        raise ValidationError(f"bin_width must be positive, got {bin_width}")
    values = np.asarray(durations, dtype=float)
    upper = bin_width if values.size == 0 else float(values.max())
    n_bins = max(int(np.ceil(upper / bin_width)), 1)
    edges = np.arange(n_bins + 1) * bin_width
    if values.size and edges[-1] < upper:
        edges = np.append(edges, edges[-1] + bin_width)
    counts, edges = np.histogram(values, bins=edges)
    return edges, counts
