"""Room impulse responses: loading, per-dialogue assignment and convolution."""

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.signal import fftconvolve

from sascsim.errors import RenderError
from sascsim.render.gain import match_peak
from sascsim.render.wav_io import AudioBuffer, read_wav_file

logger = logging.getLogger(__name__)

# second stream of a dialogue's seed, independent of the planning stream
RIR_STREAM = 1


@dataclass(frozen=True)
class RoomImpulse:
    room_id: str
    position: str
    response: AudioBuffer


@dataclass(frozen=True)
class RoomSet:
    """Impulse responses per room, one per speaker position."""

    rooms: dict[str, tuple[RoomImpulse, ...]] = field(default_factory=dict)

    @property
    def room_ids(self) -> list[str]:
        return sorted(self.rooms)

    def is_empty(self) -> bool:
        return not self.rooms


@dataclass(frozen=True)
class RirAssignment:
    room_id: str
    by_speaker: dict[str, RoomImpulse]

    def get_response(self, speaker: str) -> AudioBuffer:
        return self.by_speaker[speaker].response


def load_roomset(directory: str | Path) -> RoomSet:
    """Read rirs/{room_id}/{position}.wav; any mono WAV encoding is accepted."""
    directory = Path(directory)
    if not directory.is_dir():
        raise RenderError(f"RIR directory {directory} does not exist")
    rooms = {}
    for room_dir in sorted(p for p in directory.iterdir() if p.is_dir()):
        impulses = tuple(
            RoomImpulse(room_dir.name, wav.stem, read_wav_file(wav, pcm16_only=False))
            for wav in sorted(room_dir.glob("*.wav"))
        )
        if impulses:
            rooms[room_dir.name] = impulses
    logger.info(
        "loaded %d rooms with %d impulse responses from %s",
        len(rooms),
        sum(len(v) for v in rooms.values()),
        directory,
    )
    return RoomSet(rooms)


def convolve(signal: AudioBuffer, rir: AudioBuffer, normalize: bool = True) -> AudioBuffer:
    """Full linear convolution; with normalize the output keeps the input's peak."""
    if signal.sample_rate != rir.sample_rate:
        raise RenderError(
            f"sample rates differ: signal {signal.sample_rate} Hz, RIR {rir.sample_rate} Hz"
        )
    if len(signal) == 0 or len(rir) == 0:
        raise RenderError("cannot convolve an empty buffer")
    wet = fftconvolve(signal.samples, rir.samples, mode="full")
    if normalize:
        wet = match_peak(wet, signal.peak())
    return AudioBuffer(wet, signal.sample_rate)


def rir_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng([seed, RIR_STREAM])


def assign_rirs(
    plan, roomset: RoomSet, rng: np.random.Generator, rir_fraction: float = 0.4
) -> RirAssignment | None:
    """With probability rir_fraction pick one room and two distinct positions for the pair."""
    if roomset.is_empty() or rir_fraction <= 0:
        return None
    if rng.random() >= rir_fraction:
        return None
    room_ids = roomset.room_ids
    room_id = room_ids[int(rng.integers(len(room_ids)))]
    impulses = roomset.rooms[room_id]
    if len(impulses) < 2:
        raise RenderError(
            f"room {room_id!r} has {len(impulses)} impulse response(s), need 2"
        )
    first, second = rng.choice(len(impulses), size=2, replace=False)
    speaker_a, speaker_b = plan.pair
    return RirAssignment(
        room_id, {speaker_a: impulses[int(first)], speaker_b: impulses[int(second)]}
    )
