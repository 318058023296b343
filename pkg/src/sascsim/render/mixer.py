"""Sample-exact placement of utterances on the dialogue timeline."""

import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from sascsim.annotations.manifest import UtterancePool
from sascsim.annotations.segment import ConversationAnnotation
from sascsim.errors import RenderError, UnsupportedFormatError
from sascsim.render.gain import rescale_on_overflow
from sascsim.render.rir import RirAssignment, convolve
from sascsim.render.wav_io import AudioBuffer, read_wav_file
from sascsim.simulate.plan import DialoguePlan

logger = logging.getLogger(__name__)

# manifest durations are rounded; anything beyond one sample is a wrong entry
DURATION_TOLERANCE_SAMPLES = 1


def place(clip: np.ndarray, target: np.ndarray, offset: int):
    """Add clip into target starting at offset; parts outside target are dropped."""
    begin = max(offset, 0)
    end = min(offset + clip.size, target.size)
    # completely outside: nothing to add
    if begin >= end:
        return
    target[begin:end] += clip[begin - offset : end - offset]


@dataclass
class PlacedClip:
    offset: int
    samples: np.ndarray


class DialogueMixer:
    """Collects placed clips and sums them into one mono track."""

    def __init__(self, sample_rate: int, length: int):
        self.sample_rate = sample_rate
        self.length = length
        self.clips: list[PlacedClip] = []

    def add_clip(self, clip: AudioBuffer, start: float):
        """Queue a clip at round(start * sample_rate)."""
        if clip.sample_rate != self.sample_rate:
            raise RenderError(
                f"clip at {start:.3f} s has {clip.sample_rate} Hz, mix is {self.sample_rate} Hz"
            )
        offset = int(round(start * self.sample_rate))
        self.clips.append(PlacedClip(offset, clip.samples))

    def mix_down(self) -> np.ndarray:
        """Sum of all queued clips before any rescaling."""
        mix = np.zeros(self.length)
        for placed in self.clips:
            place(placed.samples, mix, placed.offset)
        return mix


class InMemoryAudioSource:
    """Utterance audio and text held in dictionaries."""

    def __init__(self, buffers: dict[str, AudioBuffer], texts: dict[str, str] | None = None):
        self.buffers = buffers
        self.texts = texts or {}

    def get_audio(self, utterance_id: str) -> AudioBuffer:
        if utterance_id not in self.buffers:
            raise RenderError(f"no audio for utterance {utterance_id!r}")
        return self.buffers[utterance_id]

    def get_text(self, utterance_id: str) -> str | None:
        return self.texts.get(utterance_id)


class UtteranceAudioSource:
    """Reads utterance WAVs referenced by a manifest, relative to base_dir."""

    def __init__(self, pool: UtterancePool, base_dir: str | Path = "."):
        self.base_dir = Path(base_dir)
        self.entries = {entry.utterance_id: entry for entry in pool.entries()}

    def get_audio(self, utterance_id: str) -> AudioBuffer:
        entry = self.entries.get(utterance_id)
        if entry is None:
            raise RenderError(f"utterance {utterance_id!r} is not in the manifest")
        path = self.base_dir / entry.audio_path
        if not path.is_file():
            raise RenderError(f"audio file {path} of utterance {utterance_id!r} is missing")
        try:
            return read_wav_file(path)
        except UnsupportedFormatError as exc:
            raise RenderError(f"utterance {utterance_id!r}: {exc}") from exc

    def get_text(self, utterance_id: str) -> str | None:
        entry = self.entries.get(utterance_id)
        return entry.text if entry is not None else None


@dataclass(frozen=True)
class RenderedDialogue:
    """Mixed audio of one plan together with its realised annotation."""

    dialogue_id: str
    audio: AudioBuffer
    annotation: ConversationAnnotation
    transcript_events: tuple[tuple[str, str], ...]
    rir_applied: bool
    room_id: str | None = None
    scale_factor: float = 1.0


def mix_events(
    plan: DialoguePlan,
    audio_source,
    sample_rate: int,
    rir_assignment: RirAssignment | None = None,
) -> np.ndarray:
    """Pre-rescale mix of all plan events.

    Without room responses the mix spans ceil(plan.end * sample_rate) samples; reverberation
    tails extend it. Each clip must match its planned duration to within one sample.
    """
    clips = []
    for event in plan.events:
        clip = audio_source.get_audio(event.utterance_id)
        if clip.sample_rate != sample_rate:
            raise RenderError(
                f"utterance {event.utterance_id!r} has {clip.sample_rate} Hz, "
                f"expected {sample_rate} Hz"
            )
        expected = round(event.duration * sample_rate)
        if abs(len(clip) - expected) > DURATION_TOLERANCE_SAMPLES:
            raise RenderError(
                f"utterance {event.utterance_id!r} has {len(clip)} samples, the plan "
                f"expects {expected} ({event.duration:.3f} s)"
            )
        if rir_assignment is not None:
            clip = convolve(clip, rir_assignment.get_response(event.speaker))
        clips.append((clip, event.start))

    length = math.ceil(plan.end * sample_rate)
    if rir_assignment is not None:
        length = max([length] + [round(start * sample_rate) + len(clip) for clip, start in clips])
    mixer = DialogueMixer(sample_rate, length)
    for clip, start in clips:
        mixer.add_clip(clip, start)
    return mixer.mix_down()


def render_plan(
    plan: DialoguePlan,
    audio_source,
    rir_assignment: RirAssignment | None = None,
    sample_rate: int = 16000,
    peak_target: float = 0.99,
) -> RenderedDialogue:
    """Mix the plan's utterances; rescale globally to peak_target if the mix overflows."""
    mix = mix_events(plan, audio_source, sample_rate, rir_assignment)
    mix, scale = rescale_on_overflow(mix, peak_target)
    if scale != 1.0:
        logger.warning("%s: mix overflowed, rescaled by %.4f", plan.dialogue_id, scale)

    texts = {event.utterance_id: audio_source.get_text(event.utterance_id) for event in plan.events}
    return RenderedDialogue(
        dialogue_id=plan.dialogue_id,
        audio=AudioBuffer(mix, sample_rate),
        annotation=plan.to_annotation(texts),
        transcript_events=tuple(
            (event.speaker, texts[event.utterance_id] or "") for event in plan.events
        ),
        rir_applied=rir_assignment is not None,
        room_id=rir_assignment.room_id if rir_assignment is not None else None,
        scale_factor=scale,
    )
