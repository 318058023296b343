import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import soundfile as sf

from sascsim.errors import UnsupportedFormatError, ValidationError

PCM16_SCALE = 32768.0


@dataclass(frozen=True, eq=False)
class AudioBuffer:
    """Mono samples (nominally in [-1, 1]) at a fixed sample rate."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.array(self.samples, dtype=float)
        if samples.ndim != 1:
            raise ValidationError(f"expected mono samples, got shape {samples.shape}")
        if self.sample_rate <= 0:
            raise ValidationError(f"sample_rate must be positive, got {self.sample_rate}")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", int(self.sample_rate))

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate

    def peak(self) -> float:
        return float(np.max(np.abs(self.samples))) if self.samples.size else 0.0

    def __len__(self) -> int:
        return self.samples.size


def read_wav(data: bytes, pcm16_only: bool = True) -> AudioBuffer:
    """Decode a mono RIFF/WAVE file; PCM 16-bit unless pcm16_only is False."""
    try:
        with sf.SoundFile(io.BytesIO(data)) as sound_file:
            if sound_file.format != "WAV":
                raise UnsupportedFormatError(sound_file.format, "container")
            if sound_file.channels != 1:
                raise UnsupportedFormatError(f"{sound_file.channels} channels", "channels")
            if pcm16_only and sound_file.subtype != "PCM_16":
                raise UnsupportedFormatError(sound_file.subtype, "encoding")
            samples = sound_file.read(dtype="float64")
            sample_rate = sound_file.samplerate
    except (RuntimeError, sf.SoundFileError) as exc:
        raise UnsupportedFormatError(str(exc), "container") from exc
    return AudioBuffer(samples, sample_rate)


def to_pcm16(samples) -> np.ndarray:
    """Saturating conversion to int16."""
    scaled = np.round(np.asarray(samples, dtype=float) * PCM16_SCALE)
    return np.clip(scaled, -PCM16_SCALE, PCM16_SCALE - 1).astype(np.int16)


def write_wav(buffer: AudioBuffer) -> bytes:
    out = io.BytesIO()
    sf.write(out, to_pcm16(buffer.samples), buffer.sample_rate, format="WAV", subtype="PCM_16")
    return out.getvalue()


def read_wav_file(path: str | Path, pcm16_only: bool = True) -> AudioBuffer:
    return read_wav(Path(path).read_bytes(), pcm16_only)


def write_wav_file(buffer: AudioBuffer, path: str | Path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(write_wav(buffer))
