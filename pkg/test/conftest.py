# pylint: disable=redefined-outer-name
import numpy as np
import pytest

from sascsim.annotations.manifest import UtteranceEntry, UtterancePool
from sascsim.annotations.segment import ConversationAnnotation, SegmentAnnotation
from sascsim.render.wav_io import AudioBuffer

CALLHOME_PROBS = np.array([[0.367, 0.633], [0.631, 0.369]])


def make_conversation(
    conversation_id: str,
    rng: np.random.Generator,
    n_segments: int = 30,
    speakers=("x", "y"),
    probs=CALLHOME_PROBS,
    mean_gap: float = 0.2,
    mean_spread: float = 0.05,
    residual_sd: float = 0.4,
) -> ConversationAnnotation:
    """Two-speaker conversation with per-speaker mean gaps and Gaussian residuals."""
    mus = {
        (speaker, kind): rng.normal(mean_gap, mean_spread)
        for speaker in speakers
        for kind in ("same", "diff")
    }
    role = int(rng.integers(2))
    start, end = 0.0, rng.uniform(2, 6)
    segments = [SegmentAnnotation(conversation_id, speakers[role], start, end)]
    for _ in range(n_segments - 1):
        previous_role = role
        role = int(rng.random() >= probs[role][0])
        kind = "same" if role == previous_role else "diff"
        gap = mus[(speakers[role], kind)] + rng.normal(0, residual_sd)
        new_start = max(end + gap, start + 0.01)
        start, end = new_start, new_start + rng.uniform(2, 6)
        segments.append(SegmentAnnotation(conversation_id, speakers[role], start, end))
    return ConversationAnnotation.from_segments(conversation_id, segments)


@pytest.fixture
def synthetic_corpus():
    """Factory for 'real' corpora; speaker ids are unique per conversation."""

    def build(n_conversations: int = 40, seed: int = 7, **kwargs):
        rng = np.random.default_rng(seed)
        return [
            make_conversation(
                f"conv{i:03d}", rng, speakers=(f"s{i}a", f"s{i}b"), **kwargs
            )
            for i in range(n_conversations)
        ]

    return build


@pytest.fixture
def make_pool():
    """Factory for pools: speakers -> list of durations, chrono order as given."""

    def build(durations_by_speaker: dict[str, list[float]]) -> UtterancePool:
        entries = [
            UtteranceEntry(
                speaker=speaker,
                utterance_id=f"{speaker}_{k}",
                audio_path=f"{speaker}/{speaker}_{k}.wav",
                duration=duration,
                chrono_index=k,
                text=f"{speaker} says {k}",
            )
            for speaker, durations in durations_by_speaker.items()
            for k, duration in enumerate(durations)
        ]
        return UtterancePool.from_entries(entries)

    return build


@pytest.fixture
def constant_buffer():
    def build(value: float, seconds: float, sample_rate: int = 16000) -> AudioBuffer:
        return AudioBuffer(np.full(int(round(seconds * sample_rate)), value), sample_rate)

    return build
