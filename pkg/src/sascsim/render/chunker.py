"""Fixed-window training chunks with <sc> speaker-change tokens."""

import logging
import math
from dataclasses import dataclass

from sascsim.render.mixer import RenderedDialogue
from sascsim.render.wav_io import AudioBuffer

logger = logging.getLogger(__name__)

SC_TOKEN = "<sc>"


@dataclass(frozen=True)
class TrainingChunk:
    dialogue_id: str
    chunk_index: int
    audio: AudioBuffer
    text: str
    sc_count: int
    spans_boundary: bool = False  # an assigned utterance runs past the chunk end


def chunk_dialogue(rendered: RenderedDialogue, window: float = 30.0) -> list[TrainingChunk]:
    """Cut audio at k * window; each utterance goes to the chunk its start falls in."""
    sample_rate = rendered.audio.sample_rate
    window_samples = int(round(window * sample_rate))
    total = len(rendered.audio)
    n_chunks = math.ceil(total / window_samples)

    assigned: list[list] = [[] for _ in range(n_chunks)]
    for segment in rendered.annotation.segments:
        index = int(round(segment.start * sample_rate)) // window_samples
        assigned[min(index, n_chunks - 1)].append(segment)

    chunks = []
    for k, segments in enumerate(assigned):
        begin = k * window_samples
        end = min(begin + window_samples, total)
        parts = []
        sc_count = 0
        previous_speaker = None
        for segment in segments:
            if previous_speaker is not None and segment.speaker != previous_speaker:
                parts.append(SC_TOKEN)
                sc_count += 1
            if segment.text:
                parts.append(segment.text)
            previous_speaker = segment.speaker
        spans = any(round(s.end * sample_rate) > end for s in segments)
        if spans:
            logger.debug(
                "%s chunk %d: utterance crosses the chunk boundary", rendered.dialogue_id, k
            )
        chunks.append(
            TrainingChunk(
                rendered.dialogue_id,
                k,
                AudioBuffer(rendered.audio.samples[begin:end], sample_rate),
                " ".join(parts),
                sc_count,
                spans,
            )
        )
    return chunks
