import json
from dataclasses import dataclass
from pathlib import Path

from sascsim.annotations.rttm import write_rttm
from sascsim.annotations.segment_json import parse_segment_json, write_segment_json
from sascsim.errors import RenderError
from sascsim.render.chunker import TrainingChunk
from sascsim.render.mixer import RenderedDialogue
from sascsim.render.wav_io import read_wav_file, write_wav_file


@dataclass(frozen=True)
class GroundTruth:
    rttm: str
    segments_json: str
    transcripts: str


def transcript_lines(chunks: list[TrainingChunk]) -> str:
    """One tab-separated line per chunk: dialogue_id, chunk_index, text."""
    return "".join(f"{c.dialogue_id}\t{c.chunk_index}\t{c.text}\n" for c in chunks)


def emit_ground_truth(rendered: RenderedDialogue, chunks: list[TrainingChunk]) -> GroundTruth:
    return GroundTruth(
        rttm=write_rttm(rendered.annotation),
        segments_json=write_segment_json([rendered.annotation]),
        transcripts=transcript_lines(chunks),
    )


def write_chunks(dialogue_dir: Path, chunks: list[TrainingChunk]) -> list[Path]:
    paths = []
    for chunk in chunks:
        path = dialogue_dir / "chunks" / f"chunk_{chunk.chunk_index}.wav"
        write_wav_file(chunk.audio, path)
        paths.append(path)
    (dialogue_dir / "transcripts.tsv").write_text(transcript_lines(chunks), encoding="utf-8")
    return paths


def write_dialogue_outputs(
    out_dir: str | Path, rendered: RenderedDialogue, chunks: list[TrainingChunk]
) -> dict:
    """Write out/{dialogue_id}/ with audio, RTTM, segment JSON, chunks and transcripts."""
    dialogue_dir = Path(out_dir) / rendered.dialogue_id
    dialogue_dir.mkdir(parents=True, exist_ok=True)
    truth = emit_ground_truth(rendered, chunks)

    write_wav_file(rendered.audio, dialogue_dir / "audio.wav")
    (dialogue_dir / "ref.rttm").write_text(truth.rttm, encoding="utf-8")
    (dialogue_dir / "segments.json").write_text(truth.segments_json, encoding="utf-8")
    chunk_paths = write_chunks(dialogue_dir, chunks)

    return {
        "dialogue_id": rendered.dialogue_id,
        "audio": str(dialogue_dir / "audio.wav"),
        "rttm": str(dialogue_dir / "ref.rttm"),
        "segments": str(dialogue_dir / "segments.json"),
        "transcripts": str(dialogue_dir / "transcripts.tsv"),
        "chunks": [str(p) for p in chunk_paths],
        "rir_applied": rendered.rir_applied,
        "room_id": rendered.room_id,
        "scale_factor": rendered.scale_factor,
    }


def dumps_corpus_manifest(records: list[dict]) -> str:
    return json.dumps(sorted(records, key=lambda r: r["dialogue_id"]), indent=2)


def load_rendered(dialogue_dir: str | Path) -> RenderedDialogue:
    """Rebuild a RenderedDialogue from a written dialogue directory."""
    dialogue_dir = Path(dialogue_dir)
    audio = read_wav_file(dialogue_dir / "audio.wav")
    conversations = parse_segment_json(
        (dialogue_dir / "segments.json").read_text(encoding="utf-8")
    )
    if len(conversations) != 1:
        raise RenderError(
            f"{dialogue_dir / 'segments.json'} holds {len(conversations)} conversations, expected 1"
        )
    annotation = conversations[0]
    return RenderedDialogue(
        dialogue_id=annotation.conversation_id,
        audio=audio,
        annotation=annotation,
        transcript_events=tuple((s.speaker, s.text or "") for s in annotation.segments),
        rir_applied=False,
    )
