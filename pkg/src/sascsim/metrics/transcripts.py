"""Reading reference/hypothesis transcripts and aligning them into pairs."""

import csv
import json
from pathlib import Path

from sascsim.errors import MetricError
from sascsim.metrics.error_rates import ScoredPair


def _read_tsv(text: str, source: str) -> dict[str, str]:
    transcripts = {}
    for line_number, row in enumerate(csv.reader(text.splitlines(), delimiter="\t"), start=1):
        if not row or not any(cell.strip() for cell in row):
            continue
        if len(row) == 2:
            key, value = row
        elif len(row) == 3:
            # chunk transcripts: dialogue_id, chunk_index, text
            key, value = f"{row[0]}:{row[1]}", row[2]
        else:
            raise MetricError(f"{source}:{line_number}: expected 2 or 3 columns, got {len(row)}")
        if key in transcripts:
            raise MetricError(f"{source}:{line_number}: duplicate id {key!r}")
        transcripts[key] = value
    return transcripts


def _read_json(text: str, source: str) -> dict[str, str]:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MetricError(f"{source}: invalid JSON ({exc.msg})") from exc
    if isinstance(document, dict):
        items = document.items()
    elif isinstance(document, list):
        try:
            items = [(entry["id"], entry["text"]) for entry in document]
        except (KeyError, TypeError) as exc:
            raise MetricError(f"{source}: entries need 'id' and 'text'") from exc
    else:
        raise MetricError(f"{source}: expected an object or an array")
    transcripts = {}
    for key, value in items:
        if not isinstance(value, str):
            raise MetricError(f"{source}: text of {key!r} is not a string")
        if str(key) in transcripts:
            raise MetricError(f"{source}: duplicate id {key!r}")
        transcripts[str(key)] = value
    return transcripts


def read_transcripts(path: str | Path) -> dict[str, str]:
    """id -> text from TSV (2 or 3 columns) or JSON ({id: text} or [{id, text}])."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        return _read_json(text, str(path))
    return _read_tsv(text, str(path))


def read_pairs(path: str | Path) -> list[ScoredPair]:
    """Pairs from a JSON array of {id, reference, hypothesis}."""
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
        return sorted(
            (ScoredPair(str(e["id"]), e["reference"], e["hypothesis"]) for e in document),
            key=lambda p: p.id,
        )
    except json.JSONDecodeError as exc:
        raise MetricError(f"{path}: invalid JSON ({exc.msg})") from exc
    except (KeyError, TypeError) as exc:
        raise MetricError(f"{path}: entries need id, reference and hypothesis") from exc


def align_pairs(references: dict[str, str], hypotheses: dict[str, str]) -> list[ScoredPair]:
    """Pairs sorted by id; both sides must cover exactly the same ids."""
    if references.keys() != hypotheses.keys():
        only_ref = sorted(references.keys() - hypotheses.keys())
        only_hyp = sorted(hypotheses.keys() - references.keys())
        raise MetricError(
            f"id mismatch: {len(only_ref)} only in reference (e.g. {only_ref[:3]}), "
            f"{len(only_hyp)} only in hypothesis (e.g. {only_hyp[:3]})"
        )
    return [ScoredPair(key, references[key], hypotheses[key]) for key in sorted(references)]
