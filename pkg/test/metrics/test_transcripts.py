import json

import pytest

from sascsim.errors import MetricError
from sascsim.metrics.error_rates import ScoredPair
from sascsim.metrics.transcripts import align_pairs, read_pairs, read_transcripts


def test_two_column_tsv(tmp_path):
    path = tmp_path / "ref.tsv"
    path.write_text("u1\tszia <sc> hello\nu2\tjó\n\n", encoding="utf-8")
    assert read_transcripts(path) == {"u1": "szia <sc> hello", "u2": "jó"}


def test_chunk_transcript_tsv(tmp_path):
    path = tmp_path / "transcripts.tsv"
    path.write_text("dialogue_00000\t0\ta <sc> b\ndialogue_00000\t1\tc\n", encoding="utf-8")
    assert read_transcripts(path) == {"dialogue_00000:0": "a <sc> b", "dialogue_00000:1": "c"}


def test_tsv_errors(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("only-one-column\n", encoding="utf-8")
    with pytest.raises(MetricError, match="bad.tsv:1"):
        read_transcripts(path)
    path.write_text("u1\ta\nu1\tb\n", encoding="utf-8")
    with pytest.raises(MetricError, match="duplicate"):
        read_transcripts(path)


@pytest.mark.parametrize(
    "document", [{"u1": "a", "u2": "b"}, [{"id": "u1", "text": "a"}, {"id": "u2", "text": "b"}]]
)
def test_json_transcripts(tmp_path, document):
    path = tmp_path / "hyp.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    assert read_transcripts(path) == {"u1": "a", "u2": "b"}


def test_read_pairs(tmp_path):
    path = tmp_path / "pairs.json"
    path.write_text(
        json.dumps(
            [
                {"id": "b", "reference": "x", "hypothesis": "y"},
                {"id": "a", "reference": "p", "hypothesis": "q"},
            ]
        ),
        encoding="utf-8",
    )
    assert read_pairs(path) == [ScoredPair("a", "p", "q"), ScoredPair("b", "x", "y")]


def test_read_pairs_missing_field(tmp_path):
    path = tmp_path / "pairs.json"
    path.write_text(json.dumps([{"id": "a"}]), encoding="utf-8")
    with pytest.raises(MetricError):
        read_pairs(path)


def test_align_pairs():
    pairs = align_pairs({"b": "2", "a": "1"}, {"a": "one", "b": "two"})
    assert [p.id for p in pairs] == ["a", "b"]
    with pytest.raises(MetricError, match="id mismatch"):
        align_pairs({"a": "1"}, {"b": "2"})
