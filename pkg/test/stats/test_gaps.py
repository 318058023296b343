import pytest

from sascsim.annotations.segment import ConversationAnnotation, SegmentAnnotation
from sascsim.errors import ExtractionError
from sascsim.stats.gaps import (
    GapObservation,
    TransitionType,
    extract_corpus_gaps,
    extract_gaps,
    observations_to_csv,
    overlap_ratio,
)


def _conversation(*segments, cid="c"):
    return ConversationAnnotation.from_segments(
        cid, [SegmentAnnotation(cid, spk, start, end) for spk, start, end in segments]
    )


def _obs(delta):
    return GapObservation("c", delta, TransitionType.DIFF, "A", 1.0)


def test_same_and_diff_gaps():
    gaps = extract_gaps(_conversation(("A", 0, 2), ("A", 2.5, 4), ("B", 3.8, 6)))
    assert len(gaps) == 2
    assert gaps[0].delta == pytest.approx(0.5)
    assert gaps[0].transition is TransitionType.SAME
    assert gaps[0].incoming_speaker == "A"
    assert gaps[0].following_duration == pytest.approx(1.5)
    assert gaps[1].delta == pytest.approx(-0.2)
    assert gaps[1].transition is TransitionType.DIFF
    assert gaps[1].incoming_speaker == "B"
    assert gaps[1].following_duration == pytest.approx(2.2)


def test_touching_segments_give_zero_gap():
    (gap,) = extract_gaps(_conversation(("A", 0, 2), ("B", 2, 4)))
    assert gap.delta == 0.0
    assert gap.transition is TransitionType.DIFF


def test_single_segment_is_rejected():
    with pytest.raises(ExtractionError):
        extract_gaps(_conversation(("A", 0, 2)))


def test_single_speaker_is_rejected():
    with pytest.raises(ExtractionError):
        extract_gaps(_conversation(("A", 0, 2), ("A", 3, 4)))


def test_one_observation_per_adjacent_pair(synthetic_corpus):
    for conversation in synthetic_corpus(n_conversations=3):
        assert len(extract_gaps(conversation)) == len(conversation.segments) - 1


def test_conversation_scope_prefixes_speakers():
    (gap,) = extract_gaps(_conversation(("A", 0, 2), ("B", 2, 4), cid="k"), "conversation")
    assert gap.incoming_speaker == "k/B"


def test_corpus_gaps_ordered_by_conversation_id():
    first = _conversation(("A", 0, 2), ("B", 3, 4), cid="b")
    second = _conversation(("A", 0, 2), ("B", 3, 4), cid="a")
    gaps = extract_corpus_gaps([first, second])
    assert [g.conversation_id for g in gaps] == ["a", "b"]


def test_overlap_ratio_examples():
    assert overlap_ratio([_obs(d) for d in (-0.1, 0.2, 0.3, -0.4)]) == 0.5
    assert overlap_ratio([_obs(d) for d in (0.1, 0.2)]) == 0.0
    assert overlap_ratio([_obs(d) for d in (-0.1, -0.2)]) == 1.0


def test_overlap_ratio_of_nothing():
    with pytest.raises(ExtractionError):
        overlap_ratio([])


def test_overlap_ratio_is_shift_invariant(synthetic_corpus):
    (conversation,) = synthetic_corpus(n_conversations=1)
    shifted = ConversationAnnotation.from_segments(
        conversation.conversation_id,
        [
            SegmentAnnotation(s.conversation_id, s.speaker, s.start + 17.0, s.end + 17.0)
            for s in conversation.segments
        ],
    )
    assert overlap_ratio(extract_gaps(shifted)) == overlap_ratio(extract_gaps(conversation))


def test_csv_header_and_rows():
    csv_text = observations_to_csv([_obs(-0.25)])
    lines = csv_text.strip().splitlines()
    assert lines[0] == "conversation_id,delta,transition,incoming_speaker,following_duration"
    assert lines[1] == "c,-0.25,diff,A,1.0"
