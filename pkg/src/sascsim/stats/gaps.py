import csv
import io
from dataclasses import dataclass
from enum import Enum

from sascsim.annotations.segment import ConversationAnnotation
from sascsim.errors import ExtractionError, ValidationError

SPEAKER_SCOPES = ("global", "conversation")


class TransitionType(Enum):
    SAME = "same"  # X_n == X_{n-1}
    DIFF = "diff"

    @classmethod
    def between(cls, previous_speaker: str, speaker: str) -> "TransitionType":
        return cls.SAME if previous_speaker == speaker else cls.DIFF


@dataclass(frozen=True)
class GapObservation:
    """Signed gap before a segment; negative means overlap."""

    conversation_id: str
    delta: float
    transition: TransitionType
    incoming_speaker: str
    following_duration: float

    def __post_init__(self):
        if not self.following_duration > 0:
            raise ValidationError(
                f"following_duration must be positive, got {self.following_duration}"
            )


def scoped_speaker(conversation_id: str, speaker: str, speaker_scope: str) -> str:
    if speaker_scope == "global":
        return speaker
    if speaker_scope == "conversation":
        return f"{conversation_id}/{speaker}"
    raise ValidationError(f"unknown speaker scope {speaker_scope!r}")


def extract_gaps(
    annotation: ConversationAnnotation, speaker_scope: str = "global"
) -> list[GapObservation]:
    """One observation per pair of start-adjacent segments."""
    if len(annotation.segments) < 2:
        raise ExtractionError(
            f"conversation {annotation.conversation_id!r} has "
            f"{len(annotation.segments)} segment(s), need at least 2"
        )
    if len(annotation.speakers) < 2:
        raise ExtractionError(
            f"conversation {annotation.conversation_id!r} has a single speaker"
        )

    observations = []
    for previous, current in zip(annotation.segments, annotation.segments[1:]):
        observations.append(
            GapObservation(
                conversation_id=annotation.conversation_id,
                delta=current.start - previous.end,
                transition=TransitionType.between(previous.speaker, current.speaker),
                incoming_speaker=scoped_speaker(
                    annotation.conversation_id, current.speaker, speaker_scope
                ),
                following_duration=current.end - current.start,
            )
        )
    return observations


def extract_corpus_gaps(
    annotations, speaker_scope: str = "global"
) -> list[GapObservation]:
    """extract_gaps over many conversations, merged in conversation_id order."""
    observations = []
    for annotation in sorted(annotations, key=lambda a: a.conversation_id):
        observations.extend(extract_gaps(annotation, speaker_scope))
    return observations


def overlap_ratio(observations) -> float:
    """Share of observations with a negative gap."""
    if not observations:
        raise ExtractionError("overlap ratio of an empty observation list")
    overlapping = sum(1 for obs in observations if obs.delta < 0)
    return overlapping / len(observations)


def observations_to_csv(observations) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        [
            "conversation_id",
            "delta",
            "transition",
            "incoming_speaker",
            "following_duration",
        ]
    )
    for obs in observations:
        writer.writerow(
            [
                obs.conversation_id,
                repr(obs.delta),
                obs.transition.value,
                obs.incoming_speaker,
                repr(obs.following_duration),
            ]
        )
    return buffer.getvalue()
