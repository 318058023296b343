from sascsim.annotations.segment import ConversationAnnotation
from sascsim.errors import ExtractionError

ROLES = ("A", "B")


def turn_sequences(annotation: ConversationAnnotation) -> list[str]:
    """Role sequence of a two-speaker conversation; first speaker to talk is A."""
    speakers = annotation.speakers
    if len(speakers) > len(ROLES):
        raise ExtractionError(
            f"conversation {annotation.conversation_id!r} has {len(speakers)} "
            f"speakers; transition estimation needs at most {len(ROLES)}"
        )
    role_of = dict(zip(speakers, ROLES))
    return [role_of[segment.speaker] for segment in annotation.segments]


def corpus_turn_sequences(annotations) -> list[list[str]]:
    return [
        turn_sequences(annotation)
        for annotation in sorted(annotations, key=lambda a: a.conversation_id)
    ]
