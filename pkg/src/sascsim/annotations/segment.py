from dataclasses import dataclass

from sascsim.errors import ValidationError


@dataclass(frozen=True)
class SegmentAnnotation:
    """A speaker-labeled time interval inside one conversation."""

    conversation_id: str
    speaker: str
    start: float
    end: float
    text: str | None = None

    def __post_init__(self):
        if self.start < 0:
            raise ValidationError(
                f"segment of {self.speaker!r} in {self.conversation_id!r} starts "
                f"before 0: {self.start}"
            )
        if not self.end > self.start:
            raise ValidationError(
                f"segment of {self.speaker!r} in {self.conversation_id!r} has "
                f"end {self.end} <= start {self.start}"
            )

    @property
    def duration(self) -> float:
        return self.end - self.start

    def sort_key(self) -> tuple[float, str, float]:
        return (self.start, self.speaker, self.end)


@dataclass(frozen=True)
class ConversationAnnotation:
    """All segments of one conversation in canonical order (start, speaker, end)."""

    conversation_id: str
    segments: tuple[SegmentAnnotation, ...]

    @classmethod
    def from_segments(
        cls, conversation_id: str, segments
    ) -> "ConversationAnnotation":
        for segment in segments:
            if segment.conversation_id != conversation_id:
                raise ValidationError(
                    f"segment belongs to {segment.conversation_id!r}, "
                    f"expected {conversation_id!r}"
                )
        ordered = tuple(sorted(segments, key=SegmentAnnotation.sort_key))
        return cls(conversation_id, ordered)

    @property
    def speakers(self) -> list[str]:
        """Distinct speakers in order of first appearance."""
        seen = {}
        for segment in self.segments:
            seen.setdefault(segment.speaker, None)
        return list(seen)

    def __len__(self) -> int:
        return len(self.segments)
