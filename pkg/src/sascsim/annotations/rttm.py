import logging
from collections import defaultdict

from sascsim.annotations.segment import ConversationAnnotation, SegmentAnnotation
from sascsim.errors import ParseError, ValidationError

logger = logging.getLogger(__name__)

MIN_FIELDS = 9
TIME_DECIMALS = 3


def parse_rttm(text: str) -> list[ConversationAnnotation]:
    """Parse RTTM SPEAKER lines into conversations sorted by file id."""
    grouped = defaultdict(list)
    for line_number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue

        fields = line.split()
        if len(fields) < MIN_FIELDS:
            raise ParseError(
                f"expected at least {MIN_FIELDS} fields, got {len(fields)}",
                line_number,
            )
        if fields[0] != "SPEAKER":
            raise ParseError(f"unsupported type field {fields[0]!r}", line_number)

        file_id, speaker = fields[1], fields[7]
        try:
            onset = float(fields[3])
            duration = float(fields[4])
        except ValueError as exc:
            raise ParseError(f"onset/duration not numeric: {exc}", line_number) from exc

        if duration <= 0:
            raise ValidationError(
                f"line {line_number}: duration must be positive, got {duration}"
            )
        try:
            segment = SegmentAnnotation(file_id, speaker, onset, onset + duration)
        except ValidationError as exc:
            raise ValidationError(f"line {line_number}: {exc}") from exc
        grouped[file_id].append(segment)

    conversations = [
        ConversationAnnotation.from_segments(cid, segments)
        for cid, segments in sorted(grouped.items())
    ]
    logger.debug("parsed %d conversations from RTTM", len(conversations))
    return conversations


def format_rttm_line(segment: SegmentAnnotation) -> str:
    onset = round(segment.start, TIME_DECIMALS)
    # duration from the rounded boundaries keeps end = onset + duration after reload
    duration = max(round(segment.end, TIME_DECIMALS) - onset, 10**-TIME_DECIMALS)
    return (
        f"SPEAKER {segment.conversation_id} 1 {onset:.3f} {duration:.3f} "
        f"<NA> <NA> {segment.speaker} <NA> <NA>"
    )


def write_rttm(annotation: ConversationAnnotation) -> str:
    """One SPEAKER line per segment, times quantised to milliseconds."""
    lines = [format_rttm_line(segment) for segment in annotation.segments]
    return "\n".join(lines) + ("\n" if lines else "")
