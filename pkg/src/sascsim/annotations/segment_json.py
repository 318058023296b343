import json

from sascsim.annotations.segment import ConversationAnnotation, SegmentAnnotation
from sascsim.errors import SchemaError, ValidationError


def _require(obj: dict, key: str, kinds, path: str):
    if not isinstance(obj, dict):
        raise SchemaError("expected an object", path)
    if key not in obj:
        raise SchemaError("missing required field", f"{path}.{key}")
    value = obj[key]
    # bool is an int subclass, but never a valid number here
    if isinstance(value, bool) or not isinstance(value, kinds):
        raise SchemaError(
            f"expected {_kind_names(kinds)}, got {type(value).__name__}",
            f"{path}.{key}",
        )
    return value


def _kind_names(kinds) -> str:
    if isinstance(kinds, tuple):
        return " or ".join(kind.__name__ for kind in kinds)
    return kinds.__name__


def _parse_segment(raw: dict, conversation_id: str, path: str) -> SegmentAnnotation:
    speaker = _require(raw, "speaker", str, path)
    start = float(_require(raw, "start", (int, float), path))
    end = float(_require(raw, "end", (int, float), path))
    text = raw.get("text")
    if text is not None and not isinstance(text, str):
        raise SchemaError(
            f"expected str or null, got {type(text).__name__}", f"{path}.text"
        )
    try:
        return SegmentAnnotation(conversation_id, speaker, start, end, text)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def parse_segment_json(text: str) -> list[ConversationAnnotation]:
    """Parse the conversation JSON document into canonical annotations."""
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON ({exc.msg})", "$") from exc
    if not isinstance(document, list):
        raise SchemaError("expected an array of conversations", "$")

    conversations = []
    for i, raw_conversation in enumerate(document):
        path = f"$[{i}]"
        conversation_id = _require(raw_conversation, "conversation_id", str, path)
        raw_segments = _require(raw_conversation, "segments", list, path)
        segments = [
            _parse_segment(raw, conversation_id, f"{path}.segments[{j}]")
            for j, raw in enumerate(raw_segments)
        ]
        conversations.append(
            ConversationAnnotation.from_segments(conversation_id, segments)
        )
    return conversations


def conversation_to_dict(annotation: ConversationAnnotation) -> dict:
    return {
        "conversation_id": annotation.conversation_id,
        "segments": [
            {
                "speaker": segment.speaker,
                "start": segment.start,
                "end": segment.end,
                "text": segment.text,
            }
            for segment in annotation.segments
        ],
    }


def write_segment_json(conversations: list[ConversationAnnotation]) -> str:
    """Inverse of parse_segment_json; floats are written with full precision."""
    return json.dumps(
        [conversation_to_dict(conversation) for conversation in conversations],
        indent=2,
        ensure_ascii=False,
    )
