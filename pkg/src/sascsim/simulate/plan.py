"""Symbolic dialogue plans: who says which utterance when."""

import json
from dataclasses import dataclass

from sascsim.annotations.segment import ConversationAnnotation, SegmentAnnotation
from sascsim.errors import InternalInvariantError, SchemaError, ValidationError
from sascsim.simulate.config import SimulationMode


@dataclass(frozen=True)
class PlanEvent:
    n: int
    speaker: str
    utterance_id: str
    gap_before: float
    start: float
    duration: float
    clamped: bool = False

    @property
    def end(self) -> float:
        return self.start + self.duration

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "speaker": self.speaker,
            "utterance_id": self.utterance_id,
            "gap_before": self.gap_before,
            "start": self.start,
            "duration": self.duration,
            "clamped": self.clamped,
        }


@dataclass(frozen=True)
class DialoguePlan:
    """Ordered events of one simulated dialogue."""

    dialogue_id: str
    pair: tuple[str, str]
    events: tuple[PlanEvent, ...]
    seed: int
    mode: SimulationMode

    @property
    def end(self) -> float:
        return max((event.end for event in self.events), default=0.0)

    @property
    def clamp_count(self) -> int:
        return sum(event.clamped for event in self.events)

    @property
    def speakers(self) -> list[str]:
        return sorted({event.speaker for event in self.events})

    def check_invariants(self, min_start_delta: float, d_min=None, d_max=None):
        """Raise InternalInvariantError if the event timeline is inconsistent."""
        if not self.events:
            return
        first = self.events[0]
        if first.gap_before != 0 or first.start != 0:
            raise InternalInvariantError(
                f"{self.dialogue_id}: first event must start at 0 with gap 0"
            )
        seen = set()
        for previous, current in zip(self.events, self.events[1:]):
            # tolerance for the float sum start_prev + delta
            if current.start < previous.start + min_start_delta - 1e-9:
                raise InternalInvariantError(
                    f"{self.dialogue_id}: event {current.n} starts too close to "
                    f"event {previous.n}"
                )
        for event in self.events:
            if event.utterance_id in seen:
                raise InternalInvariantError(
                    f"{self.dialogue_id}: utterance {event.utterance_id!r} used twice"
                )
            seen.add(event.utterance_id)
            if d_min is not None and not d_min <= event.duration <= d_max:
                raise InternalInvariantError(
                    f"{self.dialogue_id}: utterance {event.utterance_id!r} duration "
                    f"{event.duration} outside [{d_min}, {d_max}]"
                )

    def to_annotation(self, texts: dict[str, str] | None = None) -> ConversationAnnotation:
        """Realised segments; text looked up by utterance id when given."""
        texts = texts or {}
        return ConversationAnnotation.from_segments(
            self.dialogue_id,
            [
                SegmentAnnotation(
                    self.dialogue_id,
                    event.speaker,
                    event.start,
                    event.end,
                    texts.get(event.utterance_id),
                )
                for event in self.events
            ],
        )

    def to_dict(self) -> dict:
        return {
            "dialogue_id": self.dialogue_id,
            "mode": self.mode.value,
            "seed": self.seed,
            "pair": list(self.pair),
            "events": [event.to_dict() for event in self.events],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: dict) -> "DialoguePlan":
        if not isinstance(data, dict):
            raise SchemaError("expected an object", "$")
        try:
            events = tuple(
                PlanEvent(
                    n=int(raw["n"]),
                    speaker=str(raw["speaker"]),
                    utterance_id=str(raw["utterance_id"]),
                    gap_before=float(raw["gap_before"]),
                    start=float(raw["start"]),
                    duration=float(raw["duration"]),
                    clamped=bool(raw.get("clamped", False)),
                )
                for raw in data["events"]
            )
            pair = tuple(data["pair"])
            plan = cls(
                dialogue_id=str(data["dialogue_id"]),
                pair=pair,
                events=events,
                seed=int(data["seed"]),
                mode=SimulationMode(data["mode"]),
            )
        except KeyError as exc:
            raise SchemaError("missing required field", f"$.{exc.args[0]}") from exc
        except (TypeError, ValueError) as exc:
            raise SchemaError(str(exc), "$") from exc
        if len(plan.pair) != 2:
            raise ValidationError(f"{plan.dialogue_id}: pair must name two speakers")
        for event in plan.events:
            if not event.duration > 0:
                raise ValidationError(
                    f"{plan.dialogue_id}: event {event.n} has non-positive duration"
                )
        return plan

    @classmethod
    def from_json(cls, text: str) -> "DialoguePlan":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON ({exc.msg})", "$") from exc
        return cls.from_dict(data)
