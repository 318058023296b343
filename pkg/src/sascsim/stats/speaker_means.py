import logging
from collections import defaultdict
from dataclasses import dataclass

from sascsim.errors import ValidationError
from sascsim.stats.gaps import GapObservation, TransitionType

logger = logging.getLogger(__name__)

DEFAULT_MIN_OBS = 3


@dataclass(frozen=True)
class SpeakerGapSummary:
    """Mean gap of one incoming speaker per transition type."""

    speaker: str
    mean_same: float | None
    mean_diff: float | None
    count_same: int
    count_diff: int

    def get_mean(self, transition: TransitionType) -> float | None:
        return self.mean_same if transition is TransitionType.SAME else self.mean_diff

    def get_count(self, transition: TransitionType) -> int:
        return self.count_same if transition is TransitionType.SAME else self.count_diff


@dataclass(frozen=True)
class ResidualSample:
    residual: float
    duration: float
    transition: TransitionType

    def __post_init__(self):
        if not self.duration > 0:
            raise ValidationError(f"duration must be positive, got {self.duration}")


def _group_deltas(observations) -> dict[str, dict[TransitionType, list[float]]]:
    grouped: dict[str, dict[TransitionType, list[float]]] = defaultdict(
        lambda: {TransitionType.SAME: [], TransitionType.DIFF: []}
    )
    for obs in observations:
        grouped[obs.incoming_speaker][obs.transition].append(obs.delta)
    return grouped


def speaker_means(
    observations: list[GapObservation], min_obs: int = DEFAULT_MIN_OBS
) -> list[SpeakerGapSummary]:
    """Per-speaker mean gaps; a mean is only given with at least min_obs gaps."""
    if min_obs < 1:
        raise ValidationError(f"min_obs must be >= 1, got {min_obs}")

    summaries = []
    omitted = []
    for speaker, by_type in sorted(_group_deltas(observations).items()):
        same = by_type[TransitionType.SAME]
        diff = by_type[TransitionType.DIFF]
        mean_same = sum(same) / len(same) if len(same) >= min_obs else None
        mean_diff = sum(diff) / len(diff) if len(diff) >= min_obs else None
        if mean_same is None and mean_diff is None:
            omitted.append(speaker)
            continue
        summaries.append(
            SpeakerGapSummary(speaker, mean_same, mean_diff, len(same), len(diff))
        )

    if omitted:
        logger.info(
            "%d speakers below min_obs=%d for both transition types were omitted",
            len(omitted),
            min_obs,
        )
    return summaries


def residuals(observations, summaries) -> list[ResidualSample]:
    """Gap minus the incoming speaker's own mean; speakers without a mean are skipped."""
    by_speaker = {summary.speaker: summary for summary in summaries}
    samples = []
    for obs in observations:
        summary = by_speaker.get(obs.incoming_speaker)
        if summary is None:
            continue
        if (mean := summary.get_mean(obs.transition)) is None:
            continue
        samples.append(
            ResidualSample(obs.delta - mean, obs.following_duration, obs.transition)
        )
    return samples
