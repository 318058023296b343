import logging
from dataclasses import dataclass

import numpy as np

from sascsim.errors import PairingError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpeakerPair:
    """An unordered speaker pair (stored sorted) and the shuffle round it came from."""

    speakers: tuple[str, str]
    round_index: int


@dataclass(frozen=True)
class PairingResult:
    pairs: tuple[SpeakerPair, ...]
    unpaired: tuple[str, ...]


def make_pairs(
    speakers, pairs_limit: int, rng: np.random.Generator, max_retries: int = 100
) -> PairingResult:
    """K shuffles, each paired off adjacently; a shuffle repeating a pair is redrawn.

    Every speaker joins at most one pair per shuffle, hence at most K pairs overall.
    """
    speakers = sorted(set(speakers))
    if len(speakers) < 2:
        raise PairingError(f"need at least 2 speakers to pair, got {len(speakers)}")
    if pairs_limit < 1:
        raise PairingError(f"pairs_limit must be >= 1, got {pairs_limit}")

    used: set[tuple[str, str]] = set()
    pairs = []
    retries = 0
    for round_index in range(pairs_limit):
        while True:
            order = rng.permutation(len(speakers))
            candidates = [
                tuple(sorted((speakers[order[i]], speakers[order[i + 1]])))
                for i in range(0, len(order) - 1, 2)
            ]
            if not any(pair in used for pair in candidates):
                break
            retries += 1
            if retries > max_retries:
                raise PairingError(
                    f"no duplicate-free pairing of {len(speakers)} speakers for "
                    f"round {round_index + 1} of {pairs_limit} after {max_retries} retries"
                )
        used.update(candidates)
        pairs.extend(SpeakerPair(pair, round_index) for pair in candidates)

    paired = {speaker for pair in pairs for speaker in pair.speakers}
    unpaired = tuple(speaker for speaker in speakers if speaker not in paired)
    if unpaired:
        logger.warning("%d speaker(s) left unpaired: %s", len(unpaired), ", ".join(unpaired))
    logger.info(
        "formed %d pairs from %d speakers (limit %d, %d reshuffles)",
        len(pairs),
        len(speakers),
        pairs_limit,
        retries,
    )
    return PairingResult(tuple(pairs), unpaired)
