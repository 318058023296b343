"""Dialogue planning: turn sequence growth, lazy speaker baselines and gap sampling."""

import logging
from collections.abc import Callable

import numpy as np

from sascsim.annotations.manifest import UtteranceEntry, UtterancePool
from sascsim.density.stats_model import StatsModel
from sascsim.errors import ConfigurationError, InternalInvariantError
from sascsim.simulate.config import SimulationConfig, SimulationMode
from sascsim.simulate.plan import DialoguePlan, PlanEvent
from sascsim.stats.gaps import TransitionType
from sascsim.turns.transition_matrix import (
    TransitionMatrix,
    initial_speaker,
    next_speaker,
)

logger = logging.getLogger(__name__)


class SpeakerTimingState:
    """Per-dialogue baseline gaps of one speaker, sampled on first use and then frozen."""

    def __init__(self):
        self.mu: dict[TransitionType, float] = {}

    def get_mu(self, transition: TransitionType, sampler: Callable[[], float]) -> float:
        if transition not in self.mu:
            self.mu[transition] = sampler()
        return self.mu[transition]

    @property
    def mu_same(self) -> float | None:
        return self.mu.get(TransitionType.SAME)

    @property
    def mu_diff(self) -> float | None:
        return self.mu.get(TransitionType.DIFF)


def grow_turn_sequence(
    matrix: TransitionMatrix,
    pool_sizes: dict[str, int],
    initial: str,
    rng: np.random.Generator,
) -> list[str]:
    """Extend a sampled role sequence until the next role has no utterance left."""
    counts = dict.fromkeys(matrix.states, 0)
    sequence = [initial]
    counts[initial] = 1
    while True:
        role = next_speaker(matrix, sequence[-1], rng)
        if counts[role] + 1 > pool_sizes.get(role, 0):
            return sequence
        counts[role] += 1
        sequence.append(role)


def _check_model(model: StatsModel | None, config: SimulationConfig):
    required = config.mode.get_model_mode()
    if required is None:
        return
    if model is None:
        raise ConfigurationError(f"{config.mode.value} simulation needs a statistics model")
    if model.mode is not required:
        raise ConfigurationError(
            f"{config.mode.value} simulation needs a {required.value} model, "
            f"got {model.mode.value}"
        )


def _sample_gap(
    transition: TransitionType,
    state: SpeakerTimingState,
    d_star: float,
    model: StatsModel | None,
    config: SimulationConfig,
    rng: np.random.Generator,
) -> float:
    if config.mode is SimulationMode.NAIVE:
        return config.fixed_gap
    mu = state.get_mu(transition, lambda: model.sample_mean(transition, rng))
    if config.mode is SimulationMode.SASC:
        return mu + model.sample_residual(transition, rng)
    # C-SASC conditions on the duration of the utterance that follows the gap
    return mu + model.sample_residual(transition, rng, d_star=d_star)


def plan_dialogue(
    pair: tuple[str, str],
    pools: UtterancePool,
    stats_model: StatsModel | None,
    config: SimulationConfig,
    rng: np.random.Generator,
    dialogue_id: str = "dialogue",
    seed: int | None = None,
) -> DialoguePlan:
    """Plan the longest dialogue the two speakers' pools allow along one sampled turn sequence."""
    if config.mode is SimulationMode.NOSIM:
        raise ConfigurationError("nosim plans are built by plan_no_concat")
    _check_model(stats_model, config)

    if stats_model is not None:
        matrix = stats_model.transition
    else:
        matrix = TransitionMatrix.uniform()
    speaker_of = dict(zip(matrix.states, pair))
    groups = {role: pools.get_group(speaker) for role, speaker in speaker_of.items()}
    pool_sizes = {role: len(group) for role, group in groups.items()}

    initial = initial_speaker(matrix, rng)
    roles = grow_turn_sequence(matrix, pool_sizes, initial, rng)

    cursors = dict.fromkeys(matrix.states, 0)
    states = {role: SpeakerTimingState() for role in matrix.states}
    events: list[PlanEvent] = []
    for n, role in enumerate(roles, start=1):
        group = groups[role]
        if cursors[role] >= len(group):
            raise InternalInvariantError(
                f"{dialogue_id}: speaker {speaker_of[role]!r} ran out of utterances"
            )
        # utterances are consumed chronologically, so d_n is known before its gap
        entry: UtteranceEntry = group[cursors[role]]
        cursors[role] += 1

        if not events:
            events.append(
                PlanEvent(n, entry.speaker, entry.utterance_id, 0.0, 0.0, entry.duration)
            )
            continue

        previous = events[-1]
        transition = TransitionType.between(previous.speaker, entry.speaker)
        gap = _sample_gap(transition, states[role], entry.duration, stats_model, config, rng)
        unclamped = previous.end + gap
        start = max(unclamped, previous.start + config.clamp_min_start_delta, 0.0)
        events.append(
            PlanEvent(
                n,
                entry.speaker,
                entry.utterance_id,
                gap,
                start,
                entry.duration,
                clamped=start != unclamped,
            )
        )

    plan = DialoguePlan(
        dialogue_id, tuple(pair), tuple(events), config.seed if seed is None else seed, config.mode
    )
    plan.check_invariants(config.clamp_min_start_delta, config.d_min, config.d_max)
    if plan.clamp_count:
        logger.debug("%s: %d start(s) clamped", dialogue_id, plan.clamp_count)
    return plan


def plan_no_concat(
    pair: tuple[str, str],
    pools: UtterancePool,
    config: SimulationConfig,
    skip_speakers=(),
    dialogue_prefix: str = "nosim",
) -> list[DialoguePlan]:
    """One single-event plan per utterance of the pair's speakers."""
    plans = []
    for speaker in pair:
        if speaker in skip_speakers:
            continue
        for entry in pools.get_group(speaker):
            event = PlanEvent(1, speaker, entry.utterance_id, 0.0, 0.0, entry.duration)
            plans.append(
                DialoguePlan(
                    f"{dialogue_prefix}_{len(plans):05d}",
                    tuple(pair),
                    (event,),
                    config.seed,
                    SimulationMode.NOSIM,
                )
            )
    return plans
