"""Corpus-level simulation: pairing, per-dialogue seeds and summary statistics."""

import hashlib
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np
from tqdm import tqdm

from sascsim.annotations.manifest import UtterancePool, filter_pool_with_summary
from sascsim.density.stats_model import StatsModel
from sascsim.errors import PairingError
from sascsim.simulate.config import SimulationConfig, SimulationMode
from sascsim.simulate.pairing import SpeakerPair, make_pairs
from sascsim.simulate.plan import DialoguePlan
from sascsim.simulate.planner import plan_dialogue, plan_no_concat

logger = logging.getLogger(__name__)

SEED_MASK = 2**64 - 1


def derive_seed(seed: int, pair: tuple[str, str], round_index: int) -> int:
    """seed XOR blake2b-64 of (speaker ids, round); stable across machines and runs.

    Single-utterance plans pass their running index as round_index.
    """
    key = "\x1f".join((pair[0], pair[1], str(round_index))).encode("utf-8")
    digest = hashlib.blake2b(key, digest_size=8).digest()
    return (seed ^ int.from_bytes(digest, "big")) & SEED_MASK


def dialogue_id(index: int) -> str:
    return f"dialogue_{index:05d}"


@dataclass(frozen=True)
class CorpusSummary:
    """Size statistics of a simulated corpus."""

    dialogues: int
    speakers: int
    pairs: int
    unpaired_speakers: tuple[str, ...]
    mean_utterances_per_dialogue: float
    mean_utterance_duration: float
    mean_dialogue_length: float
    total_hours: float
    clamp_count: int
    real_hours: float | None = None
    real_ratio: float | None = None

    def to_dict(self) -> dict:
        data = asdict(self)
        data["unpaired_speakers"] = list(self.unpaired_speakers)
        return data


@dataclass(frozen=True)
class SimulatedCorpus:
    plans: tuple[DialoguePlan, ...]
    summary: CorpusSummary


def summarize(plans, speakers: int, pairs: int, unpaired=(), real_hours=None) -> CorpusSummary:
    durations = [event.duration for plan in plans for event in plan.events]
    lengths = [plan.end for plan in plans]
    total_hours = sum(lengths) / 3600.0
    real_ratio = None
    if real_hours is not None and real_hours + total_hours > 0:
        real_ratio = real_hours / (real_hours + total_hours)
    return CorpusSummary(
        dialogues=len(plans),
        speakers=speakers,
        pairs=pairs,
        unpaired_speakers=tuple(unpaired),
        mean_utterances_per_dialogue=float(np.mean([len(p.events) for p in plans])) if plans else 0.0,
        mean_utterance_duration=float(np.mean(durations)) if durations else 0.0,
        mean_dialogue_length=float(np.mean(lengths)) if lengths else 0.0,
        total_hours=total_hours,
        clamp_count=sum(plan.clamp_count for plan in plans),
        real_hours=real_hours,
        real_ratio=real_ratio,
    )


def _plan_pair(
    index: int,
    pair: SpeakerPair,
    pools: UtterancePool,
    stats_model: StatsModel | None,
    config: SimulationConfig,
) -> DialoguePlan:
    seed = derive_seed(config.seed, pair.speakers, pair.round_index)
    return plan_dialogue(
        pair.speakers,
        pools,
        stats_model,
        config,
        np.random.default_rng(seed),
        dialogue_id=dialogue_id(index),
        seed=seed,
    )


def simulate_corpus(
    manifest: UtterancePool,
    stats_model: StatsModel | None,
    config: SimulationConfig,
    real_hours: float | None = None,
    progress: bool = False,
) -> SimulatedCorpus:
    """Filter the pool, pair speakers and plan one dialogue per pair.

    Each pair sees its speakers' full filtered pools, so with K > 1 an utterance may
    recur across dialogues but never within one.
    """
    pools, _ = filter_pool_with_summary(manifest, config.d_min, config.d_max)
    speakers = [speaker for speaker, group in pools.groups.items() if group]
    if len(speakers) < 2:
        raise PairingError(
            f"only {len(speakers)} speaker(s) with utterances in "
            f"[{config.d_min}, {config.d_max}] s"
        )
    pairing = make_pairs(
        speakers, config.pairs_limit, np.random.default_rng(config.seed), config.max_pair_retries
    )

    if config.mode is SimulationMode.NOSIM:
        plans = []
        emitted: set[str] = set()
        for pair in pairing.pairs:
            plans.extend(plan_no_concat(pair.speakers, pools, config, skip_speakers=emitted))
            emitted.update(pair.speakers)
        # distinct seeds so per-dialogue draws downstream (RIR choice) differ
        plans = [
            replace(
                plan,
                dialogue_id=dialogue_id(i),
                seed=derive_seed(config.seed, plan.pair, i),
            )
            for i, plan in enumerate(plans)
        ]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as executor:
            futures = [
                executor.submit(_plan_pair, i, pair, pools, stats_model, config)
                for i, pair in enumerate(pairing.pairs)
            ]
            plans = [
                future.result()
                for future in tqdm(
                    futures, desc="planning dialogues", unit="dlg", disable=not progress
                )
            ]

    summary = summarize(plans, len(speakers), len(pairing.pairs), pairing.unpaired, real_hours)
    logger.info(
        "simulated %d dialogues (%.2f h, %.1f utterances and %.1f s per dialogue, "
        "%d clamped starts)",
        summary.dialogues,
        summary.total_hours,
        summary.mean_utterances_per_dialogue,
        summary.mean_dialogue_length,
        summary.clamp_count,
    )
    return SimulatedCorpus(tuple(plans), summary)
