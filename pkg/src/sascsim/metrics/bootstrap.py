"""Paired bootstrap comparison of two systems on the same pairs."""

from dataclasses import asdict, dataclass

import numpy as np

from sascsim.errors import MetricError
from sascsim.metrics.error_rates import METRIC_NAMES, PairErrors, score_pair


@dataclass(frozen=True)
class BootstrapResult:
    metric: str
    diff: float  # metric(A) - metric(B) on the full set
    ci_low: float
    ci_high: float
    median: float
    significant: bool
    resamples: int
    alpha: float

    def to_dict(self) -> dict:
        return asdict(self)


def _numerators(errors: list[PairErrors], metric: str) -> tuple[np.ndarray, np.ndarray]:
    """Per-pair error counts and reference lengths whose pooled ratio is the metric."""
    if metric == "wer":
        pick = [(p.word_errors, p.ref_words) for p in errors]
    elif metric == "cer":
        pick = [(p.char_errors, p.ref_chars) for p in errors]
    elif metric == "cpwer":
        pick = [(p.cp_word_errors, p.ref_words) for p in errors]
    elif metric == "cpcer":
        pick = [(p.cp_char_errors, p.ref_chars) for p in errors]
    elif metric == "sc_acc":
        pick = [(int(p.sc_correct), 1) for p in errors]
    else:
        raise MetricError(f"unknown metric {metric!r}; choose from {METRIC_NAMES}")
    values = np.array(pick, dtype=float).reshape(-1, 2)
    return values[:, 0], values[:, 1]


def _aligned(pairs_a, pairs_b):
    by_id_a = {pair.id: pair for pair in pairs_a}
    by_id_b = {pair.id: pair for pair in pairs_b}
    if len(by_id_a) != len(pairs_a) or len(by_id_b) != len(pairs_b):
        raise MetricError("duplicate pair ids")
    if by_id_a.keys() != by_id_b.keys():
        missing = sorted(by_id_a.keys() ^ by_id_b.keys())
        raise MetricError(f"systems are scored on different ids, e.g. {missing[:5]}")
    for pair_id in by_id_a:
        if by_id_a[pair_id].reference != by_id_b[pair_id].reference:
            raise MetricError(f"pair {pair_id!r} has different references in A and B")
    ids = sorted(by_id_a)
    return [by_id_a[i] for i in ids], [by_id_b[i] for i in ids]


def bootstrap_compare_errors(
    errors_a: list[PairErrors],
    errors_b: list[PairErrors],
    metric: str = "wer",
    resamples: int = 1000,
    alpha: float = 0.05,
    seed: int = 0,
) -> BootstrapResult:
    """Bootstrap on already scored pairs, aligned by position."""
    if len(errors_a) != len(errors_b) or not errors_a:
        raise MetricError("bootstrap needs two equally long, non-empty pair lists")
    if resamples < 1 or not 0 < alpha < 1:
        raise MetricError(f"invalid bootstrap settings: B={resamples}, alpha={alpha}")
    num_a, den = _numerators(errors_a, metric)
    num_b, _ = _numerators(errors_b, metric)
    if den.sum() <= 0:
        raise MetricError(f"{metric}: total reference length is zero")

    point = 100.0 * (num_a.sum() - num_b.sum()) / den.sum()
    rng = np.random.default_rng(seed)
    index = rng.integers(0, len(errors_a), size=(resamples, len(errors_a)))
    totals = den[index].sum(axis=1)
    # resamples that drew only empty references carry no information
    valid = totals > 0
    diffs = 100.0 * (num_a[index].sum(axis=1) - num_b[index].sum(axis=1))[valid] / totals[valid]
    if diffs.size == 0:
        raise MetricError(f"{metric}: every bootstrap resample has zero reference length")
    ci_low, ci_high = np.percentile(diffs, [100 * alpha / 2, 100 * (1 - alpha / 2)])
    return BootstrapResult(
        metric=metric,
        diff=float(point),
        ci_low=float(ci_low),
        ci_high=float(ci_high),
        median=float(np.median(diffs)),
        significant=not ci_low <= 0 <= ci_high,
        resamples=resamples,
        alpha=alpha,
    )


def bootstrap_compare(
    pairs_a, pairs_b, metric: str = "wer", resamples: int = 1000, alpha: float = 0.05, seed: int = 0
) -> BootstrapResult:
    """Paired bootstrap: resample pair ids jointly for both systems."""
    aligned_a, aligned_b = _aligned(list(pairs_a), list(pairs_b))
    return bootstrap_compare_errors(
        [score_pair(p) for p in aligned_a],
        [score_pair(p) for p in aligned_b],
        metric,
        resamples,
        alpha,
        seed,
    )
