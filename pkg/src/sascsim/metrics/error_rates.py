"""Pooled WER/CER, permutation-minimal cpWER/cpCER and speaker-change accuracy."""

import csv
import io
import itertools
import logging
from dataclasses import asdict, dataclass

import editdistance

from sascsim.errors import MetricError
from sascsim.metrics.edit_distance import edit_distance
from sascsim.metrics.text import chars, normalize, sc_count, split_segments, words

logger = logging.getLogger(__name__)

MAX_EXHAUSTIVE_SEGMENTS = 8
METRIC_NAMES = ("wer", "cer", "cpwer", "cpcer", "sc_acc")
UNITS = ("word", "char")


@dataclass(frozen=True)
class ScoredPair:
    id: str
    reference: str
    hypothesis: str


@dataclass(frozen=True)
class PairErrors:
    """Error counts and reference lengths of one scored pair."""

    id: str
    ref_words: int
    word_errors: int
    ref_chars: int
    char_errors: int
    cp_word_errors: int
    cp_char_errors: int
    ref_sc: int
    hyp_sc: int
    approximate: bool = False

    @property
    def sc_correct(self) -> bool:
        return self.ref_sc == self.hyp_sc


def _units(segment_words: list[str], unit: str) -> list[str]:
    return segment_words if unit == "word" else list(" ".join(segment_words))


def _arrangement_cost(reference, segments, order, unit: str) -> int:
    joined = [word for index in order for word in segments[index]]
    return editdistance.eval(reference, _units(joined, unit))


def _greedy_order(reference, segments, unit: str) -> tuple[int, ...]:
    """Insert segments one by one at their cheapest position."""
    order: list[int] = []
    for index in range(len(segments)):
        best = None
        for position in range(len(order) + 1):
            candidate = order[:position] + [index] + order[position:]
            cost = _arrangement_cost(reference, segments, candidate, unit)
            if best is None or cost < best[0]:
                best = (cost, candidate)
        order = best[1]
    return tuple(order)


def min_permutation_errors(
    ref_tokens: list[str], hyp_tokens: list[str], unit: str = "word"
) -> tuple[int, tuple[int, ...], bool]:
    """Minimum edit distance over orderings of the hypothesis <sc> segments.

    Returns (errors, best order, approximate). Exhaustive up to 8 segments, greedy
    best-insertion beyond that.
    """
    if unit not in UNITS:
        raise MetricError(f"unit must be one of {UNITS}, got {unit!r}")
    reference = words(ref_tokens) if unit == "word" else chars(ref_tokens)
    segments = split_segments(hyp_tokens)
    identity = tuple(range(len(segments)))

    if len(segments) <= MAX_EXHAUSTIVE_SEGMENTS:
        best_cost, best_order = None, identity
        # permutations() yields the identity first, so ties keep it
        for order in itertools.permutations(identity):
            cost = _arrangement_cost(reference, segments, order, unit)
            if best_cost is None or cost < best_cost:
                best_cost, best_order = cost, order
                if cost == 0:
                    break
        return best_cost, best_order, False

    logger.warning(
        "%d hypothesis segments; using greedy ordering (approximate)", len(segments)
    )
    greedy = _greedy_order(reference, segments, unit)
    greedy_cost = _arrangement_cost(reference, segments, greedy, unit)
    identity_cost = _arrangement_cost(reference, segments, identity, unit)
    if identity_cost <= greedy_cost:
        return identity_cost, identity, True
    return greedy_cost, greedy, True


def score_pair(pair: ScoredPair) -> PairErrors:
    ref_tokens = normalize(pair.reference)
    hyp_tokens = normalize(pair.hypothesis)
    cp_words, _, approx_words = min_permutation_errors(ref_tokens, hyp_tokens, "word")
    cp_chars, _, approx_chars = min_permutation_errors(ref_tokens, hyp_tokens, "char")
    return PairErrors(
        id=pair.id,
        ref_words=len(words(ref_tokens)),
        word_errors=edit_distance(words(ref_tokens), words(hyp_tokens)).total,
        ref_chars=len(chars(ref_tokens)),
        char_errors=editdistance.eval(chars(ref_tokens), chars(hyp_tokens)),
        cp_word_errors=cp_words,
        cp_char_errors=cp_chars,
        ref_sc=sc_count(ref_tokens),
        hyp_sc=sc_count(hyp_tokens),
        approximate=approx_words or approx_chars,
    )


def _pooled(errors: int, length: int, label: str) -> float:
    if length <= 0:
        raise MetricError(f"{label}: total reference length is zero")
    return 100.0 * errors / length


def _plain_scores(pairs, unit: str) -> tuple[int, int]:
    errors = length = 0
    for pair in pairs:
        ref_tokens, hyp_tokens = normalize(pair.reference), normalize(pair.hypothesis)
        split = words if unit == "word" else chars
        ref, hyp = split(ref_tokens), split(hyp_tokens)
        errors += editdistance.eval(ref, hyp)
        length += len(ref)
    return errors, length


def wer(pairs) -> float:
    """100 * sum of word edits / sum of reference words, <sc> removed."""
    return _pooled(*_plain_scores(pairs, "word"), "WER")


def cer(pairs) -> float:
    return _pooled(*_plain_scores(pairs, "char"), "CER")


def cp_error(pairs, unit: str = "word") -> float:
    errors = length = 0
    for pair in pairs:
        ref_tokens, hyp_tokens = normalize(pair.reference), normalize(pair.hypothesis)
        errors += min_permutation_errors(ref_tokens, hyp_tokens, unit)[0]
        length += len(words(ref_tokens) if unit == "word" else chars(ref_tokens))
    return _pooled(errors, length, f"cp{unit}")


def sc_accuracy(pairs) -> float:
    """Share of pairs whose hypothesis has as many <sc> tokens as the reference."""
    pairs = list(pairs)
    if not pairs:
        raise MetricError("speaker-change accuracy of an empty pair list")
    correct = sum(
        sc_count(normalize(p.reference)) == sc_count(normalize(p.hypothesis)) for p in pairs
    )
    return 100.0 * correct / len(pairs)


@dataclass(frozen=True)
class MetricReport:
    wer: float
    cer: float
    cpwer: float
    cpcer: float
    sc_acc: float
    pairs: tuple[PairErrors, ...]

    @property
    def approximate_pairs(self) -> int:
        return sum(p.approximate for p in self.pairs)

    def get_metric(self, name: str) -> float:
        if name not in METRIC_NAMES:
            raise MetricError(f"unknown metric {name!r}; choose from {METRIC_NAMES}")
        return getattr(self, name)

    def to_dict(self, metrics=METRIC_NAMES) -> dict:
        data = {name: self.get_metric(name) for name in metrics}
        data["pairs"] = len(self.pairs)
        data["approximate_pairs"] = self.approximate_pairs
        return data

    def to_csv(self) -> str:
        buffer = io.StringIO()
        fields = list(PairErrors.__dataclass_fields__)
        writer = csv.DictWriter(buffer, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for pair in self.pairs:
            writer.writerow(asdict(pair))
        return buffer.getvalue()


def report_from_errors(pair_errors) -> MetricReport:
    pair_errors = tuple(pair_errors)
    if not pair_errors:
        raise MetricError("no pairs to score")
    ref_words = sum(p.ref_words for p in pair_errors)
    ref_chars = sum(p.ref_chars for p in pair_errors)
    return MetricReport(
        wer=_pooled(sum(p.word_errors for p in pair_errors), ref_words, "WER"),
        cer=_pooled(sum(p.char_errors for p in pair_errors), ref_chars, "CER"),
        cpwer=_pooled(sum(p.cp_word_errors for p in pair_errors), ref_words, "cpWER"),
        cpcer=_pooled(sum(p.cp_char_errors for p in pair_errors), ref_chars, "cpCER"),
        sc_acc=100.0 * sum(p.sc_correct for p in pair_errors) / len(pair_errors),
        pairs=pair_errors,
    )


def score_pairs(pairs) -> MetricReport:
    """Score every pair once and pool all metrics."""
    return report_from_errors(score_pair(pair) for pair in pairs)


def relative_gain(base: MetricReport, other: MetricReport, metrics=METRIC_NAMES) -> dict:
    """Relative change of other against base in percent of base.

    Error metrics count a reduction as positive gain; sc_acc counts an increase.
    """
    gains = {}
    for name in metrics:
        before, after = base.get_metric(name), other.get_metric(name)
        if before == 0:
            gains[name] = None
        elif name == "sc_acc":
            gains[name] = 100.0 * (after - before) / before
        else:
            gains[name] = 100.0 * (before - after) / before
    return gains
