import numpy as np
from scipy import stats

from sascsim.density.stats_model import (
    ModelMode,
    expected_overlap_rate,
    fit_stats_model,
    posterior_gap_samples,
)
from sascsim.simulate.config import SimulationConfig
from sascsim.simulate.corpus import simulate_corpus
from sascsim.stats.gaps import TransitionType, extract_corpus_gaps, overlap_ratio


def test_simulated_gaps_follow_the_model(synthetic_corpus, make_pool):
    model = fit_stats_model(synthetic_corpus(n_conversations=40, seed=60), ModelMode.SASC)
    rng = np.random.default_rng(61)
    manifest = make_pool(
        {f"sim{i:03d}": list(np.round(rng.uniform(2, 6, size=20), 3)) for i in range(400)}
    )
    corpus = simulate_corpus(manifest, model, SimulationConfig(seed=62))
    assert len(corpus.plans) == 200

    observations = extract_corpus_gaps(plan.to_annotation() for plan in corpus.plans)
    assert abs(overlap_ratio(observations) - expected_overlap_rate(model)) < 0.05

    generated = [o.delta for o in observations if o.transition is TransitionType.DIFF]
    direct = posterior_gap_samples(model, TransitionType.DIFF, 100_000, rng)
    assert stats.ks_2samp(generated, direct).statistic < 0.05
