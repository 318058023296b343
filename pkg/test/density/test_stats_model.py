import numpy as np
import pytest

from sascsim.annotations.segment import ConversationAnnotation, SegmentAnnotation
from sascsim.density.conditional_kde import ConditionalKde
from sascsim.density.kde import Kde1D
from sascsim.density.stats_model import (
    ConditionalResidualModel,
    DensityParams,
    ModelMode,
    StatsModel,
    expected_overlap,
    expected_overlap_rate,
    fit_stats_model,
    posterior_gap_samples,
    same_transition_share,
)
from sascsim.density.yeo_johnson import YeoJohnson
from sascsim.errors import (
    ConfigurationError,
    EstimationError,
    SchemaError,
    ValidationError,
)
from sascsim.stats.gaps import TransitionType
from sascsim.turns.transition_matrix import TransitionMatrix

SAME, DIFF = TransitionType.SAME, TransitionType.DIFF


def patterned_conversation(cid, roles, same_gap=0.5, diff_gap=0.25, duration=2.0):
    """Speakers follow the role string; gaps are exact binary fractions."""
    segments = []
    start = 0.0
    for k, role in enumerate(roles):
        if k:
            gap = same_gap if role == roles[k - 1] else diff_gap
            start = segments[-1].end + gap
        segments.append(SegmentAnnotation(cid, f"{cid}-{role}", start, start + duration))
    return ConversationAnnotation.from_segments(cid, segments)


def hand_model(residual_samples=(-1.0, -1.0, 1.0, 1.0)):
    mean_kde = Kde1D([0.0, 0.1], 0.01)
    residual = Kde1D(list(residual_samples), 0.01)
    return StatsModel(
        ModelMode.SASC,
        {SAME: mean_kde, DIFF: mean_kde},
        {SAME: residual, DIFF: residual},
        TransitionMatrix.uniform(),
    )


@pytest.fixture
def corpus(synthetic_corpus):
    return synthetic_corpus(n_conversations=20, seed=21)


@pytest.fixture
def sasc_model(corpus):
    return fit_stats_model(corpus, ModelMode.SASC, source="synthetic")


@pytest.fixture
def csasc_model(corpus):
    return fit_stats_model(corpus, ModelMode.CSASC, source="synthetic")


def test_sasc_components(sasc_model):
    for transition_type in TransitionType:
        assert isinstance(sasc_model.residual(transition_type), Kde1D)
        assert sasc_model.residual(transition_type).bandwidth == 0.1
        assert len(sasc_model.mean_kde(transition_type)) >= 2


def test_meta(sasc_model):
    meta = sasc_model.meta
    assert meta["source"] == "synthetic"
    assert meta["conversations"] == 20
    assert meta["observations"] == 20 * 29
    assert meta["params"]["alpha"] == 0.1
    assert set(meta["counts"]) == {"same", "diff"}


def test_csasc_components(csasc_model):
    for transition_type in TransitionType:
        residual = csasc_model.residual(transition_type)
        assert -5 <= residual.transform.lmbda <= 5
        assert residual.ckde.h_r >= 0.01
        assert residual.ckde.h_d >= 0.05


@pytest.mark.parametrize("name", ["sasc_model", "csasc_model"])
def test_json_round_trip(name, request):
    model = request.getfixturevalue(name)
    restored = StatsModel.from_json(model.to_json())
    assert restored == model
    assert restored.to_json() == model.to_json()


def test_serialised_keys(sasc_model):
    data = sasc_model.to_dict()
    assert data["mode"] == "sasc"
    assert {"mean_same", "mean_diff", "residual_same", "residual_diff", "transition"} <= set(data)


def test_version_mismatch(sasc_model):
    data = sasc_model.to_dict()
    data["version"] = "0"
    with pytest.raises(SchemaError):
        StatsModel.from_dict(data)


def test_missing_component(sasc_model):
    data = sasc_model.to_dict()
    del data["residual_diff"]
    with pytest.raises(SchemaError) as excinfo:
        StatsModel.from_dict(data)
    assert "residual_diff" in str(excinfo.value)


def test_invalid_json():
    with pytest.raises(SchemaError):
        StatsModel.from_json("{not json")


def test_mode_mismatch_is_rejected(sasc_model, csasc_model):
    with pytest.raises(ValidationError):
        StatsModel(
            ModelMode.CSASC,
            sasc_model.mean_kdes,
            sasc_model.residual_models,
            sasc_model.transition,
        )
    assert csasc_model.mode is ModelMode.CSASC


def test_too_few_speakers_names_the_type():
    corpus = [patterned_conversation(f"c{i}", "ABABABABAB") for i in range(3)]
    with pytest.raises(EstimationError) as excinfo:
        fit_stats_model(corpus)
    assert "same" in str(excinfo.value)
    assert "diff" not in str(excinfo.value)


def test_constant_gaps_collapse_to_floors():
    corpus = [patterned_conversation(f"c{i}", "AABBAABBAABBAABBAA") for i in range(2)]
    model = fit_stats_model(corpus, ModelMode.CSASC)
    residual = model.residual(SAME)
    assert residual.transform.lmbda == 1.0
    assert residual.ckde.h_r == 0.01
    rng = np.random.default_rng(22)
    draws = np.array([model.sample_residual(SAME, rng, d_star=2.0) for _ in range(2000)])
    assert abs(draws.mean()) < 0.002
    assert draws.std() == pytest.approx(0.01, rel=0.1)
    assert model.sample_mean(DIFF, rng) == pytest.approx(0.25, abs=0.1)


def test_invalid_params():
    with pytest.raises(ConfigurationError):
        DensityParams(alpha=0.0)
    with pytest.raises(ConfigurationError):
        DensityParams(speaker_scope="room")


def test_given_transition_is_kept(corpus):
    matrix = TransitionMatrix(("A", "B"), np.array([[0.5, 0.5], [0.2, 0.8]]))
    assert fit_stats_model(corpus, transition=matrix).transition == matrix


def test_p_overlap_symmetric_residuals():
    model = hand_model()
    assert model.p_overlap(SAME, 0.0) == pytest.approx(0.5)
    assert model.p_overlap(SAME, 1e6) == pytest.approx(0.0, abs=1e-12)


def test_csasc_needs_duration(csasc_model):
    with pytest.raises(ValidationError):
        csasc_model.p_overlap(DIFF, 0.2)
    with pytest.raises(ValidationError):
        csasc_model.sample_residual(DIFF, np.random.default_rng(0))
    assert 0.0 < csasc_model.p_overlap(DIFF, 0.2, d_star=4.0) < 1.0


def test_csasc_residual_density_integrates_to_one(csasc_model):
    residual = csasc_model.residual(DIFF)
    x = np.linspace(-4, 4, 20_001)
    assert np.trapezoid(residual.density(x, 4.0), x) == pytest.approx(1.0, abs=1e-2)


def test_analytic_overlap_matches_simulation(sasc_model):
    draws = posterior_gap_samples(sasc_model, DIFF, 200_000, np.random.default_rng(23))
    assert np.mean(draws < 0) == pytest.approx(expected_overlap(sasc_model, DIFF), abs=0.01)


def test_csasc_overlap_matches_simulation(csasc_model):
    draws = posterior_gap_samples(csasc_model, SAME, 100_000, np.random.default_rng(24))
    estimate = expected_overlap(csasc_model, SAME, n_draws=4000)
    assert np.mean(draws < 0) == pytest.approx(estimate, abs=0.03)


def test_overlap_rate_is_weighted(sasc_model):
    share = same_transition_share(sasc_model.transition)
    rate = expected_overlap_rate(sasc_model)
    low, high = sorted(
        (expected_overlap(sasc_model, SAME), expected_overlap(sasc_model, DIFF))
    )
    assert low <= rate <= high
    assert 0.3 < share < 0.45


def test_vectorised_draws_reject_outside_transform_range():
    # lambda = -1 maps onto (-inf, 1); a good share of kernel mass lies above 1
    model = ConditionalResidualModel(
        YeoJohnson(-1.0), ConditionalKde([0.85, 0.95], [2.0, 4.0], 0.1, 1.0)
    )
    many = model.sample_many(np.full(4000, 3.0), np.random.default_rng(31))
    rng = np.random.default_rng(32)
    single = np.array([model.sample(3.0, rng) for _ in range(4000)])
    assert np.all(np.isfinite(many))
    assert many.max() < 1e6
    assert np.median(many) == pytest.approx(np.median(single), rel=0.2)
