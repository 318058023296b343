import logging

import numpy as np
import pytest
from scipy import stats

from sascsim.density.conditional_kde import ConditionalKde
from sascsim.density.kde import Kde1D
from sascsim.errors import ValidationError


@pytest.fixture
def sloped():
    """Residuals that grow by 0.1 per second of following duration."""
    rng = np.random.default_rng(11)
    durations = rng.uniform(1, 10, size=2000)
    residuals = 0.1 * durations + rng.normal(0, 0.05, size=durations.size)
    return ConditionalKde.fit(residuals, durations)


def test_floors_apply_at_construction():
    ckde = ConditionalKde([0.0, 1.0], [1.0, 2.0], 1e-5, 1e-5, eps_r=0.01, eps_d=0.05)
    assert (ckde.h_r, ckde.h_d) == (0.01, 0.05)


def test_rejects_mismatched_pairs():
    with pytest.raises(ValidationError):
        ConditionalKde([0.0, 1.0], [1.0], 0.1, 0.1)


@pytest.mark.parametrize("d_star", [0.5, 3.0, 40.0])
def test_single_pair_is_one_gaussian(d_star):
    ckde = ConditionalKde([0.5], [3.0], 0.2, 0.3)
    x = np.linspace(-1, 2, 7)
    assert np.allclose(ckde.density(x, d_star), stats.norm.pdf(x, 0.5, 0.2))


def test_far_pair_has_no_weight():
    ckde = ConditionalKde([0.0, 1.0], [1.0, 10.0], 0.2, 0.5)
    assert ckde.weights(1.0)[1] < 1e-60
    x = np.linspace(-1, 2, 31)
    assert np.allclose(ckde.density(x, 1.0), stats.norm.pdf(x, 0.0, 0.2))


def test_wide_duration_bandwidth_gives_marginal(sloped):
    wide = ConditionalKde(sloped.residuals, sloped.durations, sloped.h_r, 1e6)
    x = np.linspace(-0.5, 1.5, 401)
    marginal = Kde1D(sloped.residuals, sloped.h_r).density(x)
    for d_star in (1.0, 5.0, 9.0):
        assert np.max(np.abs(wide.density(x, d_star) - marginal)) < 1e-6


def test_density_integrates_to_one(sloped):
    low = sloped.residuals.min() - 10 * sloped.h_r
    high = sloped.residuals.max() + 10 * sloped.h_r
    x = np.linspace(low, high, 10_000)
    for d_star in np.random.default_rng(12).uniform(1, 10, size=5):
        assert np.trapezoid(sloped.density(x, d_star), x) == pytest.approx(1.0, abs=1e-3)


def test_cdf_ends(sloped):
    assert sloped.cdf(-10.0, 4.0) == pytest.approx(0.0, abs=1e-12)
    assert sloped.cdf(10.0, 4.0) == pytest.approx(1.0, abs=1e-12)


def test_single_pair_sample_mean():
    ckde = ConditionalKde([0.5], [3.0], 0.2, 0.3)
    draws = ckde.sample(7.0, np.random.default_rng(13), 100_000)
    assert draws.mean() == pytest.approx(0.5, abs=4 * 0.2 / np.sqrt(1e5))


def test_zero_weight_component_is_never_drawn():
    ckde = ConditionalKde([0.0, 100.0], [1.0, 100.0], 0.01, 0.5)
    draws = ckde.sample(1.0, np.random.default_rng(14), 10_000)
    assert np.all(np.abs(draws) < 1.0)


def test_draws_track_duration(sloped):
    rng = np.random.default_rng(15)
    short = sloped.sample(2.0, rng, 100_000).mean()
    long = sloped.sample(8.0, rng, 100_000).mean()
    expected = sloped.weights(8.0) @ sloped.residuals - sloped.weights(2.0) @ sloped.residuals
    assert long - short == pytest.approx(expected, abs=0.01)
    assert long - short == pytest.approx(0.6, abs=0.05)


def test_sample_many_matches_weighted_mean(sloped):
    draws = sloped.sample_many(np.full(100_000, 8.0), np.random.default_rng(16))
    expected = sloped.weights(8.0) @ sloped.residuals
    assert draws.mean() == pytest.approx(expected, abs=0.01)


def test_underflow_falls_back_to_uniform(caplog):
    ckde = ConditionalKde([0.0, 1.0], [1.0, 2.0], 0.1, 0.05)
    with caplog.at_level(logging.WARNING):
        weights = ckde.weights(1e6)
    assert np.allclose(weights, 0.5)
    assert "underflow" in caplog.text


def test_marginal_uses_residual_bandwidth(sloped):
    marginal = sloped.marginal()
    assert marginal.bandwidth == sloped.h_r
    assert len(marginal) == len(sloped)


def test_dict_round_trip(sloped):
    assert ConditionalKde.from_dict(sloped.to_dict()) == sloped
