import numpy as np
import pytest

from sascsim.density.curves import DensityCurve, Grid, model_curves, posterior_curves
from sascsim.density.plot import plot_curves, plot_histogram
from sascsim.density.stats_model import ModelMode, fit_stats_model
from sascsim.errors import ValidationError


@pytest.fixture
def corpus(synthetic_corpus):
    return synthetic_corpus(n_conversations=12, seed=31)


def test_grid_parse():
    assert Grid.parse("-1:2:11") == Grid(-1.0, 2.0, 11)
    assert Grid.parse("0:1").points == 1001
    assert Grid.parse(None) == Grid()


@pytest.mark.parametrize("text", ["1", "2:1", "a:b", "0:1:1"])
def test_grid_parse_rejects(text):
    with pytest.raises(ValidationError):
        Grid.parse(text)


def test_grid_fills_missing_bounds():
    assert np.array_equal(Grid(points=3).resolve((0.0, 1.0)), [0.0, 0.5, 1.0])


def test_sasc_curves_integrate_to_one(corpus):
    curves = model_curves(fit_stats_model(corpus, ModelMode.SASC))
    assert [c.name for c in curves] == [
        "mean_same",
        "residual_same",
        "mean_diff",
        "residual_diff",
    ]
    for curve in curves:
        assert curve.integral() == pytest.approx(1.0, abs=1e-2)


def test_csasc_curves_per_duration(corpus):
    curves = model_curves(fit_stats_model(corpus, ModelMode.CSASC), d_stars=(2.0, 5.5))
    names = [c.name for c in curves]
    assert "residual_same_d2" in names
    assert "residual_diff_d5.5" in names
    for curve in curves:
        assert curve.integral() == pytest.approx(1.0, abs=1e-2)


def test_posterior_curves(corpus):
    model = fit_stats_model(corpus, ModelMode.SASC)
    curves = posterior_curves(model, 5000, np.random.default_rng(0))
    assert [c.name for c in curves] == ["posterior_same", "posterior_diff"]


def test_curve_csv():
    curve = DensityCurve("flat", np.array([0.0, 1.0]), np.array([1.0, 1.0]))
    assert curve.to_csv() == "x,density\n0.0,1.0\n1.0,1.0\n"


def test_plots_are_written(tmp_path):
    curve = DensityCurve("flat", np.array([0.0, 1.0]), np.array([1.0, 1.0]))
    plot_curves([curve], tmp_path / "curves.png", title="flat")
    plot_histogram(np.array([0.0, 0.5, 1.0]), np.array([3, 1]), tmp_path / "hist.png")
    assert (tmp_path / "curves.png").stat().st_size > 0
    assert (tmp_path / "hist.png").stat().st_size > 0
