"""Density curves of a fitted model, as emitted by inspect-stats."""

import csv
import io
from dataclasses import dataclass

import numpy as np

from sascsim.density.bandwidth import silverman_bandwidth
from sascsim.density.kde import Kde1D
from sascsim.density.stats_model import ModelMode, StatsModel, posterior_gap_samples
from sascsim.errors import ValidationError
from sascsim.stats.gaps import TransitionType

DEFAULT_POINTS = 1001
SUPPORT_BANDWIDTHS = 8.0


@dataclass(frozen=True, eq=False)
class DensityCurve:
    name: str
    x: np.ndarray
    density: np.ndarray

    def integral(self) -> float:
        return float(np.trapezoid(self.density, self.x))

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["x", "density"])
        for x, y in zip(self.x.tolist(), self.density.tolist()):
            writer.writerow([repr(x), repr(y)])
        return buffer.getvalue()


@dataclass(frozen=True)
class Grid:
    """Evaluation grid; unset bounds are derived from each component's support."""

    low: float | None = None
    high: float | None = None
    points: int = DEFAULT_POINTS

    def __post_init__(self):
        if self.points < 2:
            raise ValidationError(f"grid needs at least 2 points, got {self.points}")
        if self.low is not None and self.high is not None and not self.low < self.high:
            raise ValidationError(f"grid bounds must increase: {self.low}, {self.high}")

    @classmethod
    def parse(cls, text: str | None) -> "Grid":
        """'low:high:points', 'low:high' or None."""
        if not text:
            return cls()
        parts = text.split(":")
        if len(parts) not in (2, 3):
            raise ValidationError(f"grid must be low:high[:points], got {text!r}")
        try:
            low, high = float(parts[0]), float(parts[1])
            points = int(parts[2]) if len(parts) == 3 else DEFAULT_POINTS
        except ValueError as exc:
            raise ValidationError(f"grid {text!r}: {exc}") from exc
        return cls(low, high, points)

    def resolve(self, support: tuple[float, float]) -> np.ndarray:
        low = support[0] if self.low is None else self.low
        high = support[1] if self.high is None else self.high
        return np.linspace(low, high, self.points)


def kde_curve(name: str, kde: Kde1D, grid: Grid) -> DensityCurve:
    x = grid.resolve(kde.support(SUPPORT_BANDWIDTHS))
    return DensityCurve(name, x, np.asarray(kde.density(x)))


def conditional_curve(
    name: str, residual, d_star: float, grid: Grid
) -> DensityCurve:
    """Curve of V(r | d*) in original residual units."""
    ckde = residual.ckde
    low, high = residual.transform.get_range()
    z_low = float(ckde.residuals.min() - SUPPORT_BANDWIDTHS * ckde.h_r)
    z_high = float(ckde.residuals.max() + SUPPORT_BANDWIDTHS * ckde.h_r)
    # stay strictly inside the inverse transform's domain
    z_low = max(z_low, low + 1e-9 * max(1.0, abs(low))) if np.isfinite(low) else z_low
    z_high = min(z_high, high - 1e-9 * max(1.0, abs(high))) if np.isfinite(high) else z_high
    support = (float(residual.transform.inverse(z_low)), float(residual.transform.inverse(z_high)))
    x = grid.resolve(support)
    return DensityCurve(name, x, np.asarray(residual.density(x, d_star)))


def model_curves(
    model: StatsModel, grid: Grid | None = None, d_stars=(2.0, 5.0, 8.0)
) -> list[DensityCurve]:
    """Mean-gap KDEs plus residual curves (conditional ones per d* for C-SASC)."""
    grid = grid or Grid()
    curves = []
    for transition_type in TransitionType:
        suffix = transition_type.value
        curves.append(kde_curve(f"mean_{suffix}", model.mean_kde(transition_type), grid))
        residual = model.residual(transition_type)
        if model.mode is ModelMode.SASC:
            curves.append(kde_curve(f"residual_{suffix}", residual, grid))
        else:
            for d_star in d_stars:
                curves.append(
                    conditional_curve(
                        f"residual_{suffix}_d{d_star:g}", residual, d_star, grid
                    )
                )
    return curves


def posterior_curves(
    model: StatsModel,
    n_draws: int,
    rng: np.random.Generator,
    grid: Grid | None = None,
    durations=None,
) -> list[DensityCurve]:
    """KDE curves over simulated complete gaps mu + residual."""
    grid = grid or Grid()
    curves = []
    for transition_type in TransitionType:
        draws = posterior_gap_samples(model, transition_type, n_draws, rng, durations)
        kde = Kde1D(draws, silverman_bandwidth(draws))
        curves.append(kde_curve(f"posterior_{transition_type.value}", kde, grid))
    return curves
