"""Nadaraya-Watson conditional density of residuals given the next utterance duration."""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from sascsim.density.bandwidth import DEFAULT_EPS_D, DEFAULT_EPS_R, scott_bandwidths
from sascsim.density.kde import EVAL_BLOCK, Kde1D
from sascsim.errors import ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ConditionalKde:
    """Pairs (r_i, d_i) with Gaussian kernels of widths h_r and h_d."""

    residuals: np.ndarray
    durations: np.ndarray
    h_r: float
    h_d: float
    eps_r: float = DEFAULT_EPS_R
    eps_d: float = DEFAULT_EPS_D

    def __post_init__(self):
        residuals = np.array(self.residuals, dtype=float).ravel()
        durations = np.array(self.durations, dtype=float).ravel()
        if residuals.size == 0:
            raise ValidationError("conditional KDE needs at least one pair")
        if residuals.shape != durations.shape:
            raise ValidationError(
                f"{residuals.size} residuals but {durations.size} durations"
            )
        if not (np.all(np.isfinite(residuals)) and np.all(np.isfinite(durations))):
            raise ValidationError("conditional KDE pairs must be finite")
        if not (self.h_r > 0 and self.h_d > 0):
            raise ValidationError(f"bandwidths must be positive: {self.h_r}, {self.h_d}")
        residuals.setflags(write=False)
        durations.setflags(write=False)
        object.__setattr__(self, "residuals", residuals)
        object.__setattr__(self, "durations", durations)
        object.__setattr__(self, "h_r", max(float(self.h_r), self.eps_r))
        object.__setattr__(self, "h_d", max(float(self.h_d), self.eps_d))

    @classmethod
    def fit(
        cls, residuals, durations, eps_r: float = DEFAULT_EPS_R, eps_d: float = DEFAULT_EPS_D
    ) -> "ConditionalKde":
        """Scott's rule bandwidths with floors."""
        h_r, h_d = scott_bandwidths(residuals, durations, eps_r, eps_d)
        return cls(residuals, durations, h_r, h_d, eps_r, eps_d)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConditionalKde):
            return NotImplemented
        return (
            self.h_r == other.h_r
            and self.h_d == other.h_d
            and np.array_equal(self.residuals, other.residuals)
            and np.array_equal(self.durations, other.durations)
        )

    def __len__(self) -> int:
        return self.residuals.size

    def weights(self, d_star: float) -> np.ndarray:
        """Normalised duration weights; uniform when every kernel underflows."""
        raw = norm.pdf((d_star - self.durations) / self.h_d)
        total = raw.sum()
        if total <= 0 or not np.isfinite(total):
            logger.warning(
                "duration weights underflow at d*=%.3f s; using unconditional residuals",
                d_star,
            )
            return np.full(self.durations.size, 1.0 / self.durations.size)
        return raw / total

    def density(self, r, d_star: float):
        w = self.weights(d_star)
        points = np.asarray(r, dtype=float)
        flat = points.ravel()
        out = np.empty(flat.size)
        step = max(EVAL_BLOCK // self.residuals.size, 1)
        for begin in range(0, flat.size, step):
            z = (flat[begin : begin + step, None] - self.residuals[None, :]) / self.h_r
            out[begin : begin + step] = norm.pdf(z) @ w
        out = out.reshape(points.shape) / self.h_r
        return out if out.ndim else float(out)

    def cdf(self, r, d_star: float):
        w = self.weights(d_star)
        points = np.asarray(r, dtype=float)
        flat = points.ravel()
        out = np.empty(flat.size)
        step = max(EVAL_BLOCK // self.residuals.size, 1)
        for begin in range(0, flat.size, step):
            z = (flat[begin : begin + step, None] - self.residuals[None, :]) / self.h_r
            out[begin : begin + step] = norm.cdf(z) @ w
        out = out.reshape(points.shape)
        return out if out.ndim else float(out)

    def sample(self, d_star: float, rng: np.random.Generator, size: int | None = None):
        """Draw index i with probability w_i(d*), then r_i + h_r * N(0, 1)."""
        n = 1 if size is None else size
        index = rng.choice(self.residuals.size, size=n, p=self.weights(d_star))
        draws = self.residuals[index] + self.h_r * rng.standard_normal(n)
        return float(draws[0]) if size is None else draws

    def sample_many(self, d_stars, rng: np.random.Generator) -> np.ndarray:
        """One draw per entry of d_stars, each with its own duration weights."""
        d_stars = np.asarray(d_stars, dtype=float).ravel()
        out = np.empty(d_stars.size)
        step = max(EVAL_BLOCK // self.residuals.size, 1)
        for begin in range(0, d_stars.size, step):
            block = d_stars[begin : begin + step]
            raw = norm.pdf((block[:, None] - self.durations[None, :]) / self.h_d)
            totals = raw.sum(axis=1)
            dead = ~(totals > 0)
            if np.any(dead):
                logger.warning(
                    "duration weights underflow for %d draws; using unconditional residuals",
                    int(dead.sum()),
                )
                raw[dead] = 1.0
                totals[dead] = raw.shape[1]
            cumulative = np.cumsum(raw / totals[:, None], axis=1)
            u = rng.random(block.size)
            index = np.minimum(
                (cumulative < u[:, None]).sum(axis=1), self.residuals.size - 1
            )
            out[begin : begin + step] = self.residuals[index]
        return out + self.h_r * rng.standard_normal(d_stars.size)

    def marginal(self) -> Kde1D:
        """Unconditional KDE over the residuals with the same h_r."""
        return Kde1D(self.residuals, self.h_r)

    def to_dict(self) -> dict:
        return {
            "pairs": [[r, d] for r, d in zip(self.residuals.tolist(), self.durations.tolist())],
            "h_r": self.h_r,
            "h_d": self.h_d,
        }

    @classmethod
    def from_dict(cls, data: dict, eps_r: float = 0.0, eps_d: float = 0.0) -> "ConditionalKde":
        pairs = np.array(data["pairs"], dtype=float).reshape(-1, 2)
        return cls(pairs[:, 0], pairs[:, 1], data["h_r"], data["h_d"], eps_r, eps_d)
