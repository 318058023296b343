"""Yeo-Johnson power transform used to symmetrise residuals before density fitting."""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import optimize, stats

from sascsim.errors import DomainError, EstimationError

logger = logging.getLogger(__name__)

LAMBDA_MIN = -5.0
LAMBDA_MAX = 5.0
LAMBDA_STEP = 0.01


def yj_forward(x, lmbda: float):
    """Four-branch Yeo-Johnson transform, vectorised over x."""
    values = np.asarray(x, dtype=float)
    out = np.empty_like(values)
    positive = values >= 0
    negative = ~positive

    if lmbda == 0:
        out[positive] = np.log1p(values[positive])
    else:
        out[positive] = np.expm1(lmbda * np.log1p(values[positive])) / lmbda

    if lmbda == 2:
        out[negative] = -np.log1p(-values[negative])
    else:
        out[negative] = (
            -np.expm1((2 - lmbda) * np.log1p(-values[negative])) / (2 - lmbda)
        )
    return out if out.ndim else float(out)


def yj_range(lmbda: float) -> tuple[float, float]:
    """Open interval of values the forward transform can produce."""
    low = -1.0 / (lmbda - 2) if lmbda > 2 else -np.inf
    high = -1.0 / lmbda if lmbda < 0 else np.inf
    return low, high


def yj_inverse(y, lmbda: float):
    """Exact branch-wise inverse; raises DomainError outside yj_range(lmbda)."""
    values = np.asarray(y, dtype=float)
    low, high = yj_range(lmbda)
    if np.any(~np.isfinite(values)) or np.any(values <= low) or np.any(values >= high):
        raise DomainError(
            f"Yeo-Johnson inverse with lambda={lmbda} needs values in ({low}, {high})"
        )

    out = np.empty_like(values)
    positive = values >= 0
    negative = ~positive

    if lmbda == 0:
        out[positive] = np.expm1(values[positive])
    else:
        out[positive] = np.expm1(np.log1p(lmbda * values[positive]) / lmbda)

    if lmbda == 2:
        out[negative] = -np.expm1(-values[negative])
    else:
        out[negative] = -np.expm1(
            np.log1p(-(2 - lmbda) * values[negative]) / (2 - lmbda)
        )
    return out if out.ndim else float(out)


def yj_log_jacobian(x, lmbda: float):
    """log d/dx yj_forward(x); (lambda - 1) * sign(x) * log1p(|x|)."""
    values = np.asarray(x, dtype=float)
    return (lmbda - 1) * np.sign(values) * np.log1p(np.abs(values))


def _log_likelihood(lmbda: float, values: np.ndarray) -> float:
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        llf = float(stats.yeojohnson_llf(lmbda, values))
    return llf if np.isfinite(llf) else -np.inf


def yj_fit_lambda(samples) -> float:
    """Profile maximum likelihood lambda: grid over [-5, 5] then bounded refinement."""
    values = np.asarray(samples, dtype=float)
    if values.size < 3:
        raise EstimationError(
            f"Yeo-Johnson fit needs at least 3 samples, got {values.size}"
        )
    if np.all(values == values[0]):
        raise EstimationError("Yeo-Johnson fit on constant samples")

    n_steps = int(round((LAMBDA_MAX - LAMBDA_MIN) / LAMBDA_STEP))
    grid = np.linspace(LAMBDA_MIN, LAMBDA_MAX, n_steps + 1)
    scores = np.array([_log_likelihood(lmbda, values) for lmbda in grid])
    if not np.any(np.isfinite(scores)):
        raise EstimationError("Yeo-Johnson likelihood is not finite on the lambda grid")
    best = int(np.argmax(scores))

    low = grid[max(best - 1, 0)]
    high = grid[min(best + 1, grid.size - 1)]
    result = optimize.minimize_scalar(
        lambda lmbda: -_log_likelihood(lmbda, values),
        bounds=(low, high),
        method="bounded",
        options={"xatol": 1e-6},
    )
    lmbda = float(result.x) if result.success else float(grid[best])
    if -_log_likelihood(lmbda, values) > -scores[best]:
        lmbda = float(grid[best])
    logger.debug("Yeo-Johnson lambda=%.4f from %d samples", lmbda, values.size)
    return lmbda


@dataclass(frozen=True)
class YeoJohnson:
    """A fitted transform; forward/inverse bound to one lambda."""

    lmbda: float

    @classmethod
    def fit(cls, samples) -> "YeoJohnson":
        return cls(yj_fit_lambda(samples))

    def forward(self, x):
        return yj_forward(x, self.lmbda)

    def inverse(self, y):
        return yj_inverse(y, self.lmbda)

    def get_range(self) -> tuple[float, float]:
        return yj_range(self.lmbda)

    def log_jacobian(self, x):
        return yj_log_jacobian(x, self.lmbda)
