"""Gaussian kernel density estimates in one dimension."""

from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from sascsim.errors import ValidationError

# points x samples evaluated per block, bounds memory of the kernel matrix
EVAL_BLOCK = 2_000_000


def _read_only(values) -> np.ndarray:
    array = np.array(values, dtype=float).ravel()
    array.setflags(write=False)
    return array


def _blocked(x: np.ndarray, n_samples: int):
    step = max(EVAL_BLOCK // max(n_samples, 1), 1)
    for begin in range(0, x.size, step):
        yield slice(begin, begin + step)


@dataclass(frozen=True, eq=False)
class Kde1D:
    """Equal-weight mixture of N(x_i, h^2) over the stored samples."""

    samples: np.ndarray
    bandwidth: float

    def __post_init__(self):
        samples = _read_only(self.samples)
        if samples.size == 0:
            raise ValidationError("KDE needs at least one sample")
        if not np.all(np.isfinite(samples)):
            raise ValidationError("KDE samples must be finite")
        if not (np.isfinite(self.bandwidth) and self.bandwidth > 0):
            raise ValidationError(f"KDE bandwidth must be positive, got {self.bandwidth}")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "bandwidth", float(self.bandwidth))

    @classmethod
    def fit(cls, samples, bandwidth: float) -> "Kde1D":
        return cls(samples, bandwidth)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Kde1D):
            return NotImplemented
        return self.bandwidth == other.bandwidth and np.array_equal(
            self.samples, other.samples
        )

    def __len__(self) -> int:
        return self.samples.size

    def _evaluate(self, x, kernel):
        points = np.asarray(x, dtype=float)
        flat = points.ravel()
        out = np.empty(flat.size)
        for block in _blocked(flat, self.samples.size):
            z = (flat[block, None] - self.samples[None, :]) / self.bandwidth
            out[block] = kernel(z).mean(axis=1)
        out = out.reshape(points.shape)
        return out if out.ndim else float(out)

    def density(self, x):
        """(1 / (n h)) * sum phi((x - x_i) / h)."""
        values = self._evaluate(x, norm.pdf)
        return values / self.bandwidth

    def cdf(self, x):
        return self._evaluate(x, norm.cdf)

    def sample(self, rng: np.random.Generator, size: int | None = None):
        """Pick a stored sample uniformly, add h times a standard normal draw."""
        n = 1 if size is None else size
        index = rng.integers(self.samples.size, size=n)
        noise = rng.standard_normal(n)
        draws = self.samples[index] + self.bandwidth * noise
        return float(draws[0]) if size is None else draws

    def mean(self) -> float:
        return float(self.samples.mean())

    def support(self, n_bandwidths: float = 6.0) -> tuple[float, float]:
        margin = n_bandwidths * self.bandwidth
        return float(self.samples.min() - margin), float(self.samples.max() + margin)

    def to_dict(self) -> dict:
        return {"samples": self.samples.tolist(), "bandwidth": self.bandwidth}

    @classmethod
    def from_dict(cls, data: dict) -> "Kde1D":
        return cls(data["samples"], data["bandwidth"])

