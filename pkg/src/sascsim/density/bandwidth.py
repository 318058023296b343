import numpy as np

from sascsim.errors import EstimationError

DEFAULT_EPS_MU = 0.01
DEFAULT_EPS_R = 0.01
DEFAULT_EPS_D = 0.05


def silverman_bandwidth(samples, eps_mu: float = DEFAULT_EPS_MU) -> float:
    """0.9 * min(std, IQR / 1.34) * n^(-1/5); falls back to eps_mu on degenerate data."""
    values = np.asarray(samples, dtype=float)
    if values.size < 2:
        raise EstimationError(
            f"Silverman bandwidth needs at least 2 samples, got {values.size}"
        )
    sigma = float(np.std(values, ddof=1))
    q1, q3 = np.percentile(values, [25, 75], method="linear")
    spread = min(sigma, float(q3 - q1) / 1.34)
    bandwidth = 0.9 * spread * values.size ** (-1 / 5)
    return bandwidth if bandwidth > 0 else eps_mu


def scott_bandwidths(
    residuals, durations, eps_r: float = DEFAULT_EPS_R, eps_d: float = DEFAULT_EPS_D
) -> tuple[float, float]:
    """Scott's rule std * N^(-1/6) per dimension, lower-bounded by the floors."""
    r = np.asarray(residuals, dtype=float)
    d = np.asarray(durations, dtype=float)
    if r.shape != d.shape:
        raise EstimationError(f"residuals {r.shape} and durations {d.shape} differ")
    if r.size < 2:
        raise EstimationError(f"Scott bandwidths need at least 2 pairs, got {r.size}")
    factor = r.size ** (-1 / 6)
    h_r = max(float(np.std(r, ddof=1)) * factor, eps_r)
    h_d = max(float(np.std(d, ddof=1)) * factor, eps_d)
    return h_r, h_d
