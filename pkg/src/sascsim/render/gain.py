import numpy as np


def adjust_gain(samples, factor: float) -> np.ndarray:
    """Scale samples by a constant factor."""
    return np.asarray(samples, dtype=float) * factor


def match_peak(samples, target_peak: float) -> np.ndarray:
    """Rescale so that max |sample| equals target_peak; silence stays silent."""
    samples = np.asarray(samples, dtype=float)
    peak = float(np.max(np.abs(samples))) if samples.size else 0.0
    if peak == 0:
        return samples.copy()
    return adjust_gain(samples, target_peak / peak)


def rescale_on_overflow(samples, peak_target: float = 0.99) -> tuple[np.ndarray, float]:
    """Global rescale to peak_target when any |sample| exceeds 1; returns the factor used."""
    samples = np.asarray(samples, dtype=float)
    peak = float(np.max(np.abs(samples))) if samples.size else 0.0
    if peak <= 1.0:
        return samples, 1.0
    factor = peak_target / peak
    return adjust_gain(samples, factor), factor
