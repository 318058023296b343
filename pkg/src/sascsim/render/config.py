from dataclasses import dataclass

from sascsim.errors import ConfigurationError

DEFAULT_SAMPLE_RATE = 16000


@dataclass(frozen=True)
class RenderConfig:
    sample_rate: int = DEFAULT_SAMPLE_RATE
    rir_fraction: float = 0.4
    window: float = 30.0  # chunk length in seconds
    peak_target: float = 0.99

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise ConfigurationError(f"sample_rate must be positive, got {self.sample_rate}")
        if not 0 <= self.rir_fraction <= 1:
            raise ConfigurationError(f"rir_fraction must be in [0, 1], got {self.rir_fraction}")
        if not self.window > 0:
            raise ConfigurationError(f"window must be positive, got {self.window}")
        if not 0 < self.peak_target <= 1:
            raise ConfigurationError(f"peak_target must be in (0, 1], got {self.peak_target}")
