from dataclasses import dataclass
from enum import Enum

from sascsim.annotations.manifest import DEFAULT_D_MAX, DEFAULT_D_MIN
from sascsim.density.stats_model import ModelMode
from sascsim.errors import ConfigurationError

MAX_SEED = 2**64 - 1
PAIRS_LIMIT_RANGE = (1, 5)


class SimulationMode(Enum):
    SASC = "sasc"
    CSASC = "csasc"
    NAIVE = "naive"  # fixed pauses between turns
    NOSIM = "nosim"  # every utterance on its own, no concatenation

    def get_model_mode(self) -> ModelMode | None:
        """Statistics model mode this simulation mode requires, if any."""
        return {
            SimulationMode.SASC: ModelMode.SASC,
            SimulationMode.CSASC: ModelMode.CSASC,
        }.get(self)


@dataclass(frozen=True)
class SimulationConfig:
    """Parameters of one simulated corpus."""

    mode: SimulationMode = SimulationMode.SASC
    pairs_limit: int = 1
    seed: int = 0
    d_min: float = DEFAULT_D_MIN
    d_max: float = DEFAULT_D_MAX
    fixed_gap: float = 0.25
    clamp_min_start_delta: float = 0.01
    max_pair_retries: int = 100
    workers: int = 1

    def __post_init__(self):
        if not isinstance(self.mode, SimulationMode):
            raise ConfigurationError(
                f"Expected SimulationMode for mode, got {type(self.mode).__name__}"
            )
        low, high = PAIRS_LIMIT_RANGE
        if not low <= self.pairs_limit <= high:
            raise ConfigurationError(
                f"pairs_limit must be in [{low}, {high}], got {self.pairs_limit}"
            )
        if not 0 <= self.seed <= MAX_SEED:
            raise ConfigurationError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if not 0 < self.d_min < self.d_max:
            raise ConfigurationError(
                f"need 0 < d_min < d_max, got [{self.d_min}, {self.d_max}]"
            )
        if not self.fixed_gap > 0:
            raise ConfigurationError(f"fixed_gap must be positive, got {self.fixed_gap}")
        if not self.clamp_min_start_delta > 0:
            raise ConfigurationError(
                f"clamp_min_start_delta must be positive, got {self.clamp_min_start_delta}"
            )
        if self.max_pair_retries < 0:
            raise ConfigurationError("max_pair_retries must be >= 0")
        if self.workers < 1:
            raise ConfigurationError(f"workers must be >= 1, got {self.workers}")
