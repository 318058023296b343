"""First-order Markov model of who speaks next."""

import logging
from dataclasses import dataclass

import numpy as np

from sascsim.errors import EstimationError, ValidationError

logger = logging.getLogger(__name__)

ROW_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Row-stochastic matrix over an ordered list of role labels."""

    states: tuple[str, ...]
    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float)
        n = len(self.states)
        if n == 0 or len(set(self.states)) != n:
            raise ValidationError(f"states must be distinct and non-empty: {self.states}")
        if probs.shape != (n, n):
            raise ValidationError(f"expected a {n}x{n} matrix, got shape {probs.shape}")
        if np.any(probs < 0) or np.any(probs > 1):
            raise ValidationError("transition probabilities must lie in [0, 1]")
        if not np.allclose(probs.sum(axis=1), 1.0, atol=ROW_TOLERANCE, rtol=0):
            raise ValidationError(f"rows must sum to 1, got {probs.sum(axis=1)}")
        probs.setflags(write=False)
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "probs", probs)
        object.__setattr__(
            self, "_cumulative", tuple(tuple(np.cumsum(row).tolist()) for row in probs)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TransitionMatrix):
            return NotImplemented
        return self.states == other.states and np.array_equal(self.probs, other.probs)

    def index_of(self, state: str) -> int:
        try:
            return self.states.index(state)
        except ValueError:
            raise ValidationError(f"unknown state {state!r}") from None

    def get_cumulative(self, state: str) -> tuple[float, ...]:
        """Running sum of the row of state."""
        return self._cumulative[self.index_of(state)]

    def get_prob(self, current: str, following: str) -> float:
        return float(self.probs[self.index_of(current), self.index_of(following)])

    def to_dict(self) -> dict:
        return {"states": list(self.states), "probs": self.probs.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "TransitionMatrix":
        return cls(tuple(data["states"]), np.array(data["probs"], dtype=float))

    @classmethod
    def uniform(cls, states=("A", "B")) -> "TransitionMatrix":
        n = len(states)
        return cls(tuple(states), np.full((n, n), 1.0 / n))


def estimate_transitions(sequences, states=("A", "B")) -> TransitionMatrix:
    """Row-normalised bigram counts pooled over all sequences, no smoothing."""
    sequences = [list(sequence) for sequence in sequences]
    if not sequences or all(len(sequence) == 0 for sequence in sequences):
        raise EstimationError("no role sequences to estimate transitions from")

    index = {state: i for i, state in enumerate(states)}
    counts = np.zeros((len(states), len(states)), dtype=float)
    for sequence in sequences:
        for current, following in zip(sequence, sequence[1:]):
            if current not in index or following not in index:
                raise ValidationError(
                    f"role outside {tuple(states)} in sequence: {current!r}->{following!r}"
                )
            counts[index[current], index[following]] += 1

    totals = counts.sum(axis=1)
    probs = np.empty_like(counts)
    for i, state in enumerate(states):
        if totals[i] == 0:
            logger.warning(
                "state %r has no outgoing transitions; using a uniform row", state
            )
            probs[i] = 1.0 / len(states)
        else:
            probs[i] = counts[i] / totals[i]
    return TransitionMatrix(tuple(states), probs)


def next_speaker(matrix: TransitionMatrix, current: str, rng: np.random.Generator) -> str:
    """Categorical draw from the current row by inverse CDF on one uniform."""
    row = matrix.probs[matrix.index_of(current)]
    u = rng.random()
    choice = len(row) - 1
    for k, bound in enumerate(matrix.get_cumulative(current)):
        if u < bound:
            choice = k
            break
    # cumulative sum may end a hair below 1.0; never return a zero-probability state
    while row[choice] == 0 and choice > 0:
        choice -= 1
    return matrix.states[choice]


def initial_speaker(matrix: TransitionMatrix, rng: np.random.Generator) -> str:
    """Uniform choice among the states."""
    return matrix.states[int(rng.integers(len(matrix.states)))]


def sample_turn_sequence(
    matrix: TransitionMatrix, initial: str, n: int, rng: np.random.Generator
) -> list[str]:
    if n < 1:
        raise ValidationError(f"sequence length must be >= 1, got {n}")
    matrix.index_of(initial)
    sequence = [initial]
    while len(sequence) < n:
        sequence.append(next_speaker(matrix, sequence[-1], rng))
    return sequence


def stationary_distribution(matrix: TransitionMatrix) -> np.ndarray:
    """Left eigenvector of the matrix for eigenvalue 1, normalised to sum 1."""
    eigenvalues, eigenvectors = np.linalg.eig(matrix.probs.T)
    k = int(np.argmin(np.abs(eigenvalues - 1.0)))
    vector = np.real(eigenvectors[:, k])
    return vector / vector.sum()
