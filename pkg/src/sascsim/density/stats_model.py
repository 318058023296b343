"""The fitted conversational timing model (SASC and C-SASC variants)."""

import json
import logging
from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np
from scipy.stats import norm

from sascsim import __version__
from sascsim.density.bandwidth import (
    DEFAULT_EPS_D,
    DEFAULT_EPS_MU,
    DEFAULT_EPS_R,
    silverman_bandwidth,
)
from sascsim.density.conditional_kde import ConditionalKde
from sascsim.density.kde import Kde1D
from sascsim.density.yeo_johnson import YeoJohnson
from sascsim.errors import (
    ConfigurationError,
    EstimationError,
    SchemaError,
    ValidationError,
)
from sascsim.stats.gaps import (
    SPEAKER_SCOPES,
    TransitionType,
    extract_corpus_gaps,
    overlap_ratio,
)
from sascsim.stats.speaker_means import DEFAULT_MIN_OBS, residuals, speaker_means
from sascsim.stats.turn_sequences import corpus_turn_sequences
from sascsim.turns.transition_matrix import (
    TransitionMatrix,
    estimate_transitions,
    stationary_distribution,
)

logger = logging.getLogger(__name__)

MODEL_VERSION = "1"
DEFAULT_ALPHA = 0.1
# draws before giving up on landing inside the inverse transform's domain
MAX_REJECTION_ROUNDS = 32


class ModelMode(Enum):
    SASC = "sasc"
    CSASC = "csasc"


@dataclass(frozen=True)
class DensityParams:
    """Bandwidth and threshold settings of the fit."""

    alpha: float = DEFAULT_ALPHA
    eps_mu: float = DEFAULT_EPS_MU
    eps_r: float = DEFAULT_EPS_R
    eps_d: float = DEFAULT_EPS_D
    min_obs: int = DEFAULT_MIN_OBS
    speaker_scope: str = "global"

    def __post_init__(self):
        for name in ("alpha", "eps_mu", "eps_r", "eps_d"):
            if not getattr(self, name) > 0:
                raise ConfigurationError(f"{name} must be positive, got {getattr(self, name)}")
        if self.min_obs < 1:
            raise ConfigurationError(f"min_obs must be >= 1, got {self.min_obs}")
        if self.speaker_scope not in SPEAKER_SCOPES:
            raise ConfigurationError(
                f"speaker_scope must be one of {SPEAKER_SCOPES}, got {self.speaker_scope!r}"
            )


@dataclass(frozen=True, eq=False)
class ConditionalResidualModel:
    """Residuals modelled as ConditionalKde in Yeo-Johnson space."""

    transform: YeoJohnson
    ckde: ConditionalKde

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConditionalResidualModel):
            return NotImplemented
        return self.transform == other.transform and self.ckde == other.ckde

    def sample(self, d_star: float, rng: np.random.Generator) -> float:
        """Sample in transformed space and map back; resample outside the valid range."""
        low, high = self.transform.get_range()
        z = self.ckde.sample(d_star, rng)
        for _ in range(MAX_REJECTION_ROUNDS):
            if low < z < high:
                break
            z = self.ckde.sample(d_star, rng)
        else:
            z = float(np.clip(z, np.nextafter(low, high), np.nextafter(high, low)))
        return float(self.transform.inverse(z))

    def sample_many(self, d_stars, rng: np.random.Generator) -> np.ndarray:
        """Vectorised sample(): out-of-range draws are redrawn with their own d*."""
        low, high = self.transform.get_range()
        d_stars = np.asarray(d_stars, dtype=float).ravel()
        z = self.ckde.sample_many(d_stars, rng)
        for _ in range(MAX_REJECTION_ROUNDS):
            outside = ~((z > low) & (z < high))
            if not np.any(outside):
                break
            z[outside] = self.ckde.sample_many(d_stars[outside], rng)
        z = np.clip(z, np.nextafter(low, high), np.nextafter(high, low))
        return self.transform.inverse(z)

    def cdf(self, x, d_star: float):
        return self.ckde.cdf(self.transform.forward(x), d_star)

    def density(self, x, d_star: float):
        """Density in original residual units (includes the transform's Jacobian)."""
        values = np.asarray(x, dtype=float)
        out = self.ckde.density(self.transform.forward(values), d_star) * np.exp(
            self.transform.log_jacobian(values)
        )
        return out if np.ndim(out) else float(out)

    def to_dict(self) -> dict:
        return {**self.ckde.to_dict(), "lambda": self.transform.lmbda}

    @classmethod
    def from_dict(cls, data: dict) -> "ConditionalResidualModel":
        return cls(YeoJohnson(float(data["lambda"])), ConditionalKde.from_dict(data))


ResidualModel = Kde1D | ConditionalResidualModel


@dataclass(frozen=True, eq=False)
class StatsModel:
    """Mean-gap KDEs, residual models and turn matrix for both transition types."""

    mode: ModelMode
    mean_kdes: dict[TransitionType, Kde1D]
    residual_models: dict[TransitionType, ResidualModel]
    transition: TransitionMatrix
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        expected = Kde1D if self.mode is ModelMode.SASC else ConditionalResidualModel
        for transition_type in TransitionType:
            if transition_type not in self.mean_kdes:
                raise ValidationError(f"missing mean KDE for {transition_type.value}")
            residual = self.residual_models.get(transition_type)
            if not isinstance(residual, expected):
                raise ValidationError(
                    f"{self.mode.value} model needs a {expected.__name__} residual "
                    f"for {transition_type.value}, got {type(residual).__name__}"
                )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StatsModel):
            return NotImplemented
        return (
            self.mode is other.mode
            and self.mean_kdes == other.mean_kdes
            and self.residual_models == other.residual_models
            and self.transition == other.transition
            and self.meta == other.meta
        )

    def mean_kde(self, transition_type: TransitionType) -> Kde1D:
        return self.mean_kdes[transition_type]

    def residual(self, transition_type: TransitionType) -> ResidualModel:
        return self.residual_models[transition_type]

    def sample_mean(self, transition_type: TransitionType, rng: np.random.Generator) -> float:
        return self.mean_kdes[transition_type].sample(rng)

    def sample_residual(
        self,
        transition_type: TransitionType,
        rng: np.random.Generator,
        d_star: float | None = None,
    ) -> float:
        residual = self.residual_models[transition_type]
        if self.mode is ModelMode.SASC:
            return residual.sample(rng)
        if d_star is None:
            raise ValidationError("C-SASC residual sampling needs the next duration d*")
        return residual.sample(d_star, rng)

    def p_overlap(
        self,
        transition_type: TransitionType,
        speaker_mu: float,
        d_star: float | None = None,
    ) -> float:
        """P(mu + residual < 0) for a speaker with baseline speaker_mu."""
        residual = self.residual_models[transition_type]
        if self.mode is ModelMode.SASC:
            return float(residual.cdf(-speaker_mu))
        if d_star is None:
            raise ValidationError("C-SASC overlap probability needs the next duration d*")
        return float(residual.cdf(-speaker_mu, d_star))

    def to_dict(self) -> dict:
        data = {"version": MODEL_VERSION, "mode": self.mode.value}
        for transition_type in TransitionType:
            suffix = transition_type.value
            data[f"mean_{suffix}"] = self.mean_kdes[transition_type].to_dict()
            data[f"residual_{suffix}"] = self.residual_models[transition_type].to_dict()
        data["transition"] = self.transition.to_dict()
        data["meta"] = self.meta
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "StatsModel":
        if not isinstance(data, dict):
            raise SchemaError("expected an object", "$")
        if data.get("version") != MODEL_VERSION:
            raise SchemaError(
                f"unsupported model version {data.get('version')!r}", "$.version"
            )
        try:
            mode = ModelMode(data["mode"])
            residual_type = Kde1D if mode is ModelMode.SASC else ConditionalResidualModel
            mean_kdes = {}
            residual_models = {}
            for transition_type in TransitionType:
                suffix = transition_type.value
                mean_kdes[transition_type] = Kde1D.from_dict(data[f"mean_{suffix}"])
                residual_models[transition_type] = residual_type.from_dict(
                    data[f"residual_{suffix}"]
                )
            transition = TransitionMatrix.from_dict(data["transition"])
        except KeyError as exc:
            raise SchemaError("missing required field", f"$.{exc.args[0]}") from exc
        except ValueError as exc:
            raise SchemaError(str(exc), "$") from exc
        return cls(mode, mean_kdes, residual_models, transition, data.get("meta", {}))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "StatsModel":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON ({exc.msg})", "$") from exc
        return cls.from_dict(data)


def _fit_conditional(
    values: np.ndarray, durations: np.ndarray, params: DensityParams, label: str
) -> ConditionalResidualModel:
    if values.size < 3 or np.all(values == values[0]):
        logger.warning(
            "%s residuals are degenerate (%d samples); using the identity transform",
            label,
            values.size,
        )
        transform = YeoJohnson(1.0)
    else:
        transform = YeoJohnson.fit(values)
    ckde = ConditionalKde.fit(
        transform.forward(values), durations, params.eps_r, params.eps_d
    )
    logger.info(
        "%s residual model: lambda=%.3f h_r=%.4f h_d=%.4f N=%d",
        label,
        transform.lmbda,
        ckde.h_r,
        ckde.h_d,
        len(ckde),
    )
    return ConditionalResidualModel(transform, ckde)


def fit_stats_model(
    annotations,
    mode: ModelMode = ModelMode.SASC,
    params: DensityParams | None = None,
    transition: TransitionMatrix | None = None,
    source: str = "",
) -> StatsModel:
    """Fit mean-gap KDEs, residual models and the turn matrix on annotated conversations.

    A given transition matrix is reused as-is instead of being estimated.
    """
    params = params or DensityParams()
    annotations = list(annotations)
    observations = extract_corpus_gaps(annotations, params.speaker_scope)
    summaries = speaker_means(observations, params.min_obs)
    samples = residuals(observations, summaries)

    per_type_means = {
        transition_type: [
            mean
            for summary in summaries
            if (mean := summary.get_mean(transition_type)) is not None
        ]
        for transition_type in TransitionType
    }
    failed = [t.value for t, means in per_type_means.items() if len(means) < 2]
    if failed:
        raise EstimationError(
            "fewer than 2 speakers with at least "
            f"{params.min_obs} observations for transition type(s): {', '.join(failed)}"
        )

    mean_kdes = {}
    residual_models = {}
    counts = {}
    for transition_type, means in per_type_means.items():
        mean_kdes[transition_type] = Kde1D(
            means, silverman_bandwidth(means, params.eps_mu)
        )
        typed = [s for s in samples if s.transition is transition_type]
        values = np.array([s.residual for s in typed])
        durations = np.array([s.duration for s in typed])
        if mode is ModelMode.SASC:
            residual_models[transition_type] = Kde1D(values, params.alpha)
        else:
            residual_models[transition_type] = _fit_conditional(
                values, durations, params, transition_type.value
            )
        counts[transition_type.value] = {"speakers": len(means), "residuals": len(typed)}

    if transition is None:
        transition = estimate_transitions(corpus_turn_sequences(annotations))

    meta = {
        "source": source,
        "sascsim_version": __version__,
        "conversations": len(annotations),
        "observations": len(observations),
        "overlap_ratio": overlap_ratio(observations),
        "counts": counts,
        "params": asdict(params),
    }
    logger.info(
        "fitted %s model on %d conversations, %d gaps",
        mode.value,
        len(annotations),
        len(observations),
    )
    return StatsModel(mode, mean_kdes, residual_models, transition, meta)


def same_transition_share(transition: TransitionMatrix) -> float:
    """Long-run share of same-speaker transitions under the turn matrix."""
    pi = stationary_distribution(transition)
    return float(np.dot(pi, np.diag(transition.probs)))


def expected_overlap(
    model: StatsModel,
    transition_type: TransitionType,
    durations=None,
    n_draws: int = 4000,
    seed: int = 0,
) -> float:
    """Expected p_overlap when mu is drawn from the mean-gap KDE.

    Closed form for SASC (the sum of two Gaussian mixtures is a Gaussian mixture);
    Monte Carlo over mu and d* for C-SASC.
    """
    mean_kde = model.mean_kde(transition_type)
    residual = model.residual(transition_type)
    if model.mode is ModelMode.SASC:
        scale = np.hypot(mean_kde.bandwidth, residual.bandwidth)
        centers = mean_kde.samples[:, None] + residual.samples[None, :]
        return float(norm.cdf(-centers / scale).mean())

    rng = np.random.default_rng(seed)
    mus = mean_kde.sample(rng, n_draws)
    pool = residual.ckde.durations if durations is None else np.asarray(durations, dtype=float)
    d_stars = rng.choice(pool, size=n_draws)
    return float(
        np.mean([residual.cdf(-mu, d) for mu, d in zip(mus, d_stars)])
    )


def expected_overlap_rate(model: StatsModel, durations=None) -> float:
    """Expected overall share of overlapping gaps, both transition types combined."""
    same = same_transition_share(model.transition)
    return same * expected_overlap(model, TransitionType.SAME, durations) + (
        1 - same
    ) * expected_overlap(model, TransitionType.DIFF, durations)


def posterior_gap_samples(
    model: StatsModel,
    transition_type: TransitionType,
    n: int,
    rng: np.random.Generator,
    durations=None,
) -> np.ndarray:
    """Complete gaps mu + residual with a fresh mu per draw."""
    mus = model.mean_kde(transition_type).sample(rng, n)
    residual = model.residual(transition_type)
    if model.mode is ModelMode.SASC:
        return mus + residual.sample(rng, n)
    pool = residual.ckde.durations if durations is None else np.asarray(durations, dtype=float)
    d_stars = rng.choice(pool, size=n)
    return mus + residual.sample_many(d_stars, rng)
