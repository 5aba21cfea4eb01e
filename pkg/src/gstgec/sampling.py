"""Categorical sampling over label probability rows.

The exact sampler perturbs log-probabilities with standard Gumbel noise
and takes the argmax; its temperature-controlled softmax relaxation
shares the same noise, so the relaxed row's argmax always equals the
hard sample.  Plain multinomial and uniform-random draws are kept as
baselines.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

U_EPS = 1e-12


class SamplingMode(str, Enum):
    GUMBEL_SOFTMAX = "gumbel"
    MULTINOMIAL = "multinomial"
    RANDOM = "random"


@dataclass(frozen=True)
class SamplingConfig:
    mode: SamplingMode = SamplingMode.GUMBEL_SOFTMAX
    tau: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.tau <= 0:
            raise ValueError("tau must be positive")


def sample_gumbel(count: int, rng: np.random.Generator) -> np.ndarray:
    """count i.i.d. standard Gumbel variates via inverse transform."""
    u = np.clip(rng.random(count), U_EPS, 1.0 - U_EPS)
    return -np.log(-np.log(u))


def _log_probs(probs) -> np.ndarray:
    p = np.asarray(probs, dtype=np.float64)
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise ValueError("probabilities must be finite and non-negative")
    total = p.sum()
    if total <= 0:
        raise ValueError("probabilities sum to zero")
    p = p / total
    with np.errstate(divide="ignore"):
        return np.where(p > 0, np.log(p), -np.inf)


def argmax_with_noise(probs, noise: np.ndarray) -> int:
    """Hard sample for a fixed noise realization (ties to lowest index)."""
    return int(np.argmax(_log_probs(probs) + noise))


def gumbel_max(probs, rng: np.random.Generator) -> int:
    """Exact categorical draw: argmax of noise-perturbed log-probs."""
    return argmax_with_noise(probs, sample_gumbel(len(probs), rng))


def relax_with_noise(probs, noise: np.ndarray, tau: float) -> np.ndarray:
    logits = (_log_probs(probs) + noise) / tau
    # all-(-inf) rows are excluded by _log_probs, so the max is finite
    z = logits - logits.max()
    e = np.exp(z)
    return e / e.sum()


def gumbel_softmax(probs, tau: float, rng: np.random.Generator) -> np.ndarray:
    """Temperature-tau relaxed sample; a valid probability row."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    return relax_with_noise(probs, sample_gumbel(len(probs), rng), tau)


def multinomial(probs, rng: np.random.Generator) -> int:
    """Inverse-CDF categorical draw."""
    p = np.asarray(probs, dtype=np.float64)
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise ValueError("probabilities must be finite and non-negative")
    total = p.sum()
    if total <= 0:
        raise ValueError("probabilities sum to zero")
    cdf = np.cumsum(p / total)
    return int(np.searchsorted(cdf, rng.random(), side="right").clip(
        0, len(p) - 1))


def sample_label(probs, config: SamplingConfig,
                 rng: np.random.Generator) -> int:
    """One class index under the configured sampling mode."""
    if config.mode is SamplingMode.GUMBEL_SOFTMAX:
        noise = sample_gumbel(len(probs), rng)
        return int(np.argmax(relax_with_noise(probs, noise, config.tau)))
    if config.mode is SamplingMode.MULTINOMIAL:
        return multinomial(probs, rng)
    if config.mode is SamplingMode.RANDOM:
        return int(rng.integers(len(probs)))
    raise ValueError(f"unknown sampling mode {config.mode!r}")
