"""Collision counting and every closed-form expectation built on it.

A collision is a re-sampling event: k occurrences of one bitstring count
as k-1 collisions, so R = N - W with W the number of distinct bitstrings.
Cross-collisions between two sample sets count the bitstrings appearing
in both supports: R_X = W_A + W_B - W_AB.

Conventions for the anomaly normalizations follow the volume-test
definitions: the uniform baseline uses the large-D exponential
approximation N - D(1 - e^(-N/D)) by default (``mode="paper_approx"``),
with the exact binomial form available as ``mode="exact"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .distributions import NoiseModel, ProbabilityDistribution
from .sampling import SampleSet

#: Anomaly denominators smaller than this are treated as degenerate
#: (N too small relative to D for the quantum excess to be resolvable).
DEGENERATE_DENOMINATOR = 1e-12


@dataclass(frozen=True)
class AnomalyReport:
    """Observed collisions vs the uniform/quantum expectations."""

    collisions: float
    dim: int
    anomaly: float
    expected_uniform: float
    expected_quantum: float
    shots: int | None = None
    shots_a: int | None = None
    shots_b: int | None = None
    alpha_estimate: float | None = None

    def to_json_dict(self) -> dict:
        out = {
            "collisions": self.collisions,
            "dim": self.dim,
            "anomaly": self.anomaly,
            "expected_uniform": self.expected_uniform,
            "expected_quantum": self.expected_quantum,
        }
        for name in ("shots", "shots_a", "shots_b", "alpha_estimate"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out


@dataclass(frozen=True)
class CostEstimate:
    """Wall-clock estimate for a shot budget at a given repetition rate."""

    shots: int
    rep_rate: float
    parallel_factor: int
    seconds: float

    def to_json_dict(self) -> dict:
        return {
            "shots": self.shots,
            "rep_rate": self.rep_rate,
            "parallel_factor": self.parallel_factor,
            "seconds": self.seconds,
        }


class FidelityEstimate(NamedTuple):
    alpha: float
    clamped: bool


# -- counting -----------------------------------------------------------------


def collision_count(samples: SampleSet) -> int:
    """Number of re-sampling events: total minus distinct."""
    return samples.total - samples.distinct


def cross_collision_count(samples_a: SampleSet, samples_b: SampleSet) -> int:
    """Number of bitstrings appearing in both supports (W_A + W_B - W_AB)."""
    if samples_a.n_bits != samples_b.n_bits:
        raise ValueError(
            f"sample sets have different widths: {samples_a.n_bits} vs {samples_b.n_bits}"
        )
    return int(np.intersect1d(samples_a.keys, samples_b.keys, assume_unique=True).size)


# -- expectations -------------------------------------------------------------


def _survival_terms(probs: np.ndarray, shots: int) -> np.ndarray:
    """(1 - p_j)^N computed as exp(N*log1p(-p_j)); stable for small p, large N."""
    if shots == 0:
        return np.ones_like(probs)
    with np.errstate(divide="ignore"):
        return np.exp(shots * np.log1p(-np.minimum(probs, 1.0)))


def expected_collisions(dist: ProbabilityDistribution, shots: int) -> float:
    """Exact E(R) = N - D + sum_j (1 - p_j)^N, any distribution."""
    if shots < 0:
        raise ValueError("shots must be non-negative")
    if shots == 0:
        return 0.0
    return shots - dist.dim + float(np.sum(_survival_terms(dist.probs, shots)))


def expected_collisions_uniform(dim: int, shots: int, mode: str = "exact") -> float:
    """E(R) for the uniform distribution.

    ``exact``: N - D + D(1 - 1/D)^N.  ``paper_approx``: the large-D form
    N - D(1 - e^(-N/D)) used by the anomaly baseline.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if shots < 0:
        raise ValueError("shots must be non-negative")
    if shots == 0:
        return 0.0
    if mode == "exact":
        if dim == 1:
            return float(shots - 1)
        return shots - dim + dim * math.exp(shots * math.log1p(-1.0 / dim))
    if mode == "paper_approx":
        return shots + dim * math.expm1(-shots / dim)
    raise ValueError(f"mode must be 'exact' or 'paper_approx', got {mode!r}")


def expected_collisions_quantum(dim: int, shots: int) -> float:
    """E(R) = N^2/(N + D) for measurement outcomes of a Haar-random state."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if shots < 0:
        raise ValueError("shots must be non-negative")
    return shots * shots / (shots + dim)


def expected_merged_collisions(
    dist_a: ProbabilityDistribution,
    dist_b: ProbabilityDistribution,
    shots_a: int,
    shots_b: int,
) -> float:
    """E(R) in the merged dataset of two independent sample batches."""
    if dist_a.dim != dist_b.dim:
        raise ValueError(f"dimension mismatch: {dist_a.dim} vs {dist_b.dim}")
    if shots_a < 0 or shots_b < 0:
        raise ValueError("shots must be non-negative")
    if shots_a == 0:
        return expected_collisions(dist_b, shots_b)
    if shots_b == 0:
        return expected_collisions(dist_a, shots_a)
    terms = _survival_terms(dist_a.probs, shots_a) * _survival_terms(dist_b.probs, shots_b)
    return shots_a + shots_b - dist_a.dim + float(np.sum(terms))


def expected_cross_uu(dim: int, shots_a: int, shots_b: int) -> float:
    """E(R_X) when both sides sample the uniform distribution."""
    _check_cross_args(dim, shots_a, shots_b)
    return dim * math.expm1(-shots_a / dim) * math.expm1(-shots_b / dim)


def expected_cross_qq(dim: int, shots_a: int, shots_b: int) -> float:
    """E(R_X) when both sides sample the same Haar-random state."""
    _check_cross_args(dim, shots_a, shots_b)
    n_ab = shots_a + shots_b
    return (
        n_ab * n_ab / (n_ab + dim)
        - shots_a * shots_a / (shots_a + dim)
        - shots_b * shots_b / (shots_b + dim)
    )


def expected_cross_qu(dim: int, shots_a: int, shots_b: int) -> float:
    """E(R_X) when side A samples a Haar state and side B the uniform one."""
    _check_cross_args(dim, shots_a, shots_b)
    return shots_a * dim / (shots_a + dim) * -math.expm1(-shots_b / dim)


def _check_cross_args(dim: int, shots_a: int, shots_b: int) -> None:
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if shots_a < 0 or shots_b < 0:
        raise ValueError("shots must be non-negative")


def expected_collisions_noisy(dim: int, shots: int, noise: NoiseModel) -> float:
    """E(R) under global depolarizing noise with mixture weight alpha.

    Reduces to the quantum form at alpha=1 and to the approximate uniform
    form at alpha=0.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if shots < 0:
        raise ValueError("shots must be non-negative")
    a = noise.alpha
    return shots - dim + dim * dim * math.exp(-(1.0 - a) * shots / dim) / (a * shots + dim)


def expected_anomaly_noisy(dim: int, shots: int, noise: NoiseModel) -> float:
    """Expected collision anomaly at fidelity alpha; alpha^2 + O(N/D)."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if shots < 1:
        raise ValueError("shots must be >= 1")
    a = noise.alpha
    decay = math.exp(-shots / dim)
    numerator = math.exp(-(1.0 - a) * shots / dim) / (a * shots + dim) - decay / dim
    denominator = 1.0 / (shots + dim) - decay / dim
    return numerator / denominator


# -- anomalies ----------------------------------------------------------------


def collision_anomaly(
    collisions: float,
    shots: int,
    dim: int,
    mode: str = "paper_approx",
    alpha_estimate: float | None = None,
) -> AnomalyReport:
    """Normalized collision anomaly: 0 at the uniform expectation, 1 at the
    quantum expectation."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    expected_uniform = expected_collisions_uniform(dim, shots, mode=mode)
    expected_quantum = expected_collisions_quantum(dim, shots)
    denominator = expected_quantum - expected_uniform
    if abs(denominator) < DEGENERATE_DENOMINATOR:
        raise ValueError(
            f"degenerate anomaly denominator {denominator:.3e}: "
            f"N={shots} is too small relative to D={dim}"
        )
    anomaly = (collisions - expected_uniform) / denominator
    return AnomalyReport(
        collisions=collisions,
        dim=dim,
        anomaly=anomaly,
        expected_uniform=expected_uniform,
        expected_quantum=expected_quantum,
        shots=shots,
        alpha_estimate=alpha_estimate,
    )


def cross_anomaly(
    r_x: float,
    shots_a: int,
    shots_b: int,
    dim: int,
    alpha_estimate: float | None = None,
) -> AnomalyReport:
    """Normalized cross-collision anomaly: 0 at E_uu, 1 at E_qq."""
    if shots_a < 1 or shots_b < 1:
        raise ValueError("shots must be >= 1 on both sides")
    e_uu = expected_cross_uu(dim, shots_a, shots_b)
    e_qq = expected_cross_qq(dim, shots_a, shots_b)
    denominator = e_qq - e_uu
    if abs(denominator) < DEGENERATE_DENOMINATOR:
        raise ValueError(
            f"degenerate cross-anomaly denominator {denominator:.3e}: "
            f"shots too small relative to D={dim}"
        )
    anomaly = (r_x - e_uu) / denominator
    return AnomalyReport(
        collisions=r_x,
        dim=dim,
        anomaly=anomaly,
        expected_uniform=e_uu,
        expected_quantum=e_qq,
        shots_a=shots_a,
        shots_b=shots_b,
        alpha_estimate=alpha_estimate,
    )


# -- fidelity and cost --------------------------------------------------------


def estimate_fidelity(measured_anomaly: float, shots: int, dim: int) -> FidelityEstimate:
    """Invert the noisy-anomaly curve to recover the fidelity alpha.

    The curve is strictly increasing in alpha, so a short bisection
    suffices.  Anomalies outside [0, 1] clamp to the endpoints with
    ``clamped=True``.
    """
    if not math.isfinite(measured_anomaly):
        raise ValueError("measured anomaly must be finite")
    if measured_anomaly <= 0.0:
        return FidelityEstimate(0.0, clamped=measured_anomaly < 0.0)
    if measured_anomaly >= 1.0:
        return FidelityEstimate(1.0, clamped=measured_anomaly > 1.0)
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if expected_anomaly_noisy(dim, shots, NoiseModel(mid)) < measured_anomaly:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-9:
            break
    return FidelityEstimate(0.5 * (lo + hi), clamped=False)


def shot_budget(n_qubits: int, alpha: float) -> int:
    """Shots needed to observe ~500 collisions: 2^(n/2+5)/alpha, rounded up."""
    if n_qubits < 0:
        raise ValueError("n_qubits must be non-negative")
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    return math.ceil(2.0 ** (n_qubits / 2 + 5) / alpha)


def execution_time(shots: int, rep_rate: float, parallel_factor: int = 1) -> CostEstimate:
    """Sampling wall-clock: shots / (rep_rate * parallel_factor) seconds."""
    if shots < 0:
        raise ValueError("shots must be non-negative")
    if rep_rate <= 0:
        raise ValueError("rep_rate must be positive")
    if parallel_factor < 1:
        raise ValueError("parallel_factor must be >= 1")
    seconds = shots / (rep_rate * parallel_factor)
    return CostEstimate(shots, rep_rate, parallel_factor, seconds)
