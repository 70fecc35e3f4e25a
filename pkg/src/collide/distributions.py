"""Outcome probability distributions: uniform, Haar-random states, and
global depolarizing mixtures.

Distributions are stored densely as a vector of 2^n outcome probabilities.
Memory guards keep everything desk-scale: n <= 30 for uniform vectors,
n <= 24 for statevectors.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import FormatError, ResourceError

MAX_UNIFORM_QUBITS = 30
MAX_STATE_QUBITS = 24

NORMALIZATION_ATOL = 1e-9


def _check_power_of_two(dim: int) -> int:
    if dim < 1 or dim & (dim - 1):
        raise ValueError(f"dim must be a power of two, got {dim}")
    return dim.bit_length() - 1


@dataclass(frozen=True)
class ProbabilityDistribution:
    """A dense probability vector over D = 2^n bitstring outcomes."""

    dim: int
    probs: np.ndarray

    def __post_init__(self):
        _check_power_of_two(self.dim)
        probs = np.ascontiguousarray(self.probs, dtype=np.float64)
        if probs.ndim != 1 or probs.shape[0] != self.dim:
            raise ValueError(f"probs must have length dim={self.dim}")
        if np.any(probs < 0):
            raise ValueError("probabilities must be non-negative")
        total = float(probs.sum())
        if abs(total - 1.0) > NORMALIZATION_ATOL:
            raise ValueError(f"probabilities sum to {total}, not 1")
        probs.flags.writeable = False
        object.__setattr__(self, "probs", probs)

    @property
    def n_qubits(self) -> int:
        return self.dim.bit_length() - 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProbabilityDistribution):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.probs, other.probs)


@dataclass(frozen=True)
class StateVector:
    """A pure n-qubit state as a vector of 2^n complex amplitudes."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.shape[0] != 1 << self.n_qubits:
            raise ValueError(f"expected {1 << self.n_qubits} amplitudes")
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > NORMALIZATION_ATOL:
            raise ValueError(f"state is not normalized: |psi|^2 = {norm_sq}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits


@dataclass(frozen=True)
class NoiseModel:
    """Global depolarizing noise with mixture weight alpha in [0, 1].

    alpha = 1 is noiseless, alpha = 0 fully depolarized.  For large D the
    weight is approximately the state fidelity.
    """

    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")


def uniform_distribution(n_qubits: int) -> ProbabilityDistribution:
    """The uniform distribution over 2^n bitstrings."""
    if n_qubits < 0:
        raise ValueError("n_qubits must be non-negative")
    if n_qubits > MAX_UNIFORM_QUBITS:
        raise ResourceError(
            f"uniform distribution capped at n <= {MAX_UNIFORM_QUBITS} qubits"
        )
    dim = 1 << n_qubits
    return ProbabilityDistribution(dim, np.full(dim, 1.0 / dim))


def haar_random_state(n_qubits: int, seed: int) -> StateVector:
    """Draw a Haar-random pure state, reproducibly for a fixed seed.

    Amplitudes are i.i.d. standard complex normals, globally normalized;
    the induced distribution on the unit sphere is exactly Haar.
    """
    if n_qubits < 0:
        raise ValueError("n_qubits must be non-negative")
    if n_qubits > MAX_STATE_QUBITS:
        raise ResourceError(f"statevectors capped at n <= {MAX_STATE_QUBITS} qubits")
    dim = 1 << n_qubits
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    re = rng.standard_normal(dim)
    im = rng.standard_normal(dim)
    amps = re + 1j * im
    amps /= np.linalg.norm(amps)
    return StateVector(n_qubits, amps)


def measurement_distribution(state: StateVector) -> ProbabilityDistribution:
    """Outcome probabilities of a computational-basis measurement."""
    probs = np.abs(state.amplitudes) ** 2
    return ProbabilityDistribution(state.dim, probs)


def porter_thomas_pdf(p: float, dim: int) -> float:
    """Density D*exp(-D*p) of outcome probabilities of a Haar-random state."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if np.any(np.asarray(p) < 0):
        raise ValueError("p must be non-negative")
    return dim * np.exp(-dim * np.asarray(p, dtype=np.float64))


def depolarize(
    dist: ProbabilityDistribution, noise: NoiseModel
) -> ProbabilityDistribution:
    """Mix a distribution with the uniform one: alpha*p + (1-alpha)/D."""
    a = noise.alpha
    probs = a * dist.probs + (1.0 - a) / dist.dim
    return ProbabilityDistribution(dist.dim, probs)


# -- binary serialization (for caching distributions across CLI runs) --------
# Layout: 8-byte little-endian dim, then dim little-endian float64 entries.


def distribution_to_bytes(dist: ProbabilityDistribution) -> bytes:
    header = struct.pack("<Q", dist.dim)
    return header + dist.probs.astype("<f8").tobytes()


def distribution_from_bytes(data: bytes) -> ProbabilityDistribution:
    if len(data) < 8:
        raise FormatError("distribution payload shorter than header", offset=len(data))
    (dim,) = struct.unpack_from("<Q", data, 0)
    expected = 8 + 8 * dim
    if len(data) != expected:
        raise FormatError(
            f"distribution payload has {len(data)} bytes, expected {expected}",
            offset=min(len(data), expected),
        )
    probs = np.frombuffer(data, dtype="<f8", count=dim, offset=8)
    return ProbabilityDistribution(int(dim), probs.astype(np.float64))


def save_distribution(dist: ProbabilityDistribution, path) -> None:
    with open(path, "wb") as fh:
        fh.write(distribution_to_bytes(dist))


def load_distribution(path) -> ProbabilityDistribution:
    with open(path, "rb") as fh:
        return distribution_from_bytes(fh.read())
