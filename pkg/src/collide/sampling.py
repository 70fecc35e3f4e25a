"""High-throughput bitstring sampling via Walker's alias method.

A ``Sampler`` is an immutable alias table built in O(D); each draw costs
O(1).  Random variates come from counter-based Philox streams, so shards
``(seed, shard_index)`` are provably independent and a merged multi-shard
draw is deterministic for a fixed ``(seed, shards)``.

``draw_noisy`` implements depolarizing noise as a per-shot mixture: with
probability alpha the shot comes from the ideal sampler, otherwise from
the uniform distribution.  The marginal law equals sampling the
depolarized distribution directly.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from . import _backend
from .distributions import NoiseModel, ProbabilityDistribution
from .errors import FormatError

MAX_BITS = 64

# Fixed chunk so results do not depend on how shots are batched internally.
_CHUNK = 1 << 20
# Above this dimension, per-outcome count accumulators get too large and
# counting falls back to sort-based aggregation of raw outcomes.
_BINCOUNT_MAX_DIM = 1 << 26


@dataclass(frozen=True)
class SampleSet:
    """A multiset of sampled bitstrings: sorted unique keys + multiplicities."""

    n_bits: int
    keys: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        if not 0 <= self.n_bits <= MAX_BITS:
            raise ValueError(f"n_bits must be in [0, {MAX_BITS}]")
        keys = np.ascontiguousarray(self.keys, dtype=np.uint64)
        counts = np.ascontiguousarray(self.counts, dtype=np.int64)
        if keys.ndim != 1 or counts.ndim != 1 or keys.shape != counts.shape:
            raise ValueError("keys and counts must be 1-d arrays of equal length")
        if keys.size:
            if np.any(counts < 1):
                raise ValueError("multiplicities must be positive")
            if np.any(keys[1:] <= keys[:-1]):
                raise ValueError("keys must be sorted and unique")
            if self.n_bits < MAX_BITS and int(keys[-1]) >= 1 << self.n_bits:
                raise ValueError(f"key {int(keys[-1])} out of range for n_bits={self.n_bits}")
        keys.flags.writeable = False
        counts.flags.writeable = False
        object.__setattr__(self, "keys", keys)
        object.__setattr__(self, "counts", counts)

    @classmethod
    def empty(cls, n_bits: int) -> "SampleSet":
        return cls(n_bits, np.empty(0, dtype=np.uint64), np.empty(0, dtype=np.int64))

    @classmethod
    def from_outcomes(cls, n_bits: int, outcomes: np.ndarray) -> "SampleSet":
        keys, counts = np.unique(np.asarray(outcomes, dtype=np.uint64), return_counts=True)
        return cls(n_bits, keys, counts.astype(np.int64))

    @classmethod
    def from_dict(cls, n_bits: int, mapping: dict[int, int]) -> "SampleSet":
        keys = np.array(sorted(mapping), dtype=np.uint64)
        counts = np.array([mapping[int(k)] for k in keys], dtype=np.int64)
        return cls(n_bits, keys, counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def distinct(self) -> int:
        return int(self.keys.size)

    def to_dict(self) -> dict[int, int]:
        return {int(k): int(c) for k, c in zip(self.keys, self.counts)}

    def merge(self, other: "SampleSet") -> "SampleSet":
        """Multiset union: multiplicities add."""
        if self.n_bits != other.n_bits:
            raise ValueError("cannot merge sample sets with different n_bits")
        keys = np.concatenate([self.keys, other.keys])
        counts = np.concatenate([self.counts, other.counts])
        uniq, inverse = np.unique(keys, return_inverse=True)
        summed = np.zeros(uniq.size, dtype=np.int64)
        np.add.at(summed, inverse, counts)
        return SampleSet(self.n_bits, uniq, summed)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SampleSet):
            return NotImplemented
        return (
            self.n_bits == other.n_bits
            and np.array_equal(self.keys, other.keys)
            and np.array_equal(self.counts, other.counts)
        )

    # -- wire/disk format: <Q n_bits, <Q entry count, then (key, count) pairs

    def to_bytes(self) -> bytes:
        header = struct.pack("<QQ", self.n_bits, self.keys.size)
        pairs = np.empty((self.keys.size, 2), dtype="<u8")
        pairs[:, 0] = self.keys
        pairs[:, 1] = self.counts.astype(np.uint64)
        return header + pairs.tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "SampleSet":
        if len(data) < 16:
            raise FormatError("sample payload shorter than 16-byte header", offset=len(data))
        n_bits, entries = struct.unpack_from("<QQ", data, 0)
        expected = 16 + 16 * entries
        if len(data) != expected:
            raise FormatError(
                f"sample payload has {len(data)} bytes, expected {expected}",
                offset=min(len(data), expected),
            )
        if n_bits > MAX_BITS:
            raise FormatError(f"n_bits={n_bits} exceeds {MAX_BITS}", offset=0)
        pairs = np.frombuffer(data, dtype="<u8", offset=16).reshape(entries, 2)
        keys = pairs[:, 0].astype(np.uint64)
        counts = pairs[:, 1].astype(np.int64)
        if np.any(counts < 1):
            raise FormatError("non-positive multiplicity in sample payload", offset=16)
        # Canonicalize: foreign writers may emit unsorted or duplicate keys.
        order = np.argsort(keys, kind="stable")
        keys, counts = keys[order], counts[order]
        dup = np.flatnonzero(keys[1:] == keys[:-1])
        if dup.size:
            uniq, inverse = np.unique(keys, return_inverse=True)
            summed = np.zeros(uniq.size, dtype=np.int64)
            np.add.at(summed, inverse, counts)
            keys, counts = uniq, summed
        try:
            return cls(int(n_bits), keys, counts)
        except ValueError as exc:
            raise FormatError(f"invalid sample payload: {exc}", offset=16) from exc


@dataclass(frozen=True)
class Sampler:
    """Immutable alias table over a dense outcome distribution."""

    dim: int
    prob_row: np.ndarray
    alias_row: np.ndarray

    def __post_init__(self):
        self.prob_row.flags.writeable = False
        self.alias_row.flags.writeable = False

    @property
    def n_bits(self) -> int:
        return self.dim.bit_length() - 1

    def implied_probabilities(self) -> np.ndarray:
        """Per-outcome probability the table actually realizes."""
        implied = self.prob_row.copy()
        np.add.at(implied, self.alias_row, 1.0 - self.prob_row)
        return implied / self.dim


def build_sampler(dist: ProbabilityDistribution) -> Sampler:
    prob_row, alias_row = _backend.build_alias(dist.probs)
    return Sampler(dist.dim, prob_row, alias_row)


def _shard_rngs(seed: int, shards: int) -> list[np.random.Generator]:
    base = np.random.Philox(np.random.SeedSequence(seed))
    return [np.random.Generator(base.jumped(i)) for i in range(shards)]


def _split_shots(shots: int, shards: int) -> list[int]:
    base, extra = divmod(shots, shards)
    return [base + (1 if i < extra else 0) for i in range(shards)]


def _counts_to_sample_set(n_bits: int, acc: np.ndarray) -> SampleSet:
    keys = np.flatnonzero(acc)
    return SampleSet(n_bits, keys.astype(np.uint64), acc[keys])


def draw(sampler: Sampler, shots: int, seed: int, shards: int = 1) -> SampleSet:
    """Draw ``shots`` i.i.d. bitstrings; deterministic per (seed, shards)."""
    if shots < 0:
        raise ValueError("shots must be non-negative")
    if shards < 1:
        raise ValueError("shards must be >= 1")
    n_bits = sampler.n_bits
    if sampler.dim <= _BINCOUNT_MAX_DIM:
        acc = np.zeros(sampler.dim, dtype=np.int64)
        for rng, n in zip(_shard_rngs(seed, shards), _split_shots(shots, shards)):
            done = 0
            while done < n:
                m = min(_CHUNK, n - done)
                cells = rng.integers(0, sampler.dim, size=m, dtype=np.uint64)
                accepts = rng.random(m)
                _backend.alias_pick_count(
                    sampler.prob_row, sampler.alias_row, cells, accepts, acc
                )
                done += m
        return _counts_to_sample_set(n_bits, acc)
    parts = [
        _draw_outcomes_single(sampler, n, rng)
        for rng, n in zip(_shard_rngs(seed, shards), _split_shots(shots, shards))
    ]
    return SampleSet.from_outcomes(n_bits, np.concatenate(parts) if parts else [])


def draw_outcomes(sampler: Sampler, shots: int, seed: int) -> np.ndarray:
    """Raw outcome sequence of ``draw`` (single shard), for diagnostics."""
    if shots < 0:
        raise ValueError("shots must be non-negative")
    (rng,) = _shard_rngs(seed, 1)
    return _draw_outcomes_single(sampler, shots, rng)


def _draw_outcomes_single(sampler: Sampler, shots: int, rng: np.random.Generator) -> np.ndarray:
    out = np.empty(shots, dtype=np.uint64)
    done = 0
    while done < shots:
        m = min(_CHUNK, shots - done)
        cells = rng.integers(0, sampler.dim, size=m, dtype=np.uint64)
        accepts = rng.random(m)
        out[done : done + m] = _backend.alias_pick(
            sampler.prob_row, sampler.alias_row, cells, accepts
        )
        done += m
    return out


def draw_noisy(
    sampler_ideal: Sampler,
    noise: NoiseModel,
    shots: int,
    seed: int,
    shards: int = 1,
) -> SampleSet:
    """Sample the depolarized state via the ideal/uniform per-shot mixture."""
    if shots < 0:
        raise ValueError("shots must be non-negative")
    if shards < 1:
        raise ValueError("shards must be >= 1")
    dim = sampler_ideal.dim
    alpha = noise.alpha
    acc = np.zeros(dim, dtype=np.int64)
    for rng, n in zip(_shard_rngs(seed, shards), _split_shots(shots, shards)):
        done = 0
        while done < n:
            m = min(_CHUNK, n - done)
            mix = rng.random(m)
            cells = rng.integers(0, dim, size=m, dtype=np.uint64)
            accepts = rng.random(m)
            uniform = rng.integers(0, dim, size=m, dtype=np.uint64)
            ideal = _backend.alias_pick(
                sampler_ideal.prob_row, sampler_ideal.alias_row, cells, accepts
            )
            out = np.where(mix < alpha, ideal, uniform)
            acc += np.bincount(out.astype(np.int64), minlength=dim)
            done += m
    return _counts_to_sample_set(sampler_ideal.n_bits, acc)
