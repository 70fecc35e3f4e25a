"""Pure-numpy implementations of the hot kernels.

This module is the fallback used when the compiled extension
(``collide._kernels``) is unavailable.  Both implementations perform the
same arithmetic in the same order, so for a fixed random stream they
produce identical results; see ``collide._backend`` for selection and
``benchmarks/bench_backends.py`` for the speed comparison.
"""

import numpy as np


def build_alias(probs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Build a Walker/Vose alias table for a probability vector.

    Returns ``(prob_row, alias_row)`` where a draw picks cell ``c``
    uniformly and yields ``c`` if ``u < prob_row[c]`` else ``alias_row[c]``.
    O(K) construction.
    """
    probs = np.ascontiguousarray(probs, dtype=np.float64)
    k = probs.shape[0]
    total = float(np.sum(probs))
    scaled = probs * (k / total)

    prob_row = np.ones(k, dtype=np.float64)
    alias_row = np.arange(k, dtype=np.int64)

    small = [j for j in range(k) if scaled[j] < 1.0]
    large = [j for j in range(k) if scaled[j] >= 1.0]

    scaled = scaled.tolist()  # scalar indexing below; lists are ~3x faster
    while small and large:
        l = small.pop()
        g = large.pop()
        prob_row[l] = scaled[l]
        alias_row[l] = g
        scaled[g] = (scaled[g] + scaled[l]) - 1.0
        if scaled[g] < 1.0:
            small.append(g)
        else:
            large.append(g)
    # Leftovers are probability-1 cells (up to rounding).
    return prob_row, alias_row


def alias_pick(
    prob_row: np.ndarray,
    alias_row: np.ndarray,
    cells: np.ndarray,
    accepts: np.ndarray,
) -> np.ndarray:
    """Map uniform variates to outcomes through an alias table.

    ``cells`` are uniform integers in [0, K) and ``accepts`` uniform doubles
    in [0, 1); one of each is consumed per outcome.
    """
    idx = cells.astype(np.int64)
    take = accepts < prob_row[idx]
    return np.where(take, idx, alias_row[idx]).astype(np.uint64)


def alias_pick_count(
    prob_row: np.ndarray,
    alias_row: np.ndarray,
    cells: np.ndarray,
    accepts: np.ndarray,
    counts: np.ndarray,
) -> None:
    """Fused pick + histogram: accumulate outcome multiplicities into counts."""
    out = alias_pick(prob_row, alias_row, cells, accepts)
    counts += np.bincount(out.astype(np.int64), minlength=counts.shape[0])


def apply_gate(psi: np.ndarray, gate: np.ndarray, qa: int, qb: int) -> None:
    """Apply a 4x4 unitary to qubits (qa, qb) of a statevector, in place.

    Gate basis index is ``2*bit(qa) + bit(qb)`` (qa is the high bit).  Only
    the four amplitude groups of the pair are touched.
    """
    n_groups = psi.shape[0] >> 2
    lo, hi = (qa, qb) if qa < qb else (qb, qa)
    k = np.arange(n_groups, dtype=np.int64)
    mask_lo = (1 << lo) - 1
    mask_mid = (1 << (hi - 1)) - 1
    base = ((k >> (hi - 1)) << (hi + 1)) | (((k >> lo) & (mask_mid >> lo)) << (lo + 1)) | (k & mask_lo)

    i00 = base
    i01 = base | (1 << qb)
    i10 = base | (1 << qa)
    i11 = i10 | (1 << qb)

    a0 = psi[i00]
    a1 = psi[i01]
    a2 = psi[i10]
    a3 = psi[i11]
    # Explicit left-to-right sums keep this bit-compatible with the
    # compiled kernel.
    psi[i00] = gate[0, 0] * a0 + gate[0, 1] * a1 + gate[0, 2] * a2 + gate[0, 3] * a3
    psi[i01] = gate[1, 0] * a0 + gate[1, 1] * a1 + gate[1, 2] * a2 + gate[1, 3] * a3
    psi[i10] = gate[2, 0] * a0 + gate[2, 1] * a1 + gate[2, 2] * a2 + gate[2, 3] * a3
    psi[i11] = gate[3, 0] * a0 + gate[3, 1] * a1 + gate[3, 2] * a2 + gate[3, 3] * a3
