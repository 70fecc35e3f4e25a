"""Quantum-volume-style random circuits and their statevector simulation.

A circuit is a sequence of layers; each layer permutes the qubits at
random and applies an independent Haar-random 4x4 unitary to every
consecutive pair (the odd qubit idles).  Square circuits (depth = n) are
the convention used by the volume tests.

Gates are stored as explicit matrices; the simulator applies them directly
to the amplitude vector, touching only the four amplitude groups of each
pair.  Gate basis ordering: for a gate on pair (a, b), the 4-dim index is
``2*bit(a) + bit(b)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .distributions import MAX_STATE_QUBITS, StateVector
from .errors import FormatError, ResourceError

UNITARITY_ATOL = 1e-10


@dataclass(frozen=True)
class CircuitLayer:
    """One layer: a qubit permutation plus gates on consecutive pairs.

    Pair i acts on qubits (permutation[2i], permutation[2i+1]).
    """

    permutation: np.ndarray
    gates: tuple[np.ndarray, ...]


@dataclass(frozen=True)
class Circuit:
    """A layered two-qubit-gate circuit on n qubits."""

    n_qubits: int
    layers: tuple[CircuitLayer, ...]
    seed: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be >= 1")
        object.__setattr__(self, "layers", tuple(self.layers))
        for layer in self.layers:
            perm = np.asarray(layer.permutation)
            if sorted(perm.tolist()) != list(range(self.n_qubits)):
                raise ValueError(f"invalid qubit permutation {perm.tolist()}")
            if len(layer.gates) != self.n_qubits // 2:
                raise ValueError(
                    f"layer must carry {self.n_qubits // 2} gates, got {len(layer.gates)}"
                )
            for gate in layer.gates:
                if gate.shape != (4, 4):
                    raise ValueError("gates must be 4x4 matrices")
                defect = np.max(np.abs(gate.conj().T @ gate - np.eye(4)))
                if defect >= UNITARITY_ATOL:
                    raise ValueError(f"gate is not unitary (defect {defect:.3e})")

    @property
    def depth(self) -> int:
        return len(self.layers)


def random_unitary_4x4(rng: np.random.Generator) -> np.ndarray:
    """Haar-random U(4) element: QR of a complex Ginibre matrix, with the
    R diagonal's phases folded into Q."""
    z = (rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def generate_qv_circuit(n_qubits: int, depth: int, seed: int) -> Circuit:
    """Generate a random quantum-volume circuit, deterministic per seed."""
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    layers = []
    for _ in range(depth):
        perm = rng.permutation(n_qubits)
        gates = tuple(random_unitary_4x4(rng) for _ in range(n_qubits // 2))
        layers.append(CircuitLayer(perm, gates))
    return Circuit(n_qubits, tuple(layers), seed=seed)


def simulate(circuit: Circuit) -> StateVector:
    """Run the circuit on |0...0> and return the final state."""
    n = circuit.n_qubits
    if n > MAX_STATE_QUBITS:
        raise ResourceError(f"simulation capped at n <= {MAX_STATE_QUBITS} qubits")
    psi = np.zeros(1 << n, dtype=np.complex128)
    psi[0] = 1.0
    for layer in circuit.layers:
        perm = layer.permutation
        for i, gate in enumerate(layer.gates):
            a = int(perm[2 * i])
            b = int(perm[2 * i + 1])
            _backend.apply_gate(psi, np.ascontiguousarray(gate), a, b)
    return StateVector(n, psi)


# -- serialization ------------------------------------------------------------
# The canonical form is seed-based: (seed, n, depth) regenerate the circuit.


def circuit_to_json(circuit: Circuit) -> str:
    if circuit.seed is None:
        raise ValueError("only generator-produced circuits (with a seed) serialize")
    return json.dumps(
        {
            "kind": "qv",
            "n_qubits": circuit.n_qubits,
            "depth": circuit.depth,
            "seed": circuit.seed,
        },
        sort_keys=True,
    )


def circuit_from_json(payload: str) -> Circuit:
    try:
        obj = json.loads(payload)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid circuit JSON: {exc}") from exc
    if not isinstance(obj, dict) or obj.get("kind") != "qv":
        raise FormatError("circuit JSON must be an object with kind='qv'")
    try:
        return generate_qv_circuit(int(obj["n_qubits"]), int(obj["depth"]), int(obj["seed"]))
    except KeyError as exc:
        raise FormatError(f"circuit JSON missing field {exc}") from exc
