"""Exact outcome distributions via branch enumeration over mid-circuit measurements.

Every branch is a normalized statevector with a weight (the product of the
Born probabilities that led to it) and the classical register it has written.
Branches are stacked into one array so each gate is a single tensordot.

Outcome keys put clbit ``num_clbits - 1`` leftmost and clbit 0 rightmost.
"""
from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Kind, validate
from .gates import STANDARD_GATES, gate_matrix

MAX_QUBITS = 14
MAX_BRANCHES = 2**20
PRUNE = 1e-12
DEFAULT_TOLERANCE = 1e-9


class SimulationError(ValueError):
    pass


@dataclass(frozen=True)
class OutcomeDistribution:
    probs: dict[str, float]
    num_clbits: int
    branches: int = 1

    def get(self, key: str) -> float:
        return self.probs.get(key, 0.0)

    def total(self) -> float:
        return float(sum(self.probs.values()))

    def sample(self, shots: int, seed: int | None = None) -> dict[str, int]:
        """Draw ``shots`` outcomes; a stand-in for repeated hardware runs."""
        keys = sorted(self.probs)
        p = np.array([self.probs[k] for k in keys])
        rng = np.random.default_rng(seed)
        hits = rng.multinomial(shots, p / p.sum())
        return {k: int(h) for k, h in zip(keys, hits) if h}


@dataclass(frozen=True)
class EquivalenceReport:
    tvd: float
    equivalent: bool
    tolerance: float
    branch_counts: tuple[int, int]


def outcome_key(bits: int, num_clbits: int) -> str:
    return format(bits, f"0{num_clbits}b") if num_clbits else ""


def _check_simulable(circuit: Circuit, max_qubits: int):
    problems = validate(circuit)
    if problems:
        raise SimulationError(f"invalid circuit: {problems[0]}")
    if circuit.num_qubits > max_qubits:
        raise SimulationError(
            f"circuit has {circuit.num_qubits} qubits; the simulator limit is {max_qubits}"
        )
    if circuit.num_clbits > 62:
        raise SimulationError(f"{circuit.num_clbits} clbits exceed the 62-bit register limit")
    for i, ins in enumerate(circuit.instructions):
        if ins.kind is Kind.GATE and ins.name not in STANDARD_GATES:
            raise SimulationError(
                f"instruction {i}: opaque gate {ins.name!r} has no matrix to simulate"
            )


def _apply(states: np.ndarray, matrix: np.ndarray, qubits) -> np.ndarray:
    k = len(qubits)
    u = matrix.reshape((2,) * (2 * k))
    axes = [q + 1 for q in qubits]
    moved = np.tensordot(u, states, axes=(list(range(k, 2 * k)), axes))
    # tensordot puts the gate's output axes first; restore wire order
    return np.moveaxis(moved, list(range(k)), axes)


def _split(states, qubit):
    """Project every branch onto qubit=0 and qubit=1; returns both halves."""
    n_axes = states.ndim
    index = [slice(None)] * n_axes
    index[qubit + 1] = 0
    zero = states[tuple(index)]
    index[qubit + 1] = 1
    one = states[tuple(index)]
    reduce = tuple(range(1, n_axes - 1))
    p0 = np.sum(np.abs(zero) ** 2, axis=reduce)
    p1 = np.sum(np.abs(one) ** 2, axis=reduce)
    total = p0 + p1
    return zero, one, p0 / total, p1 / total


def simulate(
    circuit: Circuit,
    max_qubits: int = MAX_QUBITS,
    max_branches: int = MAX_BRANCHES,
) -> OutcomeDistribution:
    _check_simulable(circuit, max_qubits)
    n = circuit.num_qubits
    states = np.zeros((1,) + (2,) * n, dtype=complex)
    states[(0,) * (n + 1)] = 1.0
    weights = np.ones(1)
    bits = np.zeros(1, dtype=np.int64)
    matrices: dict = {}

    for ins in circuit.instructions:
        kind = ins.kind
        if kind is Kind.GATE:
            key = (ins.name, ins.params)
            u = matrices.get(key)
            if u is None:
                u = matrices[key] = gate_matrix(ins.name, ins.params)
            states = _apply(states, u, ins.qubits)
            continue
        if kind is Kind.BARRIER:
            continue
        q = ins.qubits[0]
        zero, one, p0, p1 = _split(states, q)
        keep0 = weights * p0 >= PRUNE
        keep1 = weights * p1 >= PRUNE
        shape = (-1,) + (1,) * (n - 1)

        s0 = np.zeros_like(states[keep0])
        sel = [slice(None)] * (n + 1)
        sel[q + 1] = 0
        s0[tuple(sel)] = zero[keep0] / np.sqrt(p0[keep0]).reshape(shape)

        s1 = np.zeros_like(states[keep1])
        # a reset maps the |1> half back to |0>
        sel[q + 1] = 0 if kind is Kind.RESET else 1
        s1[tuple(sel)] = one[keep1] / np.sqrt(p1[keep1]).reshape(shape)

        b0, b1 = bits[keep0], bits[keep1]
        if kind is Kind.MEASURE:
            c = ins.clbits[0]
            b0 = b0 & ~np.int64(1 << c)
            b1 = b1 | np.int64(1 << c)
        states = np.concatenate([s0, s1])
        weights = np.concatenate([weights[keep0] * p0[keep0], weights[keep1] * p1[keep1]])
        bits = np.concatenate([b0, b1])
        if len(weights) > max_branches:
            raise SimulationError(
                f"branch count {len(weights)} exceeds the limit of {max_branches}"
            )

    probs: dict[str, float] = {}
    for b, w in zip(bits.tolist(), weights.tolist()):
        key = outcome_key(b, circuit.num_clbits)
        probs[key] = probs.get(key, 0.0) + w
    probs = {k: v for k, v in probs.items() if v >= PRUNE}
    total = sum(probs.values())
    probs = {k: probs[k] / total for k in sorted(probs)}
    return OutcomeDistribution(probs, circuit.num_clbits, len(weights))


def total_variation(p: dict[str, float], q: dict[str, float]) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in sorted(keys))


def check_equivalence(
    a: Circuit, b: Circuit, tolerance: float = DEFAULT_TOLERANCE
) -> EquivalenceReport:
    if a.num_clbits != b.num_clbits:
        raise ValueError(
            f"classical register sizes differ: {a.num_clbits} vs {b.num_clbits}"
        )
    da, db = simulate(a), simulate(b)
    tvd = min(1.0, total_variation(da.probs, db.probs))
    return EquivalenceReport(tvd, tvd < tolerance, tolerance, (da.branches, db.branches))


def compute_pst(dist: OutcomeDistribution | dict, correct: Iterable[str]) -> float:
    """Probability mass that lands on the correct outcomes."""
    correct = set(correct)
    if not correct:
        raise ValueError("correct outcome set must not be empty")
    probs = dist.probs if isinstance(dist, OutcomeDistribution) else dist
    return float(sum(probs.get(s, 0.0) for s in correct))
