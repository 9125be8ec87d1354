"""Deterministic circuit families used for tests and benchmarks."""
from __future__ import annotations

import math
import random
from collections.abc import Sequence

from .circuit import Circuit, OpaqueDecl, gate, measure


def parse_secret(secret: str | Sequence) -> tuple[bool, ...]:
    """Secret bits indexed by data qubit.

    Strings read like outcome keys: the rightmost character is data qubit 0,
    so a correct run of ``gen_bv("1011")`` measures the key ``"1011"``.
    Sequences are taken as already indexed by data qubit.
    """
    if isinstance(secret, str):
        if not secret or set(secret) - {"0", "1"}:
            raise ValueError(f"secret must be a non-empty bit string, got {secret!r}")
        return tuple(ch == "1" for ch in reversed(secret))
    bits = tuple(bool(b) for b in secret)
    if not bits:
        raise ValueError("secret must have at least one bit")
    return bits


def gen_bv(secret: str | Sequence) -> Circuit:
    """Bernstein-Vazirani over ``len(secret)`` data qubits plus a final ancilla.

    The ancilla is never measured.
    """
    bits = parse_secret(secret)
    k = len(bits)
    anc = k
    ops = [gate("x", anc), gate("h", anc)]
    ops += [gate("h", i) for i in range(k)]
    ops += [gate("cx", i, anc) for i in range(k) if bits[i]]
    ops += [gate("h", i) for i in range(k)]
    ops += [measure(i, i) for i in range(k)]
    return Circuit(k + 1, k, ops)


def _chain(n: int) -> Circuit:
    if n < 1:
        raise ValueError("n must be >= 1")
    ops = [gate("h", 0)]
    ops += [gate("cx", i, i + 1) for i in range(n - 1)]
    ops += [measure(i, i) for i in range(n)]
    return Circuit(n, n, ops)


def gen_ghz(n: int) -> Circuit:
    return _chain(n)


def gen_cat(n: int) -> Circuit:
    # same preparation as GHZ; kept separate to mirror benchmark naming
    return _chain(n)


def gen_entangled_block(k: int) -> Circuit:
    """One opaque gate over all ``k`` qubits, then measure everything."""
    if k < 2:
        raise ValueError("k must be >= 2")
    name = f"ent{k}"
    ops = [gate(name, *range(k))] + [measure(i, i) for i in range(k)]
    return Circuit(k, k, ops, (OpaqueDecl(name, k),))


def gen_random(n: int, m: int, seed: int, two_qubit_fraction: float = 0.5) -> Circuit:
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= two_qubit_fraction <= 1.0:
        raise ValueError("two_qubit_fraction must be in [0, 1]")
    rng = random.Random(seed)
    ops = []
    for _ in range(m):
        if n >= 2 and rng.random() < two_qubit_fraction:
            a, b = rng.sample(range(n), 2)
            ops.append(gate("cx", a, b))
            continue
        q = rng.randrange(n)
        name = rng.choice(("h", "x", "rz"))
        if name == "rz":
            ops.append(gate("rz", q, params=(rng.uniform(0.0, 2 * math.pi),)))
        else:
            ops.append(gate(name, q))
    ops += [measure(i, i) for i in range(n)]
    return Circuit(n, n, ops)


def gen_scaling(n: int, m: int) -> Circuit:
    """BV-style circuit on ``n`` qubits padded with rz gates to about ``m`` instructions.

    Every data qubit couples to the ancilla; padding is spread round-robin
    over the data qubits between their two Hadamard layers.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    k = n - 1
    anc = k
    base = 2 + 4 * k
    padding = max(0, m - base)
    per, extra = divmod(padding, k)
    ops = [gate("x", anc), gate("h", anc)]
    ops += [gate("h", i) for i in range(k)]
    for i in range(k):
        count = per + (1 if i < extra else 0)
        # instructions are immutable, so one object per qubit and angle suffices
        pair = (gate("rz", i, params=(0.125,)), gate("rz", i, params=(-0.125,)))
        ops += [pair[j & 1] for j in range(count)]
    ops += [gate("cx", i, anc) for i in range(k)]
    ops += [gate("h", i) for i in range(k)]
    ops += [measure(i, i) for i in range(k)]
    return Circuit(n, k, ops)
