"""Exhaustive minimum-width search over topological orders.

A qubit is live from its first scheduled instruction through its last; a
dead qubit's slot may be reused. The width of an order is its peak number of
simultaneously live qubits, counted while each instruction runs. Orders must
respect qubit wires and keep measurements into one clbit in their original
order.
"""
from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit, Kind
from .dag import build_dag

DEFAULT_NODE_BUDGET = 200_000
MAX_DEFAULT_INSTRUCTIONS = 24


@dataclass(frozen=True)
class OracleResult:
    min_width: int
    witness_order: tuple[int, ...]
    nodes_explored: int


class OracleBudgetError(RuntimeError):
    def __init__(self, message: str, best_width: int, best_order: tuple[int, ...]):
        super().__init__(message)
        self.best_width = best_width
        self.best_order = best_order


def peak_liveness(circuit: Circuit, order) -> int:
    """Width of executing the instructions of ``circuit`` in ``order``."""
    remaining = [0] * circuit.num_qubits
    for ins in circuit.instructions:
        if ins.kind is not Kind.BARRIER:
            for q in ins.qubits:
                remaining[q] += 1
    live: set[int] = set()
    peak = 0
    for k in order:
        qs = circuit.instructions[k].qubits
        live.update(qs)
        peak = max(peak, len(live))
        for q in qs:
            remaining[q] -= 1
            if remaining[q] == 0:
                live.discard(q)
    return peak


class _Search:
    def __init__(self, circuit: Circuit, budget: int):
        dag = build_dag(circuit)
        self.ops = list(dag.nodes)
        pos = {k: i for i, k in enumerate(self.ops)}
        self.m = len(self.ops)
        self.full = (1 << self.m) - 1
        self.pred_mask = []
        self.qmask = []
        last_write: dict[int, int] = {}
        for k in self.ops:
            mask = 0
            for p in dag.preds[k]:
                if p is not None:
                    mask |= 1 << pos[p]
            # writes to one clbit keep their order
            for c in circuit.instructions[k].clbits:
                if c in last_write:
                    mask |= 1 << pos[last_write[c]]
                last_write[c] = k
            self.pred_mask.append(mask)
            qm = 0
            for q in circuit.instructions[k].qubits:
                qm |= 1 << q
            self.qmask.append(qm)
        self.wire_mask = [0] * circuit.num_qubits
        for i, k in enumerate(self.ops):
            for q in circuit.instructions[k].qubits:
                self.wire_mask[q] |= 1 << i
        self.budget = budget
        self.nodes = 0

    def live_after(self, done: int, live: int, i: int) -> int:
        qm = self.qmask[i]
        live |= qm
        q = 0
        while qm:
            if qm & 1 and (done & self.wire_mask[q]) == self.wire_mask[q]:
                live &= ~(1 << q)
            qm >>= 1
            q += 1
        return live

    def feasible(self, width: int) -> list[int] | None:
        failed: set[int] = set()
        order: list[int] = []

        def dfs(done: int, live: int) -> bool:
            if done == self.full:
                return True
            if done in failed:
                return False
            self.nodes += 1
            if self.nodes > self.budget:
                raise _Exhausted
            ready = [
                i for i in range(self.m)
                if not done >> i & 1 and (self.pred_mask[i] & done) == self.pred_mask[i]
            ]
            # an instruction whose operands are all live never raises the peak and
            # only shortens lifetimes, so taking it first loses nothing
            for i in ready:
                if self.qmask[i] & ~live == 0:
                    d = done | 1 << i
                    order.append(i)
                    if dfs(d, self.live_after(d, live, i)):
                        return True
                    order.pop()
                    failed.add(done)
                    return False
            for i in ready:
                if bin(live | self.qmask[i]).count("1") > width:
                    continue
                d = done | 1 << i
                order.append(i)
                if dfs(d, self.live_after(d, live, i)):
                    return True
                order.pop()
            failed.add(done)
            return False

        return order if dfs(0, 0) else None


class _Exhausted(Exception):
    pass


def min_width_oracle(
    circuit: Circuit, node_budget: int = DEFAULT_NODE_BUDGET
) -> OracleResult:
    search = _Search(circuit, node_budget)
    natural = tuple(search.ops)
    upper = max(1, peak_liveness(circuit, natural))
    if search.m > MAX_DEFAULT_INSTRUCTIONS and node_budget <= DEFAULT_NODE_BUDGET:
        raise OracleBudgetError(
            f"{search.m} instructions exceed {MAX_DEFAULT_INSTRUCTIONS} at the default "
            f"node budget; best bound so far is {upper}",
            upper,
            natural,
        )
    lower = max([1] + [bin(qm).count("1") for qm in search.qmask])
    for width in range(lower, upper):
        try:
            order = search.feasible(width)
        except _Exhausted:
            raise OracleBudgetError(
                f"node budget {node_budget} exhausted while testing width {width}; "
                f"best bound so far is {upper}",
                upper,
                natural,
            ) from None
        if order is not None:
            return OracleResult(width, tuple(search.ops[i] for i in order), search.nodes)
    return OracleResult(upper, natural, search.nodes)
