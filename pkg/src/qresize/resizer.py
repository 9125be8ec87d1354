"""Greedy qubit-reuse resizing.

Repeatedly pick the dependency list with the fewest not-yet-assigned qubits,
load those qubits onto free physical slots, run every instruction that has
become executable, and free a slot as soon as its tenant has no operations
left. A slot that is handed to a new tenant gets a reset right before the
tenant's first operation. Gate order on every wire and the order of
measurements into each clbit are preserved; the only added instructions are
those resets.
"""
from __future__ import annotations

import heapq
import logging
from dataclasses import asdict, dataclass, field

from .circuit import Circuit, GateCounts, Instruction, Kind, count_gates
from .dag import (
    DependencyTable,
    GateDag,
    _operation_counts,
    build_dag,
    dependency_table,
    is_resizable,
)

log = logging.getLogger(__name__)


class ResizeError(RuntimeError):
    pass


@dataclass(frozen=True)
class Tenancy:
    """One logical qubit's stay on one physical slot.

    Positions index the resized instruction list. A qubit with no operations
    gets ``slot``, ``load_pos`` and ``release_pos`` of ``None``.
    """

    logical: int
    slot: int | None
    load_pos: int | None
    release_pos: int | None
    reset_inserted: bool = False


@dataclass(frozen=True)
class ResizePlan:
    original: Circuit
    resized: Circuit
    width: int
    tenancies: tuple[Tenancy, ...]
    resizable: bool
    original_width: int
    resets_added: int = 0
    warnings: tuple[str, ...] = field(default=())

    def slot_sequence(self, slot: int) -> list[int]:
        """Logical qubits hosted by ``slot`` in load order."""
        ts = [t for t in self.tenancies if t.slot == slot]
        return [t.logical for t in sorted(ts, key=lambda t: t.load_pos)]


def _check_table(table: DependencyTable, circuit: Circuit):
    owners = sorted(d.owner for d in table.lists)
    if owners != list(range(circuit.num_qubits)):
        raise ResizeError(
            f"dependency table owners {owners} do not match the "
            f"{circuit.num_qubits} circuit qubits"
        )
    if tuple(table.counts) != _operation_counts(circuit):
        raise ResizeError("dependency table operation counts do not match the circuit")


def _identity_tenancies(circuit: Circuit) -> tuple[Tenancy, ...]:
    first: dict[int, int] = {}
    last: dict[int, int] = {}
    for i, ins in enumerate(circuit.instructions):
        if ins.kind is Kind.BARRIER:
            continue
        for q in ins.qubits:
            first.setdefault(q, i)
            last[q] = i
    return tuple(
        Tenancy(q, q, first.get(q), last.get(q)) for q in range(circuit.num_qubits)
    )


def resize(
    circuit: Circuit,
    table: DependencyTable | None = None,
    dag: GateDag | None = None,
) -> ResizePlan:
    if dag is None:
        dag = build_dag(circuit)
    if table is None:
        table = dependency_table(dag)
    _check_table(table, circuit)
    n = circuit.num_qubits

    if not is_resizable(table, n):
        log.info("circuit is not resizable; passing it through unchanged")
        return ResizePlan(
            circuit, circuit, n, _identity_tenancies(circuit), False, n
        )

    instructions = circuit.instructions
    warnings = []
    dropped = sum(1 for ins in instructions if ins.kind is Kind.BARRIER)
    if dropped:
        warnings.append(f"dropped {dropped} barrier(s); reused slots cannot share a barrier")

    wires = dag.wires
    remaining = list(table.counts)
    head = [0] * n  # next unscheduled position on each wire
    assigned = [False] * n
    slot_of: list[int | None] = [None] * n
    load_pos: list[int | None] = [None] * n
    release_pos: list[int | None] = [None] * n
    needs_reset = [False] * n
    free_slots: list[int] = []
    slot_used: list[bool] = []
    queued = bytearray(len(instructions))

    # L-list entries: [unassigned member count, owner, members]
    entries = [[len(d.members), d.owner, d.members] for d in table.lists]
    containing: list[list] = [[] for _ in range(n)]
    for e in entries:
        for q in e[2]:
            containing[q].append(e)

    out: list[Instruction] = []
    ready: list[int] = []
    resets = 0

    # measurements into one clbit must keep their order or the final value changes
    writers: dict[int, list[int]] = {}
    for k, ins in enumerate(instructions):
        for c in ins.clbits:
            writers.setdefault(c, []).append(k)
    chead = dict.fromkeys(writers, 0)

    def try_queue(k: int):
        if queued[k]:
            return
        ins = instructions[k]
        for q in ins.qubits:
            if slot_of[q] is None or wires[q][head[q]] != k:
                return
        for c in ins.clbits:
            if writers[c][chead[c]] != k:
                return
        queued[k] = 1
        heapq.heappush(ready, k)

    while entries:
        best = 0
        for i in range(1, len(entries)):
            e, b = entries[i], entries[best]
            if e[0] < b[0] or (e[0] == b[0] and e[1] < b[1]):
                best = i
        chosen = entries.pop(best)

        loaded = []
        for q in chosen[2]:
            if assigned[q]:
                continue
            assigned[q] = True
            for e in containing[q]:
                e[0] -= 1
            if remaining[q] == 0:
                continue
            if free_slots:
                slot = heapq.heappop(free_slots)
                needs_reset[q] = True
            else:
                slot = len(slot_used)
                slot_used.append(True)
            slot_of[q] = slot
            loaded.append(q)

        for q in loaded:
            try_queue(wires[q][0])

        while ready:
            k = heapq.heappop(ready)
            ins = instructions[k]
            for q in ins.qubits:
                if load_pos[q] is None:
                    if needs_reset[q]:
                        out.append(Instruction(Kind.RESET, "", (), (slot_of[q],)))
                        resets += 1
            pos = len(out)
            out.append(ins.remap(slot_of))
            for q in ins.qubits:
                if load_pos[q] is None:
                    load_pos[q] = pos
                head[q] += 1
                remaining[q] -= 1
                if remaining[q] == 0:
                    release_pos[q] = pos
                    heapq.heappush(free_slots, slot_of[q])
                else:
                    try_queue(wires[q][head[q]])
            for c in ins.clbits:
                chead[c] += 1
                if chead[c] < len(writers[c]):
                    try_queue(writers[c][chead[c]])

    if any(remaining):
        stuck = [q for q in range(n) if remaining[q]]
        raise ResizeError(f"scheduling deadlock: qubits {stuck} have unscheduled operations")

    width = max(1, len(slot_used))
    resized = Circuit(width, circuit.num_clbits, out, circuit.opaque_decls)
    tenancies = tuple(
        Tenancy(q, slot_of[q], load_pos[q], release_pos[q], needs_reset[q])
        for q in range(n)
    )
    return ResizePlan(
        circuit, resized, width, tenancies, True, n, resets, tuple(warnings)
    )


def _counts_dict(c: GateCounts) -> dict:
    return asdict(c)


def plan_report(plan: ResizePlan) -> dict:
    """JSON-serializable summary of a plan."""
    return {
        "original_width": plan.original_width,
        "width": plan.width,
        "resizable": plan.resizable,
        "resets_added": plan.resets_added,
        "tenancies": [asdict(t) for t in plan.tenancies],
        "counts_before": _counts_dict(count_gates(plan.original)),
        "counts_after": _counts_dict(count_gates(plan.resized)),
        "warnings": list(plan.warnings),
    }
