"""Circuit DAG and per-qubit dependency lists.

Each qubit wire is a path root -> instructions touching the qubit -> leaf.
Barriers are not nodes. A qubit's dependency list holds every qubit touched
by an ancestor of its leaf: the qubits that must be active for it to finish.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from .circuit import Circuit, Kind


@dataclass(frozen=True, eq=False)
class GateDag:
    """Wire-edge DAG over the non-barrier instructions of ``circuit``.

    Nodes are instruction indices; the root and leaf of qubit ``q`` are the
    two ends of ``wires[q]``. ``preds[k]`` lists, per operand of instruction
    ``k``, the previous instruction on that wire (``None`` for the root).
    """

    circuit: Circuit
    nodes: tuple[int, ...]
    wires: tuple[tuple[int, ...], ...]
    preds: tuple

    @property
    def num_qubits(self) -> int:
        return self.circuit.num_qubits

    def wire(self, qubit: int) -> tuple[int, ...]:
        return self.wires[qubit]

    def predecessors(self, node: int) -> list[int]:
        return sorted({p for p in self.preds[node] if p is not None})

    def successors(self, node: int) -> list[int]:
        out = set()
        for q in self.circuit.instructions[node].qubits:
            path = self.wires[q]
            pos = path.index(node)
            if pos + 1 < len(path):
                out.add(path[pos + 1])
        return sorted(out)

    def ancestors(self, node: int) -> set[int]:
        seen: set[int] = set()
        stack = [node]
        while stack:
            for p in self.preds[stack.pop()]:
                if p is not None and p not in seen:
                    seen.add(p)
                    stack.append(p)
        return seen

    def leaf_ancestors(self, qubit: int) -> set[int]:
        """Every instruction node that precedes the leaf of ``qubit``."""
        path = self.wires[qubit]
        if not path:
            return set()
        return self.ancestors(path[-1]) | {path[-1]}


def build_dag(circuit: Circuit) -> GateDag:
    wires: list[list[int]] = [[] for _ in range(circuit.num_qubits)]
    last: list[int | None] = [None] * circuit.num_qubits
    preds: list = [None] * len(circuit.instructions)
    nodes = []
    for k, ins in enumerate(circuit.instructions):
        if ins.kind is Kind.BARRIER:
            continue
        nodes.append(k)
        qs = ins.qubits
        if len(qs) == 1:
            q = qs[0]
            preds[k] = (last[q],)
            last[q] = k
            wires[q].append(k)
            continue
        preds[k] = tuple(last[q] for q in qs)
        for q in qs:
            last[q] = k
            wires[q].append(k)
    return GateDag(circuit, tuple(nodes), tuple(tuple(w) for w in wires), tuple(preds))


@dataclass(frozen=True)
class DependencyList:
    owner: int
    members: tuple[int, ...]

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class DependencyTable:
    lists: tuple[DependencyList, ...]
    counts: tuple[int, ...]

    def members(self, qubit: int) -> tuple[int, ...]:
        return self.lists[qubit].members


def _operation_counts(circuit: Circuit) -> tuple[int, ...]:
    counts = [0] * circuit.num_qubits
    for ins in circuit.instructions:
        if ins.kind is not Kind.BARRIER:
            for q in ins.qubits:
                counts[q] += 1
    return tuple(counts)


def dependency_table(dag: GateDag, override: Mapping | None = None) -> DependencyTable:
    """Dependency list and operation count for every qubit.

    Members after the owner are in first-encounter order of a backward scan
    over the leaf's ancestors in descending instruction index (operands of
    one instruction in operand order). The scan is computed in a single
    forward pass: each wire carries, for every qubit in its ancestor cone,
    the latest (index, operand position) at which that qubit was touched.
    Only multi-qubit instructions can widen a cone, so single-qubit nodes
    are skipped and the pass costs O(m + n * #multi-qubit gates).

    ``override`` replaces the DAG-derived lists, e.g. with true-dependency
    lists produced elsewhere; see :func:`parse_dependency_override`.
    """
    circuit = dag.circuit
    counts = _operation_counts(circuit)
    if override is not None:
        return DependencyTable(_checked_override(override, circuit.num_qubits), counts)

    instructions = circuit.instructions
    empty: dict[int, tuple[int, int]] = {}
    cone = [empty] * circuit.num_qubits
    for k in dag.nodes:
        qs = instructions[k].qubits
        if len(qs) < 2:
            continue
        maps = sorted((cone[q] for q in qs), key=len, reverse=True)
        merged = dict(maps[0])
        for other in maps[1:]:
            if other is maps[0]:
                continue
            for p, key in other.items():
                cur = merged.get(p)
                if cur is None or cur < key:
                    merged[p] = key
        for pos, q in enumerate(qs):
            merged[q] = (k, pos)
        for q in qs:
            cone[q] = merged

    lists = []
    for q in range(circuit.num_qubits):
        rest = [(-k, pos, p) for p, (k, pos) in cone[q].items() if p != q]
        rest.sort()
        lists.append(DependencyList(q, (q, *(p for _, _, p in rest))))
    return DependencyTable(tuple(lists), counts)


def _checked_override(override: Mapping, num_qubits: int) -> tuple[DependencyList, ...]:
    by_owner = {}
    for key, members in override.items():
        try:
            owner = int(key)
        except (TypeError, ValueError):
            raise ValueError(f"dependency override key {key!r} is not a qubit index")
        members = tuple(int(m) for m in members)
        if not 0 <= owner < num_qubits:
            raise ValueError(f"dependency override owner {owner} out of range")
        if not members or members[0] != owner:
            raise ValueError(f"dependency list for qubit {owner} must start with the owner")
        if len(set(members)) != len(members):
            raise ValueError(f"dependency list for qubit {owner} has duplicates")
        bad = [m for m in members if not 0 <= m < num_qubits]
        if bad:
            raise ValueError(f"dependency list for qubit {owner} has out-of-range {bad}")
        by_owner[owner] = DependencyList(owner, members)
    missing = sorted(set(range(num_qubits)) - set(by_owner))
    if missing:
        raise ValueError(f"dependency override missing qubits {missing}")
    return tuple(by_owner[q] for q in range(num_qubits))


def parse_dependency_override(text: str) -> dict[str, list[int]]:
    """Read a ``{"qubit": [members...]}`` JSON document."""
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError("dependency override must be a JSON object")
    return data


def sorted_llist(table: DependencyTable) -> list[DependencyList]:
    return sorted(table.lists, key=lambda d: (len(d.members), d.owner))


def is_resizable(table: DependencyTable, num_qubits: int) -> bool:
    if not table.lists:
        return False
    return min(len(d.members) for d in table.lists) != num_qubits
