"""Immutable circuit IR shared by the parser, analysis, resizer and simulator.

Qubits and classical bits are plain integer indices into a single flat space.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .gates import STANDARD_GATES


class Kind(Enum):
    GATE = "gate"
    MEASURE = "measure"
    RESET = "reset"
    BARRIER = "barrier"


@dataclass(frozen=True, slots=True)
class Instruction:
    kind: Kind
    name: str = ""
    params: tuple[float, ...] = ()
    qubits: tuple[int, ...] = ()
    clbits: tuple[int, ...] = ()

    def remap(self, qubit_map) -> "Instruction":
        return Instruction(
            self.kind,
            self.name,
            self.params,
            tuple(qubit_map[q] for q in self.qubits),
            self.clbits,
        )


def gate(name: str, *qubits: int, params=()) -> Instruction:
    return Instruction(Kind.GATE, name, tuple(float(p) for p in params), tuple(qubits))


def measure(qubit: int, clbit: int) -> Instruction:
    return Instruction(Kind.MEASURE, "", (), (qubit,), (clbit,))


def reset(qubit: int) -> Instruction:
    return Instruction(Kind.RESET, "", (), (qubit,))


def barrier(*qubits: int) -> Instruction:
    return Instruction(Kind.BARRIER, "", (), tuple(qubits))


@dataclass(frozen=True, slots=True)
class OpaqueDecl:
    name: str
    num_qubits: int
    num_params: int = 0


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    num_clbits: int = 0
    instructions: tuple[Instruction, ...] = ()
    opaque_decls: tuple[OpaqueDecl, ...] = field(default=())

    def __post_init__(self):
        if not isinstance(self.instructions, tuple):
            object.__setattr__(self, "instructions", tuple(self.instructions))
        if not isinstance(self.opaque_decls, tuple):
            object.__setattr__(self, "opaque_decls", tuple(self.opaque_decls))

    def __len__(self):
        return len(self.instructions)

    def opaque(self, name: str) -> OpaqueDecl | None:
        for decl in self.opaque_decls:
            if decl.name == name:
                return decl
        return None


@dataclass(frozen=True)
class GateCounts:
    total_gates: int = 0
    cnot_count: int = 0
    measure_count: int = 0
    reset_count: int = 0
    barrier_count: int = 0
    depth: int = 0


def count_gates(circuit: Circuit) -> GateCounts:
    total = cnot = meas = resets = barriers = 0
    # depth of the deepest node seen so far on each wire
    level = [0] * circuit.num_qubits
    depth = 0
    for ins in circuit.instructions:
        kind = ins.kind
        if kind is Kind.BARRIER:
            barriers += 1
            continue
        if kind is Kind.GATE:
            total += 1
            if ins.name == "cx":
                cnot += 1
        elif kind is Kind.MEASURE:
            meas += 1
        else:
            resets += 1
        d = 1 + max(level[q] for q in ins.qubits)
        for q in ins.qubits:
            level[q] = d
        if d > depth:
            depth = d
    return GateCounts(total, cnot, meas, resets, barriers, depth)


def validate(circuit: Circuit) -> list[str]:
    """Return a description of every invariant violation; empty means valid."""
    problems = []
    nq, nc = circuit.num_qubits, circuit.num_clbits
    if nq < 1:
        problems.append(f"circuit: num_qubits must be >= 1, got {nq}")
    if nc < 0:
        problems.append(f"circuit: num_clbits must be >= 0, got {nc}")
    opaque = {d.name: d for d in circuit.opaque_decls}
    for i, ins in enumerate(circuit.instructions):
        where = f"instruction {i}"
        qs, cs = ins.qubits, ins.clbits
        bad_q = [q for q in qs if not 0 <= q < nq]
        if bad_q:
            problems.append(f"{where}: qubit index out of range {bad_q} (num_qubits={nq})")
        bad_c = [c for c in cs if not 0 <= c < nc]
        if bad_c:
            problems.append(f"{where}: clbit index out of range {bad_c} (num_clbits={nc})")
        if len(set(qs)) != len(qs):
            problems.append(f"{where}: duplicate qubit operands {list(qs)}")
        kind = ins.kind
        if kind is Kind.MEASURE:
            if len(qs) != 1 or len(cs) != 1:
                problems.append(
                    f"{where}: measure needs exactly 1 qubit and 1 clbit, "
                    f"got {len(qs)} and {len(cs)}"
                )
        elif kind is Kind.RESET:
            if len(qs) != 1 or cs:
                problems.append(f"{where}: reset needs exactly 1 qubit and no clbits")
        elif kind is Kind.BARRIER:
            if not qs or cs or ins.params:
                problems.append(f"{where}: barrier needs >= 1 qubit, no clbits, no params")
        else:
            if cs:
                problems.append(f"{where}: gate {ins.name!r} cannot write clbits")
            if ins.name in opaque:
                arity, nparams = opaque[ins.name].num_qubits, opaque[ins.name].num_params
            elif ins.name in STANDARD_GATES:
                arity, nparams = STANDARD_GATES[ins.name]
            else:
                problems.append(f"{where}: unknown gate {ins.name!r}")
                continue
            if len(qs) != arity:
                problems.append(
                    f"{where}: gate {ins.name!r} takes {arity} qubit(s), got {len(qs)}"
                )
            if len(ins.params) != nparams:
                problems.append(
                    f"{where}: gate {ins.name!r} takes {nparams} param(s), "
                    f"got {len(ins.params)}"
                )
    return problems
