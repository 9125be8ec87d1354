"""Command-line entry point: ``qresize {resize,check,oracle,gen,bench}``.

Exit codes: 0 success, 1 error, 2 not resizable (input passed through),
3 resized width above ``--max-width``, 4 circuits not equivalent.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .benchgen import (
    gen_bv,
    gen_cat,
    gen_entangled_block,
    gen_ghz,
    gen_random,
    gen_scaling,
)
from .circuit import Kind, count_gates
from .dag import build_dag, dependency_table, parse_dependency_override
from .oracle import (
    DEFAULT_NODE_BUDGET,
    MAX_DEFAULT_INSTRUCTIONS,
    OracleBudgetError,
    min_width_oracle,
)
from .qasm import QasmError, emit_qasm, load_qasm
from .resizer import ResizeError, plan_report, resize
from .verify import DEFAULT_TOLERANCE, MAX_QUBITS, SimulationError, check_equivalence

log = logging.getLogger("qresize")

EXIT_OK, EXIT_ERROR, EXIT_NOT_RESIZABLE, EXIT_TOO_WIDE, EXIT_NOT_EQUIVALENT = 0, 1, 2, 3, 4
FAMILIES = ("bv", "ghz", "cat", "entblock", "random", "scaling")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _write_text(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _manifest(command, inputs, outputs, started, seeds=()):
    doc = {
        "command": command,
        "inputs": [str(p) for p in inputs],
        "outputs": [str(p) for p in outputs],
        "seeds": list(seeds),
        "version": __version__,
        "duration_ms": round((time.perf_counter() - started) * 1000.0, 3),
    }
    for out in outputs:
        _write_text(Path(f"{out}.manifest.json"), _dump(doc))


def cmd_resize(args) -> int:
    started = time.perf_counter()
    try:
        circuit = load_qasm(args.input)
        dag = build_dag(circuit)
        override = None
        if args.deps:
            override = parse_dependency_override(Path(args.deps).read_text(encoding="utf-8"))
        table = dependency_table(dag, override)
        plan = resize(circuit, table, dag)
    except (OSError, QasmError, ValueError, ResizeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    for w in plan.warnings:
        print(f"warning: {w}", file=sys.stderr)
    outputs = []
    if args.output:
        _write_text(Path(args.output), emit_qasm(plan.resized))
        outputs.append(args.output)
    else:
        sys.stdout.write(emit_qasm(plan.resized))
    if args.report:
        _write_text(Path(args.report), _dump(plan_report(plan)))
        outputs.append(args.report)
    inputs = [args.input] + ([args.deps] if args.deps else [])
    _manifest("resize", inputs, outputs, started)
    if not plan.resizable:
        print("circuit is not resizable; output is the unchanged input", file=sys.stderr)
        return EXIT_NOT_RESIZABLE
    if args.max_width is not None and plan.width > args.max_width:
        print(
            f"resized width {plan.width} exceeds --max-width {args.max_width}",
            file=sys.stderr,
        )
        return EXIT_TOO_WIDE
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        a, b = load_qasm(args.a), load_qasm(args.b)
        report = check_equivalence(a, b, args.tolerance)
    except (OSError, QasmError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    sys.stdout.write(_dump(asdict(report)))
    return EXIT_OK if report.equivalent else EXIT_NOT_EQUIVALENT


def cmd_oracle(args) -> int:
    try:
        circuit = load_qasm(args.input)
        result = min_width_oracle(circuit, args.budget)
    except OracleBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.stdout.write(_dump({"best_width": exc.best_width, "exhausted": True}))
        return EXIT_ERROR
    except (OSError, QasmError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    sys.stdout.write(_dump(asdict(result)))
    return EXIT_OK


def _generate(args):
    family = args.family
    if family == "bv":
        if not args.secret:
            raise ValueError("bv needs --secret")
        return gen_bv(args.secret)
    if family in ("ghz", "cat", "entblock", "random", "scaling") and args.n is None:
        raise ValueError(f"{family} needs -n")
    if family == "ghz":
        return gen_ghz(args.n)
    if family == "cat":
        return gen_cat(args.n)
    if family == "entblock":
        return gen_entangled_block(args.n)
    if args.m is None:
        raise ValueError(f"{family} needs -m")
    if family == "random":
        return gen_random(args.n, args.m, args.seed, args.fraction)
    return gen_scaling(args.n, args.m)


def cmd_gen(args) -> int:
    started = time.perf_counter()
    if args.family not in FAMILIES:
        print(f"error: unknown family {args.family!r}; pick one of {', '.join(FAMILIES)}",
              file=sys.stderr)
        return EXIT_ERROR
    try:
        text = emit_qasm(_generate(args))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.output:
        _write_text(Path(args.output), text)
        seeds = [args.seed] if args.family == "random" else []
        _manifest(f"gen {args.family}", [], [args.output], started, seeds)
    else:
        sys.stdout.write(text)
    return EXIT_OK


BENCH_COLUMNS = (
    "file", "qubits_normal", "qubits_sequential", "resizable", "oracle_width",
    "oracle_gap", "tvd", "equivalent", "total_gates_before", "total_gates_after",
    "cnot_before", "cnot_after", "resets_added", "error",
)


def bench_row(path: Path, budget: int = DEFAULT_NODE_BUDGET) -> dict:
    row = dict.fromkeys(BENCH_COLUMNS)
    row["file"] = path.name
    try:
        circuit = load_qasm(path)
        plan = resize(circuit)
    except (OSError, QasmError, ValueError, ResizeError) as exc:
        row["error"] = str(exc)
        return row
    before, after = count_gates(circuit), count_gates(plan.resized)
    row.update(
        qubits_normal=plan.original_width,
        qubits_sequential=plan.width,
        resizable=plan.resizable,
        total_gates_before=before.total_gates,
        total_gates_after=after.total_gates,
        cnot_before=before.cnot_count,
        cnot_after=after.cnot_count,
        resets_added=plan.resets_added,
    )
    ops = sum(1 for ins in circuit.instructions if ins.kind is not Kind.BARRIER)
    if ops <= MAX_DEFAULT_INSTRUCTIONS or budget > DEFAULT_NODE_BUDGET:
        try:
            oracle = min_width_oracle(circuit, budget)
        except OracleBudgetError:
            pass
        else:
            row["oracle_width"] = oracle.min_width
            row["oracle_gap"] = plan.width - oracle.min_width
            if oracle.min_width < plan.width:
                log.warning(json.dumps({
                    "event": "oracle_gap",
                    "file": path.name,
                    "resized_width": plan.width,
                    "oracle_width": oracle.min_width,
                    "witness_order": list(oracle.witness_order),
                }))
    if circuit.num_qubits <= MAX_QUBITS:
        try:
            eq = check_equivalence(circuit, plan.resized)
        except SimulationError:
            pass
        else:
            row["tvd"] = eq.tvd
            row["equivalent"] = eq.equivalent
    return row


def cmd_bench(args) -> int:
    started = time.perf_counter()
    corpus = Path(args.corpus)
    if not corpus.is_dir():
        print(f"error: {corpus} is not a directory", file=sys.stderr)
        return EXIT_ERROR
    files = sorted(corpus.glob("*.qasm"))
    rows = [bench_row(f, args.budget) for f in files]
    report = Path(args.report)
    if report.suffix == ".csv":
        report.parent.mkdir(parents=True, exist_ok=True)
        with report.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS)
            writer.writeheader()
            writer.writerows(rows)
    else:
        _write_text(report, _dump({"rows": rows}))
    _manifest("bench", files, [report], started)
    for row in rows:
        status = row["error"] or f"{row['qubits_normal']} -> {row['qubits_sequential']}"
        print(f"{row['file']}: {status}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qresize", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("resize", help="rewrite a circuit onto fewer qubits")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.add_argument("--report", help="write the plan report JSON here")
    p.add_argument("--deps", help="JSON dependency-list override")
    p.add_argument("--max-width", type=int)
    p.set_defaults(func=cmd_resize)

    p = sub.add_parser("check", help="compare outcome distributions exactly")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("oracle", help="brute-force minimum width")
    p.add_argument("input")
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="write a benchmark circuit")
    p.add_argument("family", help=f"one of {', '.join(FAMILIES)}")
    p.add_argument("-n", type=int)
    p.add_argument("-m", type=int)
    p.add_argument("--secret")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fraction", type=float, default=0.5)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="resize and audit every .qasm file in a directory")
    p.add_argument("corpus")
    p.add_argument("-o", "--report", default="bench.json")
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
