"""OpenQASM 2.0 reader and writer.

Registers are flattened into one qubit and one clbit index space in
declaration order. User ``gate`` definitions are inlined at parse time;
standard and opaque gates keep their source names.
"""
from __future__ import annotations

import math
import operator
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .circuit import Circuit, Instruction, Kind, OpaqueDecl, validate
from .gates import STANDARD_GATES


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str
    severity: Severity = Severity.ERROR

    def __str__(self):
        return f"{self.line}:{self.column}: {self.severity.value}: {self.message}"


class QasmError(ValueError):
    """Parsing failed; ``diagnostics`` holds the positioned messages."""

    def __init__(self, diagnostics: list[ParseDiagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<block>/\*.*?\*/)
  | (?P<real>(?:\d+\.\d*|\.\d+)(?:[eE][-+]?\d+)?|\d+[eE][-+]?\d+)
  | (?P<int>\d+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<str>"[^"\n]*")
  | (?P<sym>->|==|[;,()\[\]{}+\-*/^])
    """,
    re.VERBOSE | re.DOTALL,
)

_QASM3_WORDS = frozenset(
    "qubit bit def defcal cal let input output const for while box "
    "extern gphase ctrl inv pow return break continue end array "
    "duration stretch angle int uint float bool complex".split()
)

_FUNCS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "ln": math.log,
    "sqrt": math.sqrt,
}
_BINOPS = {
    "+": operator.add,
    "-": operator.sub,
    "*": operator.mul,
    "/": operator.truediv,
    "^": operator.pow,
}


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise QasmError(
                [ParseDiagnostic(line, pos - line_start + 1, f"unexpected character {text[pos]!r}")]
            )
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "nl", "comment", "block"):
            toks.append(_Tok(kind, chunk, line, pos - line_start + 1))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


@dataclass
class _GateDef:
    params: list[str]
    qargs: list[str]
    body: list  # (name, param exprs, arg names, token) or ("barrier", None, args, tok)


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.qregs: dict[str, tuple[int, int]] = {}
        self.cregs: dict[str, tuple[int, int]] = {}
        self.nq = 0
        self.nc = 0
        self.gate_defs: dict[str, _GateDef] = {}
        self.opaque: dict[str, OpaqueDecl] = {}
        self.out: list[Instruction] = []
        self.warnings: list[ParseDiagnostic] = []

    # token helpers
    def peek(self, k=0) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def fail(self, tok: _Tok, message: str):
        raise QasmError([ParseDiagnostic(tok.line, tok.col, message)])

    def expect(self, text: str) -> _Tok:
        tok = self.next()
        if tok.text != text or tok.kind == "str":
            found = tok.text or "end of input"
            self.fail(tok, f"expected {text!r}, found {found!r}")
        return tok

    def expect_id(self) -> _Tok:
        tok = self.next()
        if tok.kind != "id":
            self.fail(tok, f"expected identifier, found {tok.text or 'end of input'!r}")
        return tok

    def expect_int(self) -> int:
        tok = self.next()
        if tok.kind != "int":
            self.fail(tok, f"expected integer, found {tok.text or 'end of input'!r}")
        return int(tok.text)

    # top level
    def parse(self) -> Circuit:
        tok = self.peek()
        if tok.kind == "id" and tok.text == "OPENQASM":
            self.next()
            ver = self.next()
            if ver.kind not in ("real", "int"):
                self.fail(ver, "expected version number after OPENQASM")
            if not ver.text.startswith("2"):
                self.fail(ver, f"OpenQASM {ver.text} is not supported; only 2.0")
            self.expect(";")
        while self.peek().kind != "eof":
            self.statement()
        if self.nq < 1:
            self.fail(self.peek(), "program declares no qubits")
        return Circuit(self.nq, self.nc, self.out, tuple(self.opaque.values()))

    def statement(self):
        tok = self.peek()
        word = tok.text
        if tok.kind != "id":
            self.fail(tok, f"unexpected {word or 'end of input'!r}")
        if word == "OPENQASM":
            self.fail(tok, "OPENQASM header must be the first statement")
        if word == "include":
            self.next()
            name = self.next()
            if name.kind != "str":
                self.fail(name, "expected file name string after include")
            if name.text.strip('"') != "qelib1.inc":
                self.fail(name, f"include {name.text} not supported; only \"qelib1.inc\"")
            self.expect(";")
        elif word in ("qreg", "creg"):
            self.next()
            name = self.expect_id()
            self.expect("[")
            size = self.expect_int()
            self.expect("]")
            self.expect(";")
            regs = self.qregs if word == "qreg" else self.cregs
            if name.text in self.qregs or name.text in self.cregs:
                self.fail(name, f"register {name.text!r} already declared")
            if word == "qreg":
                regs[name.text] = (self.nq, size)
                self.nq += size
            else:
                regs[name.text] = (self.nc, size)
                self.nc += size
        elif word == "gate":
            self.next()
            self.gate_definition()
        elif word == "opaque":
            self.next()
            self.opaque_declaration()
        elif word == "measure":
            self.next()
            self.measure()
        elif word == "reset":
            self.next()
            for (q,) in self.broadcast([self.argument(self.qregs, "qubit")]):
                self.out.append(Instruction(Kind.RESET, "", (), (q,)))
            self.expect(";")
        elif word == "barrier":
            self.next()
            args = self.arglist(self.qregs, "qubit")
            self.expect(";")
            qubits = []
            for group in args:
                qubits.extend(q for q in group if q not in qubits)
            self.out.append(Instruction(Kind.BARRIER, "", (), tuple(qubits)))
        elif word == "if":
            self.fail(tok, "classical conditionals (if) are not supported")
        elif word in _QASM3_WORDS:
            self.fail(tok, f"OpenQASM 3 construct {word!r} is not supported")
        else:
            self.application()

    def gate_definition(self):
        name = self.expect_id()
        params = []
        if self.peek().text == "(":
            self.next()
            if self.peek().text != ")":
                params.append(self.expect_id().text)
                while self.peek().text == ",":
                    self.next()
                    params.append(self.expect_id().text)
            self.expect(")")
        qargs = [self.expect_id().text]
        while self.peek().text == ",":
            self.next()
            qargs.append(self.expect_id().text)
        self.expect("{")
        body = []
        while self.peek().text != "}":
            tok = self.expect_id()
            if tok.text == "barrier":
                args = [self.expect_id()]
                while self.peek().text == ",":
                    self.next()
                    args.append(self.expect_id())
                self.expect(";")
                body.append(("barrier", [], args, tok))
                continue
            if tok.text == "if":
                self.fail(tok, "classical conditionals (if) are not supported")
            exprs = []
            if self.peek().text == "(":
                self.next()
                if self.peek().text != ")":
                    exprs.append(self.expression(params))
                    while self.peek().text == ",":
                        self.next()
                        exprs.append(self.expression(params))
                self.expect(")")
            args = [self.expect_id()]
            while self.peek().text == ",":
                self.next()
                args.append(self.expect_id())
            self.expect(";")
            self.check_known(tok, len(exprs), len(args))
            for a in args:
                if a.text not in qargs:
                    self.fail(a, f"unknown qubit argument {a.text!r} in gate {name.text!r}")
            body.append((tok.text, exprs, args, tok))
        self.expect("}")
        if name.text in STANDARD_GATES:
            self.warnings.append(
                ParseDiagnostic(
                    name.line, name.col,
                    f"definition of {name.text!r} shadows the standard gate",
                    Severity.WARNING,
                )
            )
        self.gate_defs[name.text] = _GateDef(params, qargs, body)

    def opaque_declaration(self):
        name = self.expect_id()
        nparams = 0
        if self.peek().text == "(":
            self.next()
            if self.peek().text != ")":
                self.expect_id()
                nparams = 1
                while self.peek().text == ",":
                    self.next()
                    self.expect_id()
                    nparams += 1
            self.expect(")")
        nq = 1
        self.expect_id()
        while self.peek().text == ",":
            self.next()
            self.expect_id()
            nq += 1
        self.expect(";")
        self.opaque[name.text] = OpaqueDecl(name.text, nq, nparams)

    def measure(self):
        src = self.argument(self.qregs, "qubit")
        self.expect("->")
        dst = self.argument(self.cregs, "clbit")
        tok = self.expect(";")
        if len(src) != len(dst):
            self.fail(tok, f"measure register sizes differ ({len(src)} vs {len(dst)})")
        for q, c in zip(src, dst):
            self.out.append(Instruction(Kind.MEASURE, "", (), (q,), (c,)))

    def application(self):
        tok = self.expect_id()
        exprs = []
        if self.peek().text == "(":
            self.next()
            if self.peek().text != ")":
                exprs.append(self.expression(()))
                while self.peek().text == ",":
                    self.next()
                    exprs.append(self.expression(()))
            self.expect(")")
        args = self.arglist(self.qregs, "qubit")
        end = self.expect(";")
        self.check_known(tok, len(exprs), len(args))
        values = [_evaluate(e, {}) for e in exprs]
        for qubits in self.broadcast(args, end):
            if len(set(qubits)) != len(qubits):
                self.fail(tok, f"gate {tok.text!r} applied to repeated qubit")
            self.emit_gate(tok.text, values, qubits)

    def check_known(self, tok: _Tok, nparams: int, nargs: int):
        name = tok.text
        if name in self.gate_defs:
            d = self.gate_defs[name]
            want = (len(d.qargs), len(d.params))
        elif name in self.opaque:
            want = (self.opaque[name].num_qubits, self.opaque[name].num_params)
        elif name in STANDARD_GATES:
            want = STANDARD_GATES[name]
        elif name in _QASM3_WORDS:
            self.fail(tok, f"OpenQASM 3 construct {name!r} is not supported")
        else:
            self.fail(tok, f"unknown gate {name!r} (not standard, defined, or opaque)")
        if (nargs, nparams) != want:
            self.fail(
                tok,
                f"gate {name!r} takes {want[1]} param(s) and {want[0]} qubit(s), "
                f"got {nparams} and {nargs}",
            )

    def emit_gate(self, name: str, values, qubits):
        d = self.gate_defs.get(name)
        if d is None:
            self.out.append(Instruction(Kind.GATE, name, tuple(values), tuple(qubits)))
            return
        env = dict(zip(d.params, values))
        binding = dict(zip(d.qargs, qubits))
        for sub, exprs, args, _ in d.body:
            mapped = [binding[a.text] for a in args]
            if sub == "barrier":
                self.out.append(Instruction(Kind.BARRIER, "", (), tuple(mapped)))
            else:
                self.emit_gate(sub, [_evaluate(e, env) for e in exprs], mapped)

    # operands
    def argument(self, regs, what: str) -> list[int]:
        tok = self.expect_id()
        if tok.text not in regs:
            self.fail(tok, f"unknown {what} register {tok.text!r}")
        start, size = regs[tok.text]
        if self.peek().text == "[":
            self.next()
            idx_tok = self.peek()
            idx = self.expect_int()
            self.expect("]")
            if idx >= size:
                self.fail(idx_tok, f"index {idx} out of range for {tok.text}[{size}]")
            return [start + idx]
        return list(range(start, start + size))

    def arglist(self, regs, what: str) -> list[list[int]]:
        args = [self.argument(regs, what)]
        while self.peek().text == ",":
            self.next()
            args.append(self.argument(regs, what))
        return args

    def broadcast(self, args, tok=None):
        sizes = {len(a) for a in args if len(a) != 1}
        if len(sizes) > 1:
            self.fail(tok or self.peek(), f"register size mismatch in broadcast {sorted(sizes)}")
        width = sizes.pop() if sizes else 1
        return [tuple(a[0] if len(a) == 1 else a[k] for a in args) for k in range(width)]

    # expressions, parsed to nested tuples and evaluated later
    def expression(self, names):
        node = self.term(names)
        while self.peek().text in ("+", "-"):
            op = self.next().text
            node = ("bin", op, node, self.term(names))
        return node

    def term(self, names):
        node = self.power(names)
        while self.peek().text in ("*", "/"):
            op = self.next().text
            node = ("bin", op, node, self.power(names))
        return node

    def power(self, names):
        node = self.unary(names)
        if self.peek().text == "^":
            self.next()
            node = ("bin", "^", node, self.power(names))
        return node

    def unary(self, names):
        if self.peek().text == "-":
            self.next()
            return ("neg", self.unary(names))
        if self.peek().text == "+":
            self.next()
            return self.unary(names)
        return self.primary(names)

    def primary(self, names):
        tok = self.next()
        if tok.kind in ("int", "real"):
            return ("num", float(tok.text))
        if tok.text == "(":
            node = self.expression(names)
            self.expect(")")
            return node
        if tok.kind == "id":
            if tok.text == "pi":
                return ("num", math.pi)
            if tok.text in _FUNCS:
                self.expect("(")
                node = self.expression(names)
                self.expect(")")
                return ("call", tok.text, node)
            if tok.text in names:
                return ("var", tok.text)
            self.fail(tok, f"unknown identifier {tok.text!r} in expression")
        self.fail(tok, f"unexpected {tok.text or 'end of input'!r} in expression")


def _evaluate(node, env) -> float:
    tag = node[0]
    if tag == "num":
        return node[1]
    if tag == "var":
        return env[node[1]]
    if tag == "neg":
        return -_evaluate(node[1], env)
    if tag == "call":
        return _FUNCS[node[1]](_evaluate(node[2], env))
    return _BINOPS[node[1]](_evaluate(node[2], env), _evaluate(node[3], env))


def parse_qasm(text: str) -> Circuit:
    """Parse OpenQASM 2.0 source. Raises QasmError on the first error."""
    return _Parser(text).parse()


def parse_qasm_with_warnings(text: str) -> tuple[Circuit, list[ParseDiagnostic]]:
    parser = _Parser(text)
    circuit = parser.parse()
    return circuit, parser.warnings


def load_qasm(path) -> Circuit:
    return parse_qasm(Path(path).read_text(encoding="utf-8"))


def _fmt(x: float) -> str:
    return repr(float(x))


def emit_qasm(circuit: Circuit) -> str:
    problems = validate(circuit)
    if problems:
        raise ValueError(f"cannot emit invalid circuit: {problems[0]}")
    lines = ['OPENQASM 2.0;', 'include "qelib1.inc";', f"qreg q[{circuit.num_qubits}];"]
    if circuit.num_clbits:
        lines.append(f"creg c[{circuit.num_clbits}];")
    for decl in circuit.opaque_decls:
        params = ""
        if decl.num_params:
            params = "(" + ",".join(f"p{i}" for i in range(decl.num_params)) + ")"
        args = ",".join(f"a{i}" for i in range(decl.num_qubits))
        lines.append(f"opaque {decl.name}{params} {args};")
    for ins in circuit.instructions:
        qargs = ",".join(f"q[{q}]" for q in ins.qubits)
        if ins.kind is Kind.MEASURE:
            lines.append(f"measure q[{ins.qubits[0]}] -> c[{ins.clbits[0]}];")
        elif ins.kind is Kind.RESET:
            lines.append(f"reset {qargs};")
        elif ins.kind is Kind.BARRIER:
            lines.append(f"barrier {qargs};")
        elif ins.params:
            params = ",".join(_fmt(p) for p in ins.params)
            lines.append(f"{ins.name}({params}) {qargs};")
        else:
            lines.append(f"{ins.name} {qargs};")
    return "\n".join(lines) + "\n"
