"""Acceptance criteria, one test (or a few) per criterion.

Run with ``pytest tests/test_acceptance.py -v -s``; a summary with one
PASS/FAIL/SKIP line per criterion is printed at the end of the session.
"""
import itertools
import json
import logging
import os
import subprocess
import sys
import time
from pathlib import Path

import pytest
from hypothesis import given, settings

from conftest import BV_WALK_QASM
from plan_checks import check_plan
from qresize import (
    QasmError,
    build_dag,
    check_equivalence,
    compute_pst,
    dependency_table,
    emit_qasm,
    gen_bv,
    gen_cat,
    gen_entangled_block,
    gen_ghz,
    gen_random,
    gen_scaling,
    load_qasm,
    min_width_oracle,
    parse_qasm,
    resize,
    simulate,
)
from qresize.cli import main
from strategies import circuits

log = logging.getLogger("acceptance")

EQUIV_TOL = 1e-9
PST_TOL = 1e-12
ORACLE_BUDGET = 5_000_000


def bv_secrets(max_qubits=10):
    """Every secret string for 2..max_qubits total qubits."""
    for k in range(1, max_qubits):
        for bits in itertools.product("01", repeat=k):
            yield "".join(bits)


def structured_family():
    out = [(f"bv_{s}", gen_bv(s)) for s in bv_secrets()]
    out += [(f"ghz_{n}", gen_ghz(n)) for n in range(1, 11)]
    out += [(f"cat_{n}", gen_cat(n)) for n in range(1, 11)]
    return out


def random_family():
    # 200 seeded circuits spanning n in 1..5 and m in 0..14
    return [
        (f"random_{i}", gen_random(1 + i % 5, i % 15, seed=1000 + i, two_qubit_fraction=0.5 + (i % 3) / 4))
        for i in range(200)
    ]


def external_corpus() -> Path | None:
    for candidate in (os.environ.get("QRESIZE_CORPUS"), Path(__file__).parent / "corpus"):
        if candidate and Path(candidate).is_dir():
            return Path(candidate)
    return None


# criterion 1: published widths for the generated benchmark rows

@pytest.mark.criterion(1)
@pytest.mark.parametrize(
    "name, circuit, expected",
    [
        ("bv_n14", gen_bv("1011001110101"), 2),
        ("bv_n14_ones", gen_bv("1" * 13), 2),
        ("ghz_state_n23", gen_ghz(23), 2),
        ("cat_state_n22", gen_cat(22), 2),
    ],
)
def test_c1_table_widths(name, circuit, expected):
    t0 = time.perf_counter()
    plan = resize(circuit)
    elapsed = time.perf_counter() - t0
    print(f"[c1] {name}: {plan.original_width} -> {plan.width} in {elapsed * 1000:.1f} ms")
    assert plan.width == expected
    assert elapsed < 1.0


# criterion 2: widths from the external benchmark files

EXTERNAL = {"wstate_n27.qasm": 3, "swap_test_n25.qasm": 3, "rd53_139.qasm": 5}


@pytest.mark.criterion(2)
@pytest.mark.parametrize("filename, expected", sorted(EXTERNAL.items()))
def test_c2_external_widths(filename, expected, tmp_path):
    corpus = external_corpus()
    if corpus is None or not (corpus / filename).exists():
        pytest.skip(f"{filename} not available; set QRESIZE_CORPUS to a directory holding it")
    work = tmp_path / "corpus"
    work.mkdir()
    (work / filename).write_bytes((corpus / filename).read_bytes())
    report = tmp_path / "bench.json"
    assert main(["bench", str(work), "-o", str(report)]) == 0
    (row,) = json.loads(report.read_text())["rows"]
    print(f"[c2] {filename}: {row['qubits_normal']} -> {row['qubits_sequential']}")
    assert row["error"] is None
    assert row["qubits_sequential"] == expected


# criterion 3: the five-data-qubit walkthrough

@pytest.mark.criterion(3)
def test_c3_walkthrough_dlists():
    c = parse_qasm(BV_WALK_QASM)
    table = dependency_table(build_dag(c))
    expected = [[0, 5], [1, 5, 0], [2], [3], [4], [5, 1, 0]]
    assert [list(d.members) for d in table.lists] == expected
    # the generator's gate order yields the same lists
    generated = dependency_table(build_dag(gen_bv("00011")))
    assert [list(d.members) for d in generated.lists] == expected


@pytest.mark.criterion(3)
def test_c3_walkthrough_tenancy():
    for c in (parse_qasm(BV_WALK_QASM), gen_bv("00011")):
        plan = resize(c)
        check_plan(plan)
        assert plan.width == 2
        assert plan.slot_sequence(0) == [2, 3, 4, 0, 1]
        assert plan.slot_sequence(1) == [5]
        (anc,) = [t for t in plan.tenancies if t.logical == 5]
        assert anc.slot == 1 and not anc.reset_inserted
        print(f"[c3] slot 0: {plan.slot_sequence(0)}, slot 1: {plan.slot_sequence(1)}")


# criterion 4: exact equivalence of original and resized circuits

@pytest.mark.criterion(4)
def test_c4_equivalence_suite():
    t0 = time.perf_counter()
    cases = structured_family() + random_family()
    worst = 0.0
    failures = []
    for name, c in cases:
        report = check_equivalence(c, resize(c).resized, EQUIV_TOL)
        worst = max(worst, report.tvd)
        if not report.tvd < EQUIV_TOL:
            failures.append((name, report.tvd))
    elapsed = time.perf_counter() - t0
    print(f"[c4] {len(cases)} circuits, worst tvd {worst:.3e}, {elapsed:.1f} s")
    assert failures == []
    assert elapsed < 300


# criterion 5: minimality against the exhaustive oracle

@pytest.mark.criterion(5)
def test_c5_structured_families_are_minimal():
    gaps = []
    for name, c in structured_family():
        got = resize(c).width
        best = min_width_oracle(c, node_budget=ORACLE_BUDGET).min_width
        if got != best:
            gaps.append((name, got, best))
    print(f"[c5] structured: {len(structured_family()) - len(gaps)}/{len(structured_family())} equal")
    assert gaps == []


@pytest.mark.criterion(5)
def test_c5_random_set_never_beats_oracle():
    equal = 0
    cases = random_family()
    for name, c in cases:
        got = resize(c).width
        oracle = min_width_oracle(c, node_budget=ORACLE_BUDGET)
        assert got >= oracle.min_width, name
        if got == oracle.min_width:
            equal += 1
        else:
            log.warning(json.dumps({
                "event": "oracle_gap",
                "circuit": name,
                "resized_width": got,
                "oracle_width": oracle.min_width,
                "witness_order": list(oracle.witness_order),
            }))
    print(f"[c5] random: equality rate {equal}/{len(cases)} = {equal / len(cases):.3f}")


# criterion 6: fully entangled blocks pass through untouched

@pytest.mark.criterion(6)
@pytest.mark.parametrize("k", range(2, 7))
def test_c6_entangled_block_passthrough(k):
    c = gen_entangled_block(k)
    text = emit_qasm(c)
    plan = resize(parse_qasm(text))
    assert plan.resizable is False
    assert emit_qasm(plan.resized) == text


@pytest.mark.criterion(6)
def test_c6_cli_passthrough_bytes(tmp_path):
    src = tmp_path / "ent4.qasm"
    src.write_text(emit_qasm(gen_entangled_block(4)))
    out = tmp_path / "out.qasm"
    assert main(["resize", str(src), "-o", str(out)]) == 2
    assert out.read_bytes() == src.read_bytes()


# criterion 7: gate multiset and per-qubit order preserved

@pytest.mark.criterion(7)
def test_c7_preservation_on_corpus():
    cases = structured_family() + random_family()
    cases += [(f"ent_{k}", gen_entangled_block(k)) for k in range(2, 7)]
    cases += [("scaling", gen_scaling(12, 400)), ("ghz23", gen_ghz(23))]
    for _, c in cases:
        check_plan(resize(c))


@pytest.mark.criterion(7)
@settings(max_examples=300, deadline=None)
@given(circuits(max_qubits=7, max_ops=30))
def test_c7_preservation_property(c):
    check_plan(resize(c))


# criterion 8: scale

SCALE_SCRIPT = """
import json, resource, time
from qresize import gen_scaling, resize
t0 = time.perf_counter()
c = gen_scaling(1000, 1_000_000)
t1 = time.perf_counter()
plan = resize(c)
t2 = time.perf_counter()
print(json.dumps({
    "instructions": len(c),
    "width": plan.width,
    "generate_s": t1 - t0,
    "resize_s": t2 - t1,
    "max_rss_kb": resource.getrusage(resource.RUSAGE_SELF).ru_maxrss,
}))
"""


@pytest.mark.criterion(8)
def test_c8_million_gate_resize():
    proc = subprocess.run(
        [sys.executable, "-c", SCALE_SCRIPT], capture_output=True, text=True, timeout=600, check=True
    )
    stats = json.loads(proc.stdout)
    rss_gb = stats["max_rss_kb"] / 1024**2
    print(
        f"[c8] {stats['instructions']} instructions, width {stats['width']}, "
        f"resize {stats['resize_s']:.2f} s (+{stats['generate_s']:.2f} s generation), "
        f"peak RSS {rss_gb:.2f} GB"
    )
    assert abs(stats["instructions"] - 1_000_000) <= 1000
    assert stats["width"] == 2
    assert stats["generate_s"] + stats["resize_s"] < 60
    assert rss_gb < 4


# criterion 9: PST arithmetic

@pytest.mark.criterion(9)
@pytest.mark.parametrize("secret", ["1", "1011", "11011", "000000001", "110100111"])
def test_c9_pst_bv(secret):
    assert abs(compute_pst(simulate(gen_bv(secret)), {secret}) - 1.0) <= PST_TOL


@pytest.mark.criterion(9)
def test_c9_pst_by_hand():
    dist = {"00": 0.125, "01": 0.25, "10": 0.5, "11": 0.125}
    assert abs(compute_pst(dist, {"10"}) - 0.5) <= PST_TOL
    assert abs(compute_pst(dist, {"01", "11"}) - 0.375) <= PST_TOL
    assert abs(compute_pst(dist, {"00", "01", "10", "11"}) - 1.0) <= PST_TOL
    # a key absent from the distribution contributes nothing
    assert compute_pst({"0": 0.512, "1": 0.488}, {"0"}) == 0.512
    assert abs(compute_pst({"0": 0.512, "1": 0.488}, {"0", "x"}) - 0.512) <= PST_TOL


# criterion 10: round trip and parser conformance

@pytest.mark.criterion(10)
def test_c10_round_trip_generated_corpus():
    corpus = structured_family() + random_family()
    corpus += [(f"ent_{k}", gen_entangled_block(k)) for k in range(2, 7)]
    corpus += [("scaling", gen_scaling(20, 300)), ("walk", parse_qasm(BV_WALK_QASM))]
    for name, c in corpus:
        text = emit_qasm(c)
        again = parse_qasm(text)
        assert again == c, name
        assert emit_qasm(again) == text, name
        resized = emit_qasm(resize(c).resized)
        assert emit_qasm(parse_qasm(resized)) == resized, name


@pytest.mark.criterion(10)
def test_c10_round_trip_external_files():
    corpus = external_corpus()
    files = sorted(corpus.glob("*.qasm")) if corpus else []
    if not files:
        pytest.skip("no external benchmark files; set QRESIZE_CORPUS to include them")
    for path in files:
        c = load_qasm(path)
        text = emit_qasm(c)
        assert parse_qasm(text) == c, path.name
        assert emit_qasm(parse_qasm(text)) == text, path.name


@pytest.mark.criterion(10)
@pytest.mark.parametrize(
    "text, line, column",
    [
        ('OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[1];\ncreg c[1];\nif(c==1) x q[0];\n', 5, 1),
        ("qreg q[2]; creg c[2];\nh q[0];\n   if (c == 3) cx q[0], q[1];", 3, 4),
    ],
    ids=["after-header", "indented"],
)
def test_c10_conditionals_rejected(text, line, column):
    with pytest.raises(QasmError) as info:
        parse_qasm(text)
    diag = info.value.diagnostics[0]
    assert (diag.line, diag.column) == (line, column)
    assert "conditional" in diag.message
    assert f"{line}:{column}" in str(info.value)
