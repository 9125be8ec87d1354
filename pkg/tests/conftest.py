import pytest

from qresize import Circuit, Kind

# BV walkthrough circuit: five data qubits, only q0 and q1 couple to q5.
BV_WALK_QASM = """\
OPENQASM 2.0;
include "qelib1.inc";
qreg q[6];
creg c[5];
h q[0];
h q[1];
h q[2];
h q[3];
h q[4];
x q[5];
h q[5];
cx q[0],q[5];
cx q[1],q[5];
h q[0];
h q[1];
h q[2];
h q[3];
h q[4];
measure q[0] -> c[0];
measure q[1] -> c[1];
measure q[2] -> c[2];
measure q[3] -> c[3];
measure q[4] -> c[4];
"""

BV_WALK_SECRET = (1, 1, 0, 0, 0)


@pytest.fixture
def bv_walk_text():
    return BV_WALK_QASM


def brute_force_dlists(circuit: Circuit) -> list[list[int]]:
    """Dependency lists by a literal backward scan of the instruction list.

    Walking from the end, an instruction is an ancestor of q's leaf iff it
    touches a qubit already reached; its operands are then reached too.
    """
    ops = [ins for ins in circuit.instructions if ins.kind is not Kind.BARRIER]
    out = []
    for q in range(circuit.num_qubits):
        members = [q]
        reached = {q}
        for ins in reversed(ops):
            if reached.intersection(ins.qubits):
                for p in ins.qubits:
                    if p not in reached:
                        reached.add(p)
                        members.append(p)
        out.append(members)
    return out


_criteria: dict[int, list[tuple[str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        _criteria.setdefault(marker.args[0], []).append((item.name, status))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        results = _criteria[n]
        statuses = {s for _, s in results}
        overall = "FAIL" if "FAIL" in statuses else ("SKIP" if statuses == {"SKIP"} else "PASS")
        names = ", ".join(f"{name}={s}" for name, s in results)
        terminalreporter.write_line(f"criterion {n:2d}: {overall}  ({names})")
