"""Shrink quantum circuits by reusing qubits through mid-circuit measurement and reset."""
from .circuit import (
    Circuit,
    GateCounts,
    Instruction,
    Kind,
    OpaqueDecl,
    barrier,
    count_gates,
    gate,
    measure,
    reset,
    validate,
)
from .dag import (
    DependencyList,
    DependencyTable,
    GateDag,
    build_dag,
    dependency_table,
    is_resizable,
    parse_dependency_override,
    sorted_llist,
)
from .qasm import ParseDiagnostic, QasmError, Severity, emit_qasm, load_qasm, parse_qasm
from .resizer import ResizeError, ResizePlan, Tenancy, plan_report, resize
from .verify import (
    EquivalenceReport,
    OutcomeDistribution,
    SimulationError,
    check_equivalence,
    compute_pst,
    simulate,
    total_variation,
)
from .oracle import OracleBudgetError, OracleResult, min_width_oracle, peak_liveness
from .benchgen import (
    gen_bv,
    gen_cat,
    gen_entangled_block,
    gen_ghz,
    gen_random,
    gen_scaling,
    parse_secret,
)

__version__ = "0.1.0"
