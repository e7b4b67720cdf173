"""Pulse-level compiler and exact simulator for gradient-coupled ion registers.

The package models a linear chain of trapped ions whose internal states are
driven by microwave pulses and coupled by a static magnetic gradient. It
covers the full workflow: chain mechanics to coupling matrix, encoding
topologies, density-matrix pulse simulation with the experiment's noise
model, a compiler that schedules a three-qubit Fourier transform from free
Ising evolution windows, and the fidelity/overlap metrics used to judge the
results.
"""

from .chain import (
    ChainGeometry,
    ChainModelError,
    CouplingMatrix,
    ModeDecomposition,
    TrapConfig,
    ZeemanProfile,
    coupling_matrix,
    equilibrium_positions,
    load_couplings,
    normal_modes,
    save_couplings,
    zeeman_profile,
)
from .encoding import (
    EncodingError,
    TopologyAssignment,
    decoupled_memory_fragment,
    effective_couplings,
    parse_topology,
    topology_preset,
    transfer_sequence,
)
from .engine import (
    EngineError,
    NoiseModel,
    QuantumState,
    RunResult,
    apply_phase_shift,
    apply_rotation,
    apply_unitary,
    dd_fragment,
    free_evolution,
    fringe_scan,
    measurement_probabilities,
    prepare_state,
    program_unitary,
    ramsey_program,
    ramsey_scan,
    run_program,
    sample_counts,
    selective_recoupling_wrap,
    transfer_basis,
)
from .harness import (
    HarnessError,
    RunRecord,
    Scenario,
    emit_records,
    load_scenario_file,
    run_all,
    run_custom_scenario,
    run_scenario,
)
from .metrics import (
    ErrorBudget,
    FringeFit,
    MetricsError,
    OutcomeDistribution,
    distinguishability,
    error_budget,
    fidelity_via_local_rotation,
    fringe_fidelity,
    process_fidelity,
    ramsey_fit,
    sso,
    state_fidelity,
    statistical_overlap,
    total_variation,
)
from .program import (
    BASIS_PI,
    BASIS_SIGMA_MINUS,
    BASIS_SIGMA_PLUS,
    Echo,
    FreeEvolve,
    Measure,
    PhaseShift,
    ProgramError,
    PulseProgram,
    Rotate,
    TransferBasis,
    parse_program,
)
from .qft import (
    CompiledTransform,
    CompilerError,
    PlanVerification,
    calibrated_couplings,
    compile_qft,
    emit_sequence,
    plan_times,
    reference_qft,
    serial_baseline,
    solve_entangling_params,
    verify_plan,
)

__version__ = "0.1.0"

__all__ = [
    "BASIS_PI",
    "BASIS_SIGMA_MINUS",
    "BASIS_SIGMA_PLUS",
    "ChainGeometry",
    "ChainModelError",
    "CompiledTransform",
    "CompilerError",
    "CouplingMatrix",
    "Echo",
    "EncodingError",
    "EngineError",
    "ErrorBudget",
    "FreeEvolve",
    "FringeFit",
    "HarnessError",
    "Measure",
    "MetricsError",
    "ModeDecomposition",
    "NoiseModel",
    "OutcomeDistribution",
    "PhaseShift",
    "PlanVerification",
    "ProgramError",
    "PulseProgram",
    "QuantumState",
    "Rotate",
    "RunRecord",
    "RunResult",
    "Scenario",
    "TopologyAssignment",
    "TransferBasis",
    "TrapConfig",
    "ZeemanProfile",
    "apply_phase_shift",
    "apply_rotation",
    "apply_unitary",
    "calibrated_couplings",
    "compile_qft",
    "coupling_matrix",
    "dd_fragment",
    "decoupled_memory_fragment",
    "distinguishability",
    "effective_couplings",
    "emit_records",
    "emit_sequence",
    "equilibrium_positions",
    "error_budget",
    "fidelity_via_local_rotation",
    "free_evolution",
    "fringe_fidelity",
    "fringe_scan",
    "load_couplings",
    "load_scenario_file",
    "measurement_probabilities",
    "normal_modes",
    "parse_program",
    "parse_topology",
    "plan_times",
    "prepare_state",
    "process_fidelity",
    "program_unitary",
    "ramsey_fit",
    "ramsey_program",
    "ramsey_scan",
    "reference_qft",
    "run_all",
    "run_custom_scenario",
    "run_program",
    "run_scenario",
    "sample_counts",
    "save_couplings",
    "selective_recoupling_wrap",
    "serial_baseline",
    "solve_entangling_params",
    "sso",
    "state_fidelity",
    "statistical_overlap",
    "topology_preset",
    "total_variation",
    "transfer_basis",
    "transfer_sequence",
    "verify_plan",
    "zeeman_profile",
]
