"""Exact ground states and fermionic correlation measures for finite
pairing (reduced BCS) Hamiltonians, with BCS and number-projected BCS
approximations, a small-scale full-Fock verification oracle, and a CLI
for coupling scans."""

from .entanglement import (
    EofResult,
    EvenParityState8,
    StrongCouplingLimits,
    TwoQubitRep,
    binary_entropy,
    concurrence_closed,
    concurrence_general,
    conditional_entropy,
    discord,
    eof_from_concurrence,
    mutual_information,
    strong_coupling_limits,
    two_qubit_rep,
    vn_entropy,
)
from .exact import (
    FourModeEvenBlock,
    OccupationProfile,
    PairStateVector,
    SolverError,
    four_mode_block,
    ground_state,
    occupations,
    one_body_entropy,
    pair_mode_state,
    quadratic_entropy,
    schmidt_entropy,
)
from .fock import (
    FockState,
    MinimumReport,
    embed,
    even_pair_block,
    gaussian_from_occupations,
    partial_trace_four_modes,
    partial_trace_modes,
    relative_entropy,
    verify_minimum,
)
from .meanfield import (
    BcsEntropies,
    BcsSolution,
    CriticalCoupling,
    PbcsSolution,
    bcs_energy,
    bcs_entropies,
    bcs_four_mode,
    critical_coupling,
    pbcs_optimize,
    pbcs_state,
    solve_gap,
)
from .model import (
    CapacityError,
    ModelParams,
    PairBasis,
    apply_hamiltonian,
    enumerate_basis,
    hamiltonian_dense,
)
from .scan import ScanConfig, ScanResult, point_report, run_scan

__version__ = "0.1.0"
