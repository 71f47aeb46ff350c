"""Simulation of cloning the steering properties of bipartite quantum states."""

from .cloning import (
    FourQubitState,
    VCoefficients,
    apply_cerf_operator,
    bell_weights,
    clone_pair,
    omega_state,
    primed,
    swap_bc,
)
from .metrics import (
    CorrelationDiagonal,
    SphereQuadrature,
    SteeringReport,
    averaged_fidelities,
    closed_form_fidelities,
    correlation_diagonal,
    evaluate_point,
    fidelity,
    nocloning_lhs,
    steering_S,
    steering_lhs,
    steering_pair,
)
from .qmat import comm_norm, herm_eig, kron, partial_trace, psd_sqrt
from .quantum import (
    Assemblage,
    CloneReport,
    DensityMatrix,
    MeasurementElement,
    ZeroDiscordCertificate,
    assemblage,
    bell_ket,
    bell_state,
    direction_measurements,
    eta_operators,
    load_state,
    perfect_copier,
    proof_measurements,
    save_state,
    su_generators,
    verify_clone,
    zero_discord_check,
)

__version__ = "0.1.0"

__all__ = [
    "Assemblage",
    "CloneReport",
    "CorrelationDiagonal",
    "DensityMatrix",
    "FourQubitState",
    "MeasurementElement",
    "SphereQuadrature",
    "SteeringReport",
    "VCoefficients",
    "ZeroDiscordCertificate",
    "apply_cerf_operator",
    "assemblage",
    "averaged_fidelities",
    "bell_ket",
    "bell_state",
    "bell_weights",
    "clone_pair",
    "closed_form_fidelities",
    "comm_norm",
    "correlation_diagonal",
    "direction_measurements",
    "eta_operators",
    "evaluate_point",
    "fidelity",
    "herm_eig",
    "kron",
    "load_state",
    "nocloning_lhs",
    "omega_state",
    "partial_trace",
    "perfect_copier",
    "primed",
    "proof_measurements",
    "psd_sqrt",
    "save_state",
    "steering_S",
    "steering_lhs",
    "steering_pair",
    "su_generators",
    "swap_bc",
    "verify_clone",
    "zero_discord_check",
]
