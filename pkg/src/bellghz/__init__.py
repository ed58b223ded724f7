"""Deterministic generation of photonic Bell and GHZ states with a qubit
ultrastrongly coupled to three resonator modes: spectra, effective couplings,
dressed-operator Lindblad dynamics, and the two-step entanglement protocol."""

__version__ = "0.1.0"

from .hamiltonian import (
    SystemParams,
    TuningSchedule,
    build_hamiltonian,
    hamiltonian_at,
    qubit_frequency_at,
)
from .hilbert import (
    HilbertSpace,
    bare_state,
    build_space,
    mode_annihilation,
    mode_number,
    qubit_operator,
)
from .lindblad import (
    CollapseChannel,
    dissipator,
    dressed_lowering,
    dressed_population,
    evolve,
    standard_channels,
)
from .perturbation import (
    TransitionPath,
    enumerate_paths,
    g_eff_bell_closed,
    g_eff_ghz_closed,
    g_eff_path_sum,
)
from .protocol import (
    ProtocolConfig,
    SimResult,
    TargetFamily,
    decoherence_sweep,
    fidelity,
    prepare_initial,
    run_protocol,
    target_state,
)
from .spectrum import (
    CrossingInfo,
    EigenDecomposition,
    diagonalize,
    find_avoided_crossing,
    identify_level,
    scan_levels,
)

__all__ = [
    "SystemParams",
    "TuningSchedule",
    "build_hamiltonian",
    "hamiltonian_at",
    "qubit_frequency_at",
    "HilbertSpace",
    "bare_state",
    "build_space",
    "mode_annihilation",
    "mode_number",
    "qubit_operator",
    "CollapseChannel",
    "dissipator",
    "dressed_lowering",
    "dressed_population",
    "evolve",
    "standard_channels",
    "TransitionPath",
    "enumerate_paths",
    "g_eff_bell_closed",
    "g_eff_ghz_closed",
    "g_eff_path_sum",
    "ProtocolConfig",
    "SimResult",
    "TargetFamily",
    "decoherence_sweep",
    "fidelity",
    "prepare_initial",
    "run_protocol",
    "target_state",
    "CrossingInfo",
    "EigenDecomposition",
    "diagonalize",
    "find_avoided_crossing",
    "identify_level",
    "scan_levels",
]
