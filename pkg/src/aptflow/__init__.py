"""Classical simulation of anti-PT-symmetric qubit dynamics through an LCU circuit."""

__version__ = "0.1.0"

from .circuit import (
    Circuit,
    Gate,
    circuit_unitary,
    environment_view,
    export_circuit,
    parse_circuit,
    post_select,
    simulate,
)
from .hamiltonian import (
    AptHamiltonian,
    ExperimentalFamily,
    Regime,
    evolve,
    evolve_state,
    from_lambda,
    propagator,
    spectrum,
    symmetry_check,
)
from .lcu import (
    AnglePlan,
    LcuDecomposition,
    Scheme,
    angle_plan,
    build_circuit,
    environment_state,
    lcu_coefficients,
    prepare_lcu_state,
    run_circuit,
)
from .nmr import (
    ExperimentConfig,
    NoiseBand,
    noise_monte_carlo,
    pseudo_pure,
    pseudo_pure_distinguishability,
    run_experiment,
    state_fidelity,
)
from .numerics import expm_oracle, hermitian_eigen, kron, partial_trace
from .observables import (
    EvolutionTrace,
    OscillationMetrics,
    backflow_witness,
    distinguishability,
    distinguishability_series,
    oscillation_metrics,
    purity,
    trace_distance,
)
