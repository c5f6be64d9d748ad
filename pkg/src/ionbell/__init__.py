"""Light-motion Bell states of a single trapped ion in a high-Q cavity."""
from ._kernels import BACKEND
from .analysis import (
    ReducedDensity,
    entanglement_entropy,
    fidelity,
    negativity,
    partial_trace,
    von_neumann_entropy,
)
from .hilbert import BipartiteState, FockCutoffs, PureState, basis_state, inner_product, superpose
from .operators import (
    OperatorMatrix,
    SystemParams,
    blue_rwa_hamiltonian,
    field_annihilator,
    free_hamiltonian,
    full_hamiltonian,
    lamb_dicke_hamiltonian,
    operator_sine,
    pauli,
    red_rwa_hamiltonian,
    vib_annihilator,
)
from .propagation import (
    LeakageError,
    analytic_blue_propagate,
    analytic_red_propagate,
    leakage,
    numeric_propagate,
    to_interaction_picture,
)
from .protocol import (
    MeasurementRecord,
    PostSelectionError,
    ProtocolConfig,
    bell_target,
    bell_time,
    evolve_protocol,
    measure_qubit,
    prepare_initial,
    run_bell_protocol,
)

__version__ = "0.1.0"
