"""Observable-aware product-formula simulation toolkit.

Sparse Pauli algebra, light-cone reduced and color-ordered Trotter circuits,
explicit commutator error bounds, and a dense desk-scale oracle for
verifying every claim at n <= 12 qubits.
"""

from .pauli import (
    COEFF_EPS,
    DENSE_LIMIT,
    PauliString,
    PauliSum,
    commutator,
    multiply,
    normalized_four_norm,
    normalized_two_norm,
    one_norm,
    operator_norm,
)
from .lightcone import (
    Coloring,
    InteractionHypergraph,
    InteractiveDecomposition,
    build_hypergraph,
    color_hypergraph,
    cube_regroup,
    edge_sets,
    propagate,
)
from .models import (
    LatticeSpec,
    build_mfi,
    build_nn_lattice,
    build_power_law,
    build_tfi,
    chain,
    group_commuting,
    load_pauli_file,
    save_pauli_file,
    truncate_power_law,
)
from .trotter import (
    Circuit,
    Gate,
    SuzukiSchedule,
    chromatic_formula,
    gate_count,
    reduced_formula,
    standard_formula,
    suzuki_schedule,
    virtual_formula,
)
from .bounds import (
    BoundReport,
    random_1design_bound,
    random_2design_bound,
    random_bound_no_observable,
    steps_for_epsilon,
    thm1_bound,
    thm2_bound,
    truncation_bound,
    worst_case_p2_bound,
)
from .exactsim import (
    EmpiricalError,
    RatePoint,
    apply_circuit,
    apply_circuit_to_state,
    empirical_average_error,
    exact_evolution,
    heisenberg_error,
    materialize,
    rate_function,
    sample_haar,
    spectral_norm,
    zero_projector,
)

__version__ = "0.1.0"
