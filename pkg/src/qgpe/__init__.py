"""Variational quantum and classical ground-state solvers for the periodic
1-D Gross-Pitaevskii equation, with overlapping domain decomposition."""

from .backend import BACKEND
from .circuit import (
    AnsatzSpec,
    ansatz_state,
    apply_cnot,
    apply_rx,
    apply_rz,
    cnot_ring,
    cost_gradient_through_circuit,
    initial_parameters,
)
from .config import ExperimentConfig, budget_match, config_from_dict, parse_config
from .dla import (
    DlaReport,
    PauliString,
    ansatz_generators,
    cnot_conjugate,
    lie_closure,
    pauli_commutator,
    sample_cost_variance,
    subdomain_dla_ratio,
)
from .domain_decomp import (
    DdSchedule,
    SubdomainLayout,
    build_layout,
    embed,
    local_cost,
    local_cost_gradient,
    run_classical_dd,
    run_dd,
)
from .exceptions import (
    ConfigurationError,
    DegenerateStateError,
    DimensionError,
    QgpeError,
    SolverError,
)
from .global_vqa import (
    GlobalVqaProblem,
    global_cost,
    global_cost_gradient,
    train_full_domain,
    wavefunction,
)
from .grid import (
    GridSpec,
    ProblemSpec,
    constant_state,
    default_problem,
    energy,
    energy_and_gradient,
    energy_gradient,
    l2_error,
    make_grid,
    norm_squared,
    sample_default_potential,
)
from .newton import NewtonResult, dense_linear_ground_state, newton_ground_state
from .optimize import OptimizerConfig, OptimizeResult, minimize
from .svgplot import emit_plot
from .trace import TraceRow, TrainingTrace, emit_trace, parse_trace

__version__ = "0.1.0"
