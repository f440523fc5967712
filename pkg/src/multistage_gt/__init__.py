"""Multistage combinatorial group testing via consistency hypergraphs."""

from ._kernels import BACKEND
from .analysis import BoundReport, entropy, reference_bounds, verify_exhaustive
from .codes import (
    BinaryCode,
    ConstantWeightCode,
    OutcomeVector,
    QaryCode,
    concatenate,
    enumerate_constant_weight,
    full_qary_code,
    layer_weights,
    outcome_vector,
    random_constant_weight_code,
)
from .errors import ConstructionError, ContractError, GroupTestingError, InputError
from .hypergraph import (
    Coloring,
    ConsistencyHypergraph,
    adjacency,
    build_hypergraph,
    degree,
    greedy_coloring,
)
from .oracle import Oracle, StageTranscript, total_tests
from .strategy_generic import GenericStrategyConfig, run_generic
from .strategy_s2 import (
    P0,
    S2Params,
    S2RunReport,
    consistent_partners,
    run_s2,
    select_params,
    worst_case_bound,
)

__version__ = "0.1.0"
