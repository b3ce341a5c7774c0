"""Density contrast subgraph mining on signed difference graphs."""

__version__ = "0.1.0"

from .dcsad import SubsetResult, dcs_greedy, greedy_peel, oracle_gap
from .dcsga import (
    Embedding,
    GAResult,
    SolverConfig,
    SolverStats,
    coordinate_descent,
    expansion_step,
    kkt_residual,
    new_sea,
    refine_to_clique,
    replicator_shrink,
    sea_refine,
    seacd,
    smart_init_order,
    two_coord_update,
)
from .graph import (
    DifferenceGraph,
    WeightedGraph,
    WeightTransform,
    average_degree_diff,
    build_difference,
    connected_components,
    core_numbers,
    edge_density_diff,
    flip_signs,
    graph_affinity_diff,
    load_edge_list,
    transform_weights,
    write_edge_list,
)
from .oracle import oracle_clique_affinity, oracle_dcsad, oracle_dcsga
