"""Streaming triangle counting for low-degeneracy graphs.

Exact oracles, a degree-oracle estimator, a six-pass streaming estimator
with a sampled triangle-to-edge assignment rule, graph generators with
closed-form ground truth, and a benchmarking CLI.
"""

from .assignment import (
    AssignmentTable,
    EdgeEstimate,
    assign_triangle,
    compute_s,
    is_assigned,
    saturated_estimates,
)
from .errors import (
    ConfigError,
    EdgeListError,
    InputError,
    SchedulingError,
    StreamUsageError,
    TriadError,
)
from .estimator import (
    EstimatorConfig,
    RunReport,
    compute_ell,
    compute_r,
    estimate,
    estimate_once,
)
from .generators import (
    GroundTruth,
    LbSpec,
    gen_book,
    gen_erdos_renyi,
    gen_lb_instance,
    gen_preferential_attachment,
    gen_wheel,
    lb_spec,
)
from .graph import (
    EdgeProfile,
    Graph,
    classify_edges,
    degeneracy,
    degree,
    edge_anchor,
    edge_degree,
    enumerate_triangles,
    per_edge_triangles,
    sum_edge_degrees,
    triangles_exact_cn,
    triangles_exact_naive,
)
from .ideal import DegreeOracle, IdealReport, ideal_estimate, ideal_estimate_once, ideal_sample
from .sampling import (
    ClosureQuery,
    NeighborRequest,
    Reservoir,
    closure_check_pass,
    neighbor_sample_pass,
    substream,
    uniform_edge_sample,
    weighted_pick,
)
from .stream import EdgeStream, StreamStats

__version__ = "0.1.0"

__all__ = [
    "AssignmentTable", "ClosureQuery", "ConfigError", "DegreeOracle",
    "EdgeEstimate", "EdgeListError", "EdgeProfile", "EdgeStream",
    "EstimatorConfig", "Graph", "GroundTruth", "IdealReport", "InputError",
    "LbSpec", "NeighborRequest", "Reservoir", "RunReport", "SchedulingError",
    "StreamStats", "StreamUsageError", "TriadError", "assign_triangle",
    "classify_edges", "closure_check_pass", "compute_ell", "compute_r",
    "compute_s", "degeneracy", "degree", "edge_anchor", "edge_degree",
    "enumerate_triangles", "estimate", "estimate_once", "gen_book",
    "gen_erdos_renyi", "gen_lb_instance", "gen_preferential_attachment",
    "gen_wheel", "ideal_estimate", "ideal_estimate_once", "ideal_sample",
    "is_assigned", "lb_spec", "neighbor_sample_pass", "per_edge_triangles",
    "saturated_estimates", "substream", "sum_edge_degrees",
    "triangles_exact_cn", "triangles_exact_naive", "uniform_edge_sample",
    "weighted_pick",
]
