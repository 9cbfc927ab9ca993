"""Mixed-order spectral clustering on edges and triangles."""

__version__ = "0.1.0"

from .clustering import (
    DEFAULT_SEED,
    KMEANS,
    METHODS,
    ClusterRun,
    Partition,
    bipartition,
    bipartition_all,
    embedding,
    kmeans,
    mosc_gl,
    mosc_rw,
    msc,
    multiway,
    run_method,
    sc_ng,
    sc_shi,
    spectral_ordering,
    stsc,
)
from .cuts import Criterion, CutContext, SweepCurve, criterion_value, sweep_all, sweep_cut
from .datasets import load_dataset, load_truth, load_zachary
from .errors import (
    ConfigError,
    DatasetNotFoundError,
    DisconnectedGraphError,
    DomainError,
    EigenSolverError,
    EmptyGraphError,
    IsolatedNodeError,
    MixspecError,
    ParseError,
    UndefinedCriterionError,
)
from .graph import Graph, TriangleIndex, enumerate_triangles, load_edge_list
from .metrics import epsilon_nodes, epsilon_structures, evaluate, nmi, ocut
from .operators import build_gl, build_rw, mixed_adjacency, reduced_similarity, transition_matrix
from .selection import LambdaGrid, auto_lambda_cut, auto_lambda_density, oracle_lambda

__all__ = [
    "__version__",
    "auto_lambda_cut",
    "auto_lambda_density",
    "bipartition",
    "bipartition_all",
    "build_gl",
    "build_rw",
    "ClusterRun",
    "ConfigError",
    "Criterion",
    "criterion_value",
    "CutContext",
    "DatasetNotFoundError",
    "DEFAULT_SEED",
    "DisconnectedGraphError",
    "DomainError",
    "EigenSolverError",
    "embedding",
    "EmptyGraphError",
    "enumerate_triangles",
    "epsilon_nodes",
    "epsilon_structures",
    "evaluate",
    "Graph",
    "IsolatedNodeError",
    "KMEANS",
    "kmeans",
    "LambdaGrid",
    "load_dataset",
    "load_edge_list",
    "load_truth",
    "load_zachary",
    "METHODS",
    "mixed_adjacency",
    "MixspecError",
    "mosc_gl",
    "mosc_rw",
    "msc",
    "multiway",
    "nmi",
    "ocut",
    "oracle_lambda",
    "ParseError",
    "Partition",
    "reduced_similarity",
    "run_method",
    "sc_ng",
    "sc_shi",
    "spectral_ordering",
    "stsc",
    "sweep_all",
    "sweep_cut",
    "SweepCurve",
    "transition_matrix",
    "TriangleIndex",
    "UndefinedCriterionError",
]
