"""Majority depth of planar point sets.

Exact oracles (naive, angular sweep, dual arrangement identity), a sampling
estimator driven by an approximate majority-side test, and the machinery the
test rides on: partition trees, low-crossing matchings, and halving chains.
"""

from .datasets import DISTRIBUTIONS, gen_points
from .depth import (
    DepthEstimate,
    depth_exact_naive,
    depth_exact_sweep,
    depth_via_dual_identity,
    estimate_depth,
    pilot_p_hat,
    sample_pair,
    sample_size_for,
)
from .geometry import (
    COORD_BOUND,
    CoordinateBoundError,
    DegeneratePairError,
    GeneralPositionError,
    GeometryError,
    Halfplane,
    ParallelDualsError,
    Point,
    PointFileError,
    count_in_halfplane_naive,
    halfplane_from_pair,
    orient,
    read_points,
    validate_general_position,
    write_points,
)
from .halving import BudgetError, HalvingChain, build_chain, load_chain, save_chain
from .lowcross import matching_for_points
from .medside import (
    ExactMajorityOracle,
    LevelHistogram,
    MajorityOracle,
    level_histogram,
)
from .ptree import PartitionTree, build_partition_tree

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "COORD_BOUND",
    "CoordinateBoundError",
    "DISTRIBUTIONS",
    "DegeneratePairError",
    "DepthEstimate",
    "ExactMajorityOracle",
    "GeneralPositionError",
    "GeometryError",
    "Halfplane",
    "HalvingChain",
    "LevelHistogram",
    "MajorityOracle",
    "ParallelDualsError",
    "PartitionTree",
    "Point",
    "PointFileError",
    "build_chain",
    "build_partition_tree",
    "count_in_halfplane_naive",
    "depth_exact_naive",
    "depth_exact_sweep",
    "depth_via_dual_identity",
    "estimate_depth",
    "gen_points",
    "halfplane_from_pair",
    "level_histogram",
    "load_chain",
    "matching_for_points",
    "orient",
    "pilot_p_hat",
    "read_points",
    "sample_pair",
    "sample_size_for",
    "save_chain",
    "validate_general_position",
    "write_points",
    "__version__",
]
