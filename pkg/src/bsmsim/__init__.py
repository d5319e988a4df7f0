"""BSM trace replay with multi-hop DSRC connectivity partitioning.

Ingests abbreviated basic-safety-message CSV traces (or generates synthetic
ones), computes per-timestamp vehicle partitions by repeated boolean matrix
squaring, and benchmarks each pipeline stage. A small HTTP service exposes
the pipeline to the bundled web frontend.
"""

from bsmsim.bsm_data import BsmRecord, CsvParseError, Dataset, DatasetStore, Frame, parse_csv, serialize_csv
from bsmsim.connectivity import (
    AdjacencyMatrix,
    ConnectivityMatrix,
    Partition,
    PartitionSet,
    boolean_multiply,
    compute_closure,
    extract_partitions,
    partition_oracle,
    threshold,
)
from bsmsim.generator import DEFAULT_RECTANGLE, GeneratorConfig, Rectangle, generate, random_frame
from bsmsim.geodesy import EARTH_RADIUS_M, DistanceMatrix, build_distance_matrix, great_circle_distance
from bsmsim.views import FrameView, compute_frame_view

__version__ = "0.1.0"

__all__ = [
    "AdjacencyMatrix",
    "BsmRecord",
    "ConnectivityMatrix",
    "CsvParseError",
    "Dataset",
    "DatasetStore",
    "DEFAULT_RECTANGLE",
    "DistanceMatrix",
    "EARTH_RADIUS_M",
    "Frame",
    "FrameView",
    "GeneratorConfig",
    "Partition",
    "PartitionSet",
    "Rectangle",
    "boolean_multiply",
    "build_distance_matrix",
    "compute_closure",
    "compute_frame_view",
    "extract_partitions",
    "generate",
    "great_circle_distance",
    "parse_csv",
    "partition_oracle",
    "random_frame",
    "serialize_csv",
    "threshold",
]
