"""Multi-hop connectivity partitioning by repeated boolean matrix squaring.

The pipeline: threshold the distance matrix at the DSRC range into a boolean
adjacency matrix (reflexive, so squaring is monotone), square it under
boolean algebra until the product equals its operand, then group vehicles
with identical reachability rows into partitions. Each partition gets a
deterministic (color, character) label by its rank.

A union-find pass over the same adjacency matrix serves as an independent
check on the whole squaring path; the two must always produce the same
grouping.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from bsmsim.bsm_data import Frame
from bsmsim.geodesy import DistanceMatrix

COLOR_COUNT = 10
CHARACTERS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


@dataclass(frozen=True)
class AdjacencyMatrix:
    """Single-hop reachability: bits(i,j) = 1 iff i == j or distance <= range_m."""

    bits: np.ndarray
    range_m: float

    @property
    def n(self) -> int:
        return self.bits.shape[0]


@dataclass(frozen=True)
class ConnectivityMatrix:
    """Multi-hop reachability: the fixpoint of repeated boolean squaring.

    `squarings` is the number of boolean multiplications performed before
    the product first matched its operand.
    """

    bits: np.ndarray
    squarings: int

    @property
    def n(self) -> int:
        return self.bits.shape[0]


@dataclass(frozen=True)
class Partition:
    vehicle_ids: tuple[str, ...]
    color_index: int
    character: str


@dataclass(frozen=True)
class PartitionSet:
    """Disjoint vehicle groups for one frame, ordered by minimum vehicle_id."""

    partitions: tuple[Partition, ...]

    def __len__(self) -> int:
        return len(self.partitions)

    def membership(self) -> dict[str, int]:
        """Map vehicle_id -> index of its partition."""
        return {
            vid: idx for idx, part in enumerate(self.partitions) for vid in part.vehicle_ids
        }

    def groups(self) -> set[frozenset[str]]:
        """Label-free view of the grouping, for equivalence comparisons."""
        return {frozenset(p.vehicle_ids) for p in self.partitions}


def label_for_rank(rank: int) -> tuple[int, str]:
    """Deterministic (color, character) for a partition rank.

    Colors cycle fastest; the character advances every COLOR_COUNT ranks.
    Past 260 ranks the labels wrap around.
    """
    return rank % COLOR_COUNT, CHARACTERS[(rank // COLOR_COUNT) % len(CHARACTERS)]


def threshold(dist: DistanceMatrix, range_m: float) -> AdjacencyMatrix:
    """Threshold a distance matrix at the DSRC range (inclusive)."""
    if range_m <= 0:
        raise ValueError(f"range_m must be positive, got {range_m}")
    bits = dist.entries <= range_m
    np.fill_diagonal(bits, True)
    return AdjacencyMatrix(bits, float(range_m))


def boolean_multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Boolean matrix product: out(i,j) = OR over k of (a(i,k) AND b(k,j)).

    numpy's dot on bool operands evaluates exactly this OR-AND semiring.
    """
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"operand a is not square: {a.shape}")
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return np.dot(a.astype(bool), b.astype(bool))


def compute_closure(adj: AdjacencyMatrix) -> ConnectivityMatrix:
    """Square the adjacency matrix until the product equals its operand.

    Because the matrix is reflexive, each squaring doubles the reachable
    path length, so the fixpoint arrives within ceil(log2(max(n-1,1))) + 1
    multiplications.
    """
    current = adj.bits
    squarings = 0
    while True:
        product = boolean_multiply(current, current)
        squarings += 1
        if np.array_equal(product, current):
            return ConnectivityMatrix(product, squarings)
        current = product


def _grouped_partitions(groups: list[list[str]]) -> PartitionSet:
    ordered = sorted(groups, key=min)
    partitions = []
    for rank, ids in enumerate(ordered):
        color, char = label_for_rank(rank)
        partitions.append(Partition(tuple(sorted(ids)), color, char))
    return PartitionSet(tuple(partitions))


def extract_partitions(conn: ConnectivityMatrix, frame: Frame) -> PartitionSet:
    """Group vehicles with identical reachability rows into labeled partitions."""
    ids = frame.vehicle_ids
    if conn.n != len(ids):
        raise ValueError(f"matrix is {conn.n}x{conn.n} but frame has {len(ids)} vehicles")
    by_row: dict[bytes, list[str]] = {}
    for i, vid in enumerate(ids):
        by_row.setdefault(conn.bits[i].tobytes(), []).append(vid)
    return _grouped_partitions(list(by_row.values()))


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:  # path compression
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


def partition_oracle(adj: AdjacencyMatrix, frame: Frame) -> PartitionSet:
    """Connected components by union-find, independent of the squaring path.

    Produces the same grouping and labels as extract_partitions applied to
    the closure of the same adjacency matrix.
    """
    ids = frame.vehicle_ids
    if adj.n != len(ids):
        raise ValueError(f"matrix is {adj.n}x{adj.n} but frame has {len(ids)} vehicles")
    uf = _UnionFind(adj.n)
    rows, cols = np.nonzero(np.triu(adj.bits, k=1))
    for i, j in zip(rows.tolist(), cols.tolist()):
        uf.union(i, j)
    groups: dict[int, list[str]] = {}
    for i, vid in enumerate(ids):
        groups.setdefault(uf.find(i), []).append(vid)
    return _grouped_partitions(list(groups.values()))
