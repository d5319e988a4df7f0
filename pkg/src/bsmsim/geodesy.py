"""Great-circle distances and the per-frame distance matrix.

Distances use the haversine formula on a sphere of IAU mean radius
6 371 008.8 m. At vehicle-to-vehicle scales (well under 100 km) the
spherical error is far below the DSRC range granularity that consumes
these values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from bsmsim.bsm_data import Frame

EARTH_RADIUS_M = 6_371_008.8


def great_circle_distance(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Haversine distance in meters between two lat/lon points in degrees."""
    phi1 = math.radians(lat1)
    phi2 = math.radians(lat2)
    dphi = phi2 - phi1
    dlam = math.radians(lon2 - lon1)
    a = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(math.sqrt(a))


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric pairwise-distance matrix for one frame.

    Row/column order is the frame's canonical ascending vehicle_id order.
    `evaluations` counts the pairwise distance computations performed to
    build the matrix, which is always n(n-1)/2: each unordered pair is
    evaluated once and mirrored.
    """

    vehicle_ids: tuple[str, ...]
    entries: np.ndarray
    evaluations: int

    @property
    def n(self) -> int:
        return len(self.vehicle_ids)


def build_distance_matrix(frame: Frame) -> DistanceMatrix:
    """Compute all pairwise great-circle distances for a frame."""
    vehicles = frame.vehicles
    n = len(vehicles)
    entries = np.zeros((n, n), dtype=np.float64)
    evaluations = 0
    for i in range(n):
        vi = vehicles[i]
        lat_i, lon_i = vi.latitude, vi.longitude
        for j in range(i + 1, n):
            vj = vehicles[j]
            d = great_circle_distance(lat_i, lon_i, vj.latitude, vj.longitude)
            entries[i, j] = d
            entries[j, i] = d
            evaluations += 1
    return DistanceMatrix(tuple(v.vehicle_id for v in vehicles), entries, evaluations)
