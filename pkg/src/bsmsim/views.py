"""Per-frame partition views: the unit of work behind the API and CLI.

A FrameView is one frame run through the full pipeline at a given DSRC
range, with per-vehicle partition labels and the stage timings for this
computation. Ranges are rounded to whole meters before computing so that
cached and freshly computed responses are interchangeable.
"""

from __future__ import annotations

import threading
import time
from collections import OrderedDict
from dataclasses import dataclass

from bsmsim.bsm_data import Frame
from bsmsim.connectivity import compute_closure, extract_partitions, threshold
from bsmsim.geodesy import build_distance_matrix


@dataclass(frozen=True)
class VehicleView:
    vehicle_id: str
    latitude: float
    longitude: float
    speed: float
    partition_index: int
    color_index: int
    character: str


@dataclass(frozen=True)
class FrameView:
    timestamp: int
    range_m: float
    vehicles: tuple[VehicleView, ...]
    partition_count: int
    squarings: int
    distance_ms: float
    closure_ms: float

    def to_dict(self) -> dict:
        return {
            "timestamp": self.timestamp,
            "range_m": self.range_m,
            "vehicles": [
                {
                    "vehicle_id": v.vehicle_id,
                    "latitude": v.latitude,
                    "longitude": v.longitude,
                    "speed": v.speed,
                    "partition_index": v.partition_index,
                    "color_index": v.color_index,
                    "character": v.character,
                }
                for v in self.vehicles
            ],
            "partition_count": self.partition_count,
            "squarings": self.squarings,
            "distance_ms": self.distance_ms,
            "closure_ms": self.closure_ms,
        }


def effective_range(range_m: float) -> float:
    """Ranges are cached per whole meter; sub-meter requests clamp to 1 m."""
    return float(max(1, round(range_m)))


def compute_frame_view(frame: Frame, range_m: float) -> FrameView:
    if range_m <= 0:
        raise ValueError(f"range_m must be positive, got {range_m}")
    range_used = effective_range(range_m)

    t0 = time.perf_counter()
    dist = build_distance_matrix(frame)
    t1 = time.perf_counter()
    adj = threshold(dist, range_used)
    t2 = time.perf_counter()
    conn = compute_closure(adj)
    parts = extract_partitions(conn, frame)
    t3 = time.perf_counter()

    membership = parts.membership()
    vehicles = []
    for record in frame.vehicles:
        idx = membership[record.vehicle_id]
        part = parts.partitions[idx]
        vehicles.append(
            VehicleView(
                record.vehicle_id,
                record.latitude,
                record.longitude,
                record.speed,
                idx,
                part.color_index,
                part.character,
            )
        )
    return FrameView(
        timestamp=frame.timestamp,
        range_m=range_used,
        vehicles=tuple(vehicles),
        partition_count=len(parts),
        squarings=conn.squarings,
        distance_ms=(t1 - t0) * 1000.0,
        closure_ms=(t3 - t2) * 1000.0,
    )


class FrameViewCache:
    """Bounded LRU of computed FrameViews keyed by (dataset, timestamp, range)."""

    def __init__(self, maxsize: int = 1024):
        self.maxsize = maxsize
        self._lock = threading.Lock()
        self._entries: OrderedDict[tuple[str, int, float], FrameView] = OrderedDict()

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)

    def get_or_compute(self, dataset_id: str, frame: Frame, range_m: float) -> FrameView:
        key = (dataset_id, frame.timestamp, effective_range(range_m))
        with self._lock:
            view = self._entries.get(key)
            if view is not None:
                self._entries.move_to_end(key)
                return view
        view = compute_frame_view(frame, range_m)
        with self._lock:
            self._entries[key] = view
            self._entries.move_to_end(key)
            while len(self._entries) > self.maxsize:
                self._entries.popitem(last=False)
        return view
