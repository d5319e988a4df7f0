"""Synthetic BSM trace generation for performance testing.

Vehicles are placed uniformly at random (independently per frame, no motion
model) inside a fixed lat/lon rectangle over Ann Arbor, MI. Frames are
emitted at a fixed interval until adding another would push the serialized
CSV to the file-size cap.

The PRNG is Python's random.Random (Mersenne Twister), seeded from the
config; draw order is (latitude, longitude, speed) per vehicle, vehicles in
id order, frames in time order. That order is part of the reproducibility
contract: identical seed means byte-identical output.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from bsmsim.bsm_data import BsmRecord, Dataset, Frame, parse_csv, EXPECTED_HEADER


@dataclass(frozen=True)
class Rectangle:
    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float

    def __post_init__(self):
        if not (self.lat_min < self.lat_max and self.lon_min < self.lon_max):
            raise ValueError("rectangle bounds must satisfy min < max on both axes")

    def contains(self, lat: float, lon: float) -> bool:
        return self.lat_min <= lat <= self.lat_max and self.lon_min <= lon <= self.lon_max


# Test rectangle over Ann Arbor, MI: ~24.2 km x 14.4 km, ~348 km^2.
DEFAULT_RECTANGLE = Rectangle(
    lat_min=42.226673, lat_max=42.356186, lon_min=-83.816270, lon_max=-83.522030
)

MAX_SPEED_MPS = 30.0


@dataclass(frozen=True)
class GeneratorConfig:
    vehicles_per_frame: int
    rectangle: Rectangle = DEFAULT_RECTANGLE
    frame_interval_ms: int = 100
    max_file_kb: int = 5000
    seed: int = 0

    def __post_init__(self):
        if self.vehicles_per_frame < 1:
            raise ValueError("vehicles_per_frame must be >= 1")
        if self.max_file_kb <= 0:
            raise ValueError("max_file_kb must be positive")
        if self.frame_interval_ms <= 0:
            raise ValueError("frame_interval_ms must be positive")


def vehicle_ids(n: int) -> list[str]:
    width = max(4, len(str(n)))
    return [f"v{i:0{width}d}" for i in range(1, n + 1)]


def random_frame(
    n: int, rectangle: Rectangle, rng: random.Random, timestamp: int = 0
) -> Frame:
    """One frame of n uniformly placed vehicles. Shared by generate() and
    the benchmark density sweeps."""
    records = []
    for vid in vehicle_ids(n):
        lat = rng.uniform(rectangle.lat_min, rectangle.lat_max)
        lon = rng.uniform(rectangle.lon_min, rectangle.lon_max)
        speed = rng.uniform(0.0, MAX_SPEED_MPS)
        records.append(BsmRecord(vid, timestamp, round(lat, 6), round(lon, 6), round(speed, 2)))
    return Frame(timestamp, tuple(records))


def _frame_rows(frame: Frame) -> str:
    return "".join(
        f"{v.vehicle_id},{v.timestamp},{v.latitude:.6f},{v.longitude:.6f},{v.speed:.2f}\n"
        for v in frame.vehicles
    )


def generate(config: GeneratorConfig) -> tuple[Dataset, bytes]:
    """Generate a synthetic dataset and its CSV serialization.

    Emits the largest number of frames whose serialized CSV stays strictly
    under max_file_kb. Raises ValueError (naming the minimum viable cap)
    when even a single frame does not fit.
    """
    rng = random.Random(config.seed)
    cap_bytes = config.max_file_kb * 1024
    header = ",".join(EXPECTED_HEADER) + "\n"
    chunks = [header]
    size = len(header.encode())

    frame_count = 0
    while True:
        timestamp = frame_count * config.frame_interval_ms
        frame = random_frame(config.vehicles_per_frame, config.rectangle, rng, timestamp)
        rows = _frame_rows(frame)
        rows_size = len(rows.encode())
        if size + rows_size >= cap_bytes:
            if frame_count == 0:
                min_kb = (size + rows_size) // 1024 + 1
                raise ValueError(
                    f"one frame of {config.vehicles_per_frame} vehicles needs at least "
                    f"{min_kb} KB; raise max_file_kb from {config.max_file_kb}"
                )
            break
        chunks.append(rows)
        size += rows_size
        frame_count += 1

    content = "".join(chunks).encode("utf-8")
    source = f"generated-n{config.vehicles_per_frame}-seed{config.seed}"
    return parse_csv(content, source_name=source), content
