from __future__ import annotations

import random

import pytest

from bsmsim.bsm_data import BsmRecord, Frame, parse_csv
from bsmsim.generator import DEFAULT_RECTANGLE, random_frame

# Three vehicles in a line along a meridian, spaced ~899 m apart: at a
# 1000 m range the ends only reach each other through the middle vehicle,
# at 500 m nobody reaches anybody.
CHAIN_CSV = (
    b"vehicle_id,timestamp,latitude,longitude,speed\n"
    b"v1,0,42.30,-83.60,10.0\n"
    b"v2,0,42.308086,-83.60,11.0\n"
    b"v3,0,42.316172,-83.60,12.0\n"
)


@pytest.fixture
def chain_dataset():
    return parse_csv(CHAIN_CSV, source_name="chain")


@pytest.fixture
def chain_frame(chain_dataset):
    return chain_dataset.frames[0]


def make_frame(positions: list[tuple[float, float]], timestamp: int = 0) -> Frame:
    """Frame from bare (lat, lon) pairs; ids v01, v02, ... in order."""
    width = max(2, len(str(len(positions))))
    records = tuple(
        BsmRecord(f"v{i + 1:0{width}d}", timestamp, lat, lon, 0.0)
        for i, (lat, lon) in enumerate(positions)
    )
    return Frame(timestamp, records)


def make_random_frame(n: int, seed: int, timestamp: int = 0) -> Frame:
    return random_frame(n, DEFAULT_RECTANGLE, random.Random(seed), timestamp)
