"""Parsing and storage for abbreviated BSM CSV traces.

The expected input is a plain UTF-8 CSV with a mandatory header row:

    vehicle_id,timestamp,latitude,longitude,speed

Each data row is one abbreviated basic safety message. Records are grouped
into frames by exact timestamp value; within a frame the last record in file
order wins when a vehicle reports twice at the same timestamp, and vehicles
are normalized to ascending vehicle_id order so downstream matrix code sees
a canonical ordering.
"""

from __future__ import annotations

import csv
import hashlib
import io
import threading
from dataclasses import dataclass, field
from pathlib import Path

EXPECTED_HEADER = ("vehicle_id", "timestamp", "latitude", "longitude", "speed")

# Uploads past this size still parse, but get a warning attached: the upload
# path is known to degrade noticeably above ~4500 KB.
OVERSIZE_WARN_KB = 5000


class CsvParseError(ValueError):
    """Raised for malformed BSM CSV input. Carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class BsmRecord:
    """One abbreviated safety message: who, when, where, how fast."""

    vehicle_id: str
    timestamp: int
    latitude: float
    longitude: float
    speed: float

    def __post_init__(self):
        if not self.vehicle_id:
            raise ValueError("vehicle_id must be non-empty")
        if not -90.0 <= self.latitude <= 90.0:
            raise ValueError(f"latitude {self.latitude} out of range [-90, 90]")
        if not -180.0 <= self.longitude <= 180.0:
            raise ValueError(f"longitude {self.longitude} out of range [-180, 180]")
        if self.speed < 0:
            raise ValueError(f"speed {self.speed} must be non-negative")


@dataclass(frozen=True)
class Frame:
    """All vehicle records sharing one timestamp, in ascending vehicle_id order."""

    timestamp: int
    vehicles: tuple[BsmRecord, ...]

    def __post_init__(self):
        ids = [v.vehicle_id for v in self.vehicles]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate vehicle_id in frame at t={self.timestamp}")
        if ids != sorted(ids):
            raise ValueError(f"frame at t={self.timestamp} not in ascending vehicle_id order")

    @property
    def vehicle_ids(self) -> list[str]:
        return [v.vehicle_id for v in self.vehicles]


@dataclass(frozen=True)
class Dataset:
    """An immutable, frame-indexed BSM trace."""

    dataset_id: str
    frames: tuple[Frame, ...]
    source_name: str
    record_count: int
    warnings: tuple[str, ...] = field(default=())

    @property
    def timestamps(self) -> list[int]:
        return [f.timestamp for f in self.frames]

    def frame_at(self, timestamp: int) -> Frame | None:
        for f in self.frames:
            if f.timestamp == timestamp:
                return f
        return None

    def summary(self) -> dict:
        return {
            "dataset_id": self.dataset_id,
            "source_name": self.source_name,
            "frame_count": len(self.frames),
            "record_count": self.record_count,
            "warnings": list(self.warnings),
        }


def _parse_row(row: list[str], line: int) -> BsmRecord:
    if len(row) != 5:
        raise CsvParseError(f"line {line}: expected 5 columns, got {len(row)}", line)
    vehicle_id = row[0].strip()
    if not vehicle_id:
        raise CsvParseError(f"line {line}: empty vehicle_id", line)
    try:
        timestamp = int(row[1].strip())
    except ValueError:
        raise CsvParseError(f"line {line}: non-integer timestamp {row[1]!r}", line) from None
    try:
        latitude = float(row[2])
        longitude = float(row[3])
    except ValueError:
        raise CsvParseError(f"line {line}: non-numeric coordinate", line) from None
    if not -90.0 <= latitude <= 90.0:
        raise CsvParseError(f"line {line}: latitude {latitude} out of range [-90, 90]", line)
    if not -180.0 <= longitude <= 180.0:
        raise CsvParseError(f"line {line}: longitude {longitude} out of range [-180, 180]", line)
    try:
        speed = float(row[4])
    except ValueError:
        raise CsvParseError(f"line {line}: non-numeric speed {row[4]!r}", line) from None
    if speed < 0:
        raise CsvParseError(f"line {line}: negative speed {speed}", line)
    return BsmRecord(vehicle_id, timestamp, latitude, longitude, speed)


def parse_csv(content: bytes, source_name: str = "upload") -> Dataset:
    """Parse raw CSV bytes into a frame-indexed Dataset.

    Deterministic: identical bytes produce an identical Dataset, including
    its id (a content hash). Raises CsvParseError naming the offending line
    for malformed rows, bad bounds, a wrong header, or an empty file.
    """
    try:
        text = content.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise CsvParseError(f"input is not UTF-8 text: {exc}") from None

    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise CsvParseError("no records") from None
    normalized = tuple(h.strip().lower() for h in header)
    if normalized != EXPECTED_HEADER:
        raise CsvParseError(
            f"line 1: bad header {header!r}, expected {','.join(EXPECTED_HEADER)}", 1
        )

    # last-wins per (timestamp, vehicle_id); dict insertion handles it
    by_time: dict[int, dict[str, BsmRecord]] = {}
    count = 0
    for line, row in enumerate(reader, start=2):
        if not row:
            continue
        record = _parse_row(row, line)
        by_time.setdefault(record.timestamp, {})[record.vehicle_id] = record
        count += 1
    if count == 0:
        raise CsvParseError("no records")

    frames = tuple(
        Frame(t, tuple(sorted(by_time[t].values(), key=lambda r: r.vehicle_id)))
        for t in sorted(by_time)
    )
    record_count = sum(len(f.vehicles) for f in frames)

    warnings = []
    size_kb = len(content) / 1024
    if size_kb > OVERSIZE_WARN_KB:
        warnings.append(
            f"file is {size_kb:.0f} KB; uploads above {OVERSIZE_WARN_KB} KB are slow to process"
        )

    dataset_id = hashlib.sha256(content).hexdigest()[:12]
    return Dataset(dataset_id, frames, source_name, record_count, tuple(warnings))


def serialize_csv(dataset: Dataset) -> bytes:
    """Serialize a Dataset back to canonical CSV bytes.

    Floats are written with repr-style shortest round-trip formatting, so
    parse_csv(serialize_csv(d)) reproduces d's frames exactly.
    """
    out = io.StringIO()
    out.write(",".join(EXPECTED_HEADER) + "\n")
    for frame in dataset.frames:
        for v in frame.vehicles:
            out.write(f"{v.vehicle_id},{v.timestamp},{v.latitude!r},{v.longitude!r},{v.speed!r}\n")
    return out.getvalue().encode("utf-8")


class DatasetStore:
    """In-memory dataset registry, safe for concurrent upload and read.

    Datasets are immutable once stored. When a data_dir is configured, the
    raw CSV of every stored dataset is persisted there and reloaded on
    construction, purely as a convenience across restarts.
    """

    def __init__(self, data_dir: str | Path | None = None):
        self._lock = threading.Lock()
        self._datasets: dict[str, Dataset] = {}
        self._data_dir = Path(data_dir) if data_dir else None
        if self._data_dir:
            self._data_dir.mkdir(parents=True, exist_ok=True)
            self._load_existing()

    def _load_existing(self) -> None:
        assert self._data_dir is not None
        for path in sorted(self._data_dir.glob("*.csv")):
            try:
                dataset = parse_csv(path.read_bytes(), source_name=path.stem)
            except CsvParseError:
                continue
            self._datasets[dataset.dataset_id] = dataset

    def put(self, dataset: Dataset, raw_csv: bytes | None = None) -> None:
        with self._lock:
            self._datasets[dataset.dataset_id] = dataset
        if self._data_dir and raw_csv is not None:
            (self._data_dir / f"{dataset.dataset_id}.csv").write_bytes(raw_csv)

    def get(self, dataset_id: str) -> Dataset | None:
        with self._lock:
            return self._datasets.get(dataset_id)

    def summaries(self) -> list[dict]:
        with self._lock:
            datasets = list(self._datasets.values())
        return [d.summary() for d in sorted(datasets, key=lambda d: d.dataset_id)]
