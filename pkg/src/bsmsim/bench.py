"""Stage-level benchmark harness for the replay pipeline.

For every frame the harness times four stages independently: the distance
matrix build, the boolean-squaring closure (with partition extraction), the
union-find oracle, and serialization of the frame view to wire JSON (the
nearest headless analogue of display time). Wall-clock durations come from
the monotonic clock and are reported in fractional milliseconds.

Results land in two files when a log directory is given: one NDJSON record
per measured frame repetition, and a per-N summary CSV with a fitted
log-log slope per stage.
"""

from __future__ import annotations

import csv
import json
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from bsmsim.bsm_data import Dataset, Frame
from bsmsim.connectivity import PartitionSet, compute_closure, extract_partitions, partition_oracle, threshold
from bsmsim.generator import DEFAULT_RECTANGLE, Rectangle, random_frame
from bsmsim.geodesy import build_distance_matrix

STAGES = ("distance", "closure", "oracle", "serialize")


@dataclass(frozen=True)
class StageTiming:
    """Measured durations for one processing of one frame."""

    timestamp: int
    vehicle_count: int
    distance_ms: float
    closure_ms: float
    oracle_ms: float
    serialize_ms: float
    squarings: int
    partition_count: int
    distance_evaluations: int

    def stage_ms(self, stage: str) -> float:
        return getattr(self, f"{stage}_ms")

    def to_dict(self) -> dict:
        return {
            "timestamp": self.timestamp,
            "vehicle_count": self.vehicle_count,
            "distance_ms": self.distance_ms,
            "closure_ms": self.closure_ms,
            "oracle_ms": self.oracle_ms,
            "serialize_ms": self.serialize_ms,
            "squarings": self.squarings,
            "partition_count": self.partition_count,
            "distance_evaluations": self.distance_evaluations,
        }


@dataclass(frozen=True)
class StageAggregate:
    n: int
    stage: str
    mean_ms: float
    min_ms: float
    max_ms: float
    count: int


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    points: int
    samples: int


@dataclass(frozen=True)
class PartitionPoint:
    n: int
    mean_partitions: float
    runs: int


@dataclass(frozen=True)
class TrendReport:
    aggregates: tuple[StageAggregate, ...]
    slopes: dict[str, SlopeFit]
    partition_curve: tuple[PartitionPoint, ...]

    def stage_mean(self, n: int, stage: str) -> float:
        for agg in self.aggregates:
            if agg.n == n and agg.stage == stage:
                return agg.mean_ms
        raise KeyError(f"no aggregate for n={n} stage={stage}")

    def to_dict(self) -> dict:
        return {
            "aggregates": [
                {
                    "n": a.n,
                    "stage": a.stage,
                    "mean_ms": a.mean_ms,
                    "min_ms": a.min_ms,
                    "max_ms": a.max_ms,
                    "count": a.count,
                }
                for a in self.aggregates
            ],
            "slopes": {
                stage: {"slope": fit.slope, "points": fit.points, "samples": fit.samples}
                for stage, fit in self.slopes.items()
            },
            "partition_curve": [
                {"n": p.n, "mean_partitions": p.mean_partitions, "runs": p.runs}
                for p in self.partition_curve
            ],
        }


def _process_frame(frame: Frame, range_m: float) -> tuple[StageTiming, PartitionSet]:
    t0 = time.perf_counter()
    dist = build_distance_matrix(frame)
    t1 = time.perf_counter()

    adj = threshold(dist, range_m)

    t2 = time.perf_counter()
    conn = compute_closure(adj)
    parts = extract_partitions(conn, frame)
    t3 = time.perf_counter()

    oracle_parts = partition_oracle(adj, frame)
    t4 = time.perf_counter()

    if parts.groups() != oracle_parts.groups():
        raise RuntimeError(
            f"closure and oracle partitions disagree at t={frame.timestamp}"
        )

    t5 = time.perf_counter()
    membership = parts.membership()
    payload = {
        "timestamp": frame.timestamp,
        "vehicles": [
            {
                "vehicle_id": v.vehicle_id,
                "latitude": v.latitude,
                "longitude": v.longitude,
                "speed": v.speed,
                "partition_index": membership[v.vehicle_id],
            }
            for v in frame.vehicles
        ],
        "partition_count": len(parts),
    }
    json.dumps(payload)
    t6 = time.perf_counter()

    timing = StageTiming(
        timestamp=frame.timestamp,
        vehicle_count=len(frame.vehicles),
        distance_ms=(t1 - t0) * 1000.0,
        closure_ms=(t3 - t2) * 1000.0,
        oracle_ms=(t4 - t3) * 1000.0,
        serialize_ms=(t6 - t5) * 1000.0,
        squarings=conn.squarings,
        partition_count=len(parts),
        distance_evaluations=dist.evaluations,
    )
    return timing, parts


def _bench_frame(frame: Frame, range_m: float, repetitions: int) -> list[StageTiming]:
    # warm-up pass, excluded from results
    _, baseline = _process_frame(frame, range_m)
    timings = []
    for _ in range(repetitions):
        timing, parts = _process_frame(frame, range_m)
        if parts.groups() != baseline.groups():
            raise RuntimeError(
                f"non-deterministic partitioning at t={frame.timestamp}"
            )
        timings.append(timing)
    return timings


def run_benchmark(
    dataset: Dataset,
    range_m: float,
    repetitions: int,
    log_dir: str | Path | None = None,
    parallel: bool = False,
) -> list[StageTiming]:
    """Process every frame `repetitions` times, timing each stage.

    Each frame gets one untimed warm-up pass first. With parallel=True
    frames are processed concurrently; partition outputs are identical
    either way, only the wall-clock numbers shift.
    """
    if not dataset.frames:
        raise ValueError("dataset has no frames")
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")

    if parallel:
        with ThreadPoolExecutor() as pool:
            per_frame = list(
                pool.map(lambda f: _bench_frame(f, range_m, repetitions), dataset.frames)
            )
    else:
        per_frame = [_bench_frame(f, range_m, repetitions) for f in dataset.frames]

    timings = [t for frame_timings in per_frame for t in frame_timings]
    if log_dir is not None:
        write_bench_logs(timings, aggregate_timings(timings), log_dir)
    return timings


def aggregate_timings(timings: list[StageTiming]) -> TrendReport:
    """Collapse raw timings into per-N stage aggregates, slope fits, and the
    mean-partitions curve."""
    by_n: dict[int, list[StageTiming]] = {}
    for t in timings:
        by_n.setdefault(t.vehicle_count, []).append(t)

    aggregates = []
    for n in sorted(by_n):
        for stage in STAGES:
            values = [t.stage_ms(stage) for t in by_n[n]]
            aggregates.append(
                StageAggregate(
                    n=n,
                    stage=stage,
                    mean_ms=float(np.mean(values)),
                    min_ms=float(min(values)),
                    max_ms=float(max(values)),
                    count=len(values),
                )
            )

    slopes = {}
    for stage in STAGES:
        points = [
            (a.n, a.mean_ms, a.count) for a in aggregates if a.stage == stage and a.mean_ms > 0
        ]
        if len({n for n, _, _ in points}) >= 2:
            ns = np.array([p[0] for p in points], dtype=float)
            means = np.array([p[1] for p in points], dtype=float)
            slope = float(np.polyfit(np.log(ns), np.log(means), 1)[0])
            slopes[stage] = SlopeFit(slope, points=len(points), samples=sum(p[2] for p in points))

    curve = tuple(
        PartitionPoint(
            n=n,
            mean_partitions=float(np.mean([t.partition_count for t in by_n[n]])),
            runs=len(by_n[n]),
        )
        for n in sorted(by_n)
    )
    return TrendReport(tuple(aggregates), slopes, curve)


def partition_density_sweep(
    n_values: list[int],
    runs_per_n: int,
    range_m: float,
    seed: int,
    rectangle: Rectangle = DEFAULT_RECTANGLE,
) -> TrendReport:
    """Monte-Carlo partition counts over vehicle density.

    For each N, draws `runs_per_n` independent single-frame placements in
    the rectangle and processes them at the given range. Child seeds derive
    from the master seed, so the whole sweep is reproducible.
    """
    if not n_values:
        raise ValueError("n_values must be non-empty")
    if runs_per_n < 1:
        raise ValueError("runs_per_n must be >= 1")

    master = random.Random(seed)
    timings = []
    for n in n_values:
        for _ in range(runs_per_n):
            rng = random.Random(master.getrandbits(64))
            frame = random_frame(n, rectangle, rng, timestamp=0)
            timing, _ = _process_frame(frame, range_m)
            timings.append(timing)
    return aggregate_timings(timings)


def write_bench_logs(
    timings: list[StageTiming],
    report: TrendReport,
    log_dir: str | Path,
    stamp: str | None = None,
) -> tuple[Path, Path]:
    """Write the NDJSON timing log and the per-N summary CSV.

    Returns (ndjson_path, summary_csv_path).
    """
    log_dir = Path(log_dir)
    log_dir.mkdir(parents=True, exist_ok=True)
    stamp = stamp or time.strftime("%Y%m%d-%H%M%S")

    ndjson_path = log_dir / f"bench-{stamp}.ndjson"
    with ndjson_path.open("w", encoding="utf-8") as f:
        for t in timings:
            f.write(json.dumps(t.to_dict()) + "\n")

    csv_path = log_dir / f"bench-{stamp}-summary.csv"
    with csv_path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["n", "stage", "mean_ms", "min_ms", "max_ms", "slope_fit"])
        for a in report.aggregates:
            fit = report.slopes.get(a.stage)
            writer.writerow(
                [
                    a.n,
                    a.stage,
                    f"{a.mean_ms:.6f}",
                    f"{a.min_ms:.6f}",
                    f"{a.max_ms:.6f}",
                    f"{fit.slope:.4f}" if fit else "",
                ]
            )
    return ndjson_path, csv_path
