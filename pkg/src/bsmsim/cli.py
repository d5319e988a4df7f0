"""Command-line interface: ingest, generate, partition, bench, sweep, serve.

Exit codes: 0 success, 1 input/usage error, 2 internal error. The bench and
sweep subcommands write their delimited logs and the matching trend figures
into --out-dir.
"""

from __future__ import annotations

import argparse
import json
import os
import socket
import sys
import time
from pathlib import Path

from bsmsim.bench import aggregate_timings, partition_density_sweep, run_benchmark, write_bench_logs
from bsmsim.bsm_data import CsvParseError, DatasetStore, parse_csv
from bsmsim.generator import GeneratorConfig, generate
from bsmsim.views import compute_frame_view

DEFAULT_RANGE_M = 1000.0


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; this CLI's contract is exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="bsmsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="validate a BSM CSV and print its summary")
    p.add_argument("csv", type=Path)

    p = sub.add_parser("generate", help="write a synthetic BSM CSV")
    p.add_argument("--n", type=int, required=True, help="vehicles per frame")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-kb", type=int, default=5000, help="file size cap in KB")
    p.add_argument("--interval-ms", type=int, default=100)
    p.add_argument("--out", type=Path, default=None)

    p = sub.add_parser("partition", help="print the partition view of one frame")
    p.add_argument("csv", type=Path)
    p.add_argument("--timestamp", type=int, required=True)
    p.add_argument("--range", type=float, default=DEFAULT_RANGE_M, dest="range_m")

    p = sub.add_parser("bench", help="time every pipeline stage over a dataset")
    p.add_argument("csv", type=Path)
    p.add_argument("--range", type=float, default=DEFAULT_RANGE_M, dest="range_m")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--out-dir", type=Path, default=Path("."))
    p.add_argument("--parallel", action="store_true", help="process frames concurrently")

    p = sub.add_parser("sweep", help="Monte-Carlo partition counts over vehicle density")
    p.add_argument("--n-list", type=str, required=True, help="comma-separated vehicle counts")
    p.add_argument("--runs", type=int, default=30)
    p.add_argument("--range", type=float, default=DEFAULT_RANGE_M, dest="range_m")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", type=Path, default=Path("."))

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=int(os.environ.get("PORT", "8000")))
    p.add_argument("--host", type=str, default="127.0.0.1")
    p.add_argument("--data-dir", type=Path, default=os.environ.get("DATA_DIR"))
    p.add_argument("--static-dir", type=Path, default=os.environ.get("STATIC_DIR"))

    return parser


def _cmd_ingest(args) -> int:
    dataset = parse_csv(args.csv.read_bytes(), source_name=args.csv.name)
    print(json.dumps(dataset.summary(), indent=2))
    return 0


def _cmd_generate(args) -> int:
    config = GeneratorConfig(
        vehicles_per_frame=args.n,
        frame_interval_ms=args.interval_ms,
        max_file_kb=args.max_kb,
        seed=args.seed,
    )
    dataset, content = generate(config)
    out = args.out or Path(f"generated-n{args.n}-seed{args.seed}.csv")
    out.write_bytes(content)
    summary = dataset.summary()
    summary["path"] = str(out)
    summary["size_kb"] = round(len(content) / 1024, 1)
    print(json.dumps(summary, indent=2))
    return 0


def _cmd_partition(args) -> int:
    dataset = parse_csv(args.csv.read_bytes(), source_name=args.csv.name)
    frame = dataset.frame_at(args.timestamp)
    if frame is None:
        print(
            f"no frame at t={args.timestamp}; dataset spans "
            f"{dataset.timestamps[0]}..{dataset.timestamps[-1]}",
            file=sys.stderr,
        )
        return 1
    view = compute_frame_view(frame, args.range_m)
    print(json.dumps(view.to_dict(), indent=2))
    return 0


def _cmd_bench(args) -> int:
    from bsmsim.plots import render_report_figures

    dataset = parse_csv(args.csv.read_bytes(), source_name=args.csv.name)
    timings = run_benchmark(dataset, args.range_m, args.reps, parallel=args.parallel)
    report = aggregate_timings(timings)
    stamp = time.strftime("%Y%m%d-%H%M%S")
    ndjson_path, csv_path = write_bench_logs(timings, report, args.out_dir, stamp=stamp)
    figures = render_report_figures(report, args.out_dir, f"bench-{stamp}")
    print(json.dumps(report.to_dict(), indent=2))
    for path in [ndjson_path, csv_path, *figures]:
        print(f"wrote {path}", file=sys.stderr)
    return 0


def _cmd_sweep(args) -> int:
    from bsmsim.plots import render_report_figures

    try:
        n_values = [int(tok) for tok in args.n_list.split(",") if tok.strip()]
    except ValueError:
        print(f"--n-list must be comma-separated integers, got {args.n_list!r}", file=sys.stderr)
        return 1
    if not n_values:
        print("--n-list is empty", file=sys.stderr)
        return 1

    report = partition_density_sweep(n_values, args.runs, args.range_m, args.seed)
    stamp = time.strftime("%Y%m%d-%H%M%S")
    args.out_dir.mkdir(parents=True, exist_ok=True)
    curve_path = args.out_dir / f"sweep-{stamp}-partitions.csv"
    with curve_path.open("w", encoding="utf-8") as f:
        f.write("n,mean_partitions,runs\n")
        for point in report.partition_curve:
            f.write(f"{point.n},{point.mean_partitions:.4f},{point.runs}\n")
    figures = render_report_figures(report, args.out_dir, f"sweep-{stamp}")
    print(json.dumps(report.to_dict(), indent=2))
    for path in [curve_path, *figures]:
        print(f"wrote {path}", file=sys.stderr)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from bsmsim.service import create_app

    static_dir = args.static_dir
    if static_dir is None:
        bundled = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        static_dir = bundled if bundled.is_dir() else None

    store = DatasetStore(data_dir=args.data_dir)
    app = create_app(store=store, static_dir=static_dir)

    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    sock.bind((args.host, args.port))
    host, port = sock.getsockname()[:2]
    print(f"serving on http://{host}:{port}", flush=True)

    config = uvicorn.Config(app, log_level="info")
    server = uvicorn.Server(config)
    server.run(sockets=[sock])
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "generate": _cmd_generate,
    "partition": _cmd_partition,
    "bench": _cmd_bench,
    "sweep": _cmd_sweep,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (CsvParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 130
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
