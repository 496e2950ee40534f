"""``tmotif`` command line: estimate or count temporal motifs in an edge-list file.

Reports go to stdout (JSON by default), logs to stderr.  Exit codes: 0 on
success, 1 for usage or configuration errors, 2 for I/O and input format
errors, 3 when the exact search or path enumeration exceeds its cap.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import re
import sys
import time

from . import __version__
from .estimator import auto_samples, estimate, prepare, relative_error
from .exact import DEFAULT_CAP, WorkCapExceeded, exact_count_parallel
from .graph import GraphFormatError, load_graph
from .motif import MotifError, resolve_motif
from .sampler import EnumerationCapExceeded

log = logging.getLogger("tmotif")

SCHEMA_VERSION = 1
EXIT_USAGE, EXIT_IO, EXIT_CAP = 1, 2, 3

_UNITS = {"": 1, "s": 1, "m": 60, "h": 3600, "D": 86400, "W": 604800}
_DURATION = re.compile(r"^\s*(\d+)\s*([smhDW]?)\s*$")


class UsageError(Exception):
    pass


def parse_duration(text: str) -> int:
    """``"3600"``, ``"90s"``, ``"15m"``, ``"2h"``, ``"1D"``, ``"1W"`` to seconds."""
    match = _DURATION.match(str(text))
    if not match:
        raise argparse.ArgumentTypeError(
            f"bad duration {text!r}: want an integer with optional suffix s, m, h, D or W")
    return int(match.group(1)) * _UNITS[match.group(2)]


def _samples(text: str):
    if text == "auto":
        return text
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--samples takes an integer or 'auto', not {text!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", required=True, help="edge list: 'src dst timestamp' per line")
    p.add_argument("--format", default="whitespace", choices=("whitespace", "csv"))
    p.add_argument("--motif", required=True, help="preset (M3-0, M3-1, M4-0..M4-5) or motif file")
    p.add_argument("--delta", required=True, type=parse_duration,
                   help="time window, seconds or with suffix s/m/h/D/W")
    p.add_argument("--samples", type=_samples, default=100_000,
                   help="number of sampled paths, or 'auto' (default 100000)")
    p.add_argument("--eps", type=float, default=0.1, help="relative error target for auto")
    p.add_argument("--gamma", type=float, default=0.05, help="failure probability for auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--lenient-ties", action="store_true",
                   help="let equal timestamps match in input order")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="work cap for exact search")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tmotif", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="estimate and/or count one motif")
    _common(run)
    run.add_argument("--mode", choices=("estimate", "exact", "both"), default="estimate")
    run.add_argument("--output", choices=("json", "text"), default="json")
    run.add_argument("--diagnostics", action="store_true",
                     help="include anchor, sampler and auto-k details")
    run.add_argument("--stable-output", action="store_true",
                     help="omit timings and thread count so reports compare byte for byte")

    bench = sub.add_parser("bench", help="time the estimator across thread counts")
    _common(bench)
    bench.add_argument("--thread-list", default="1,2,4",
                       help="comma separated thread counts (default 1,2,4)")
    bench.add_argument("--repetitions", type=int, default=3)
    bench.add_argument("--output", choices=("csv", "json"), default="csv")
    return parser


def _check(args) -> None:
    if args.samples != "auto" and args.samples < 1:
        raise UsageError("--samples must be at least 1")
    if args.threads < 1:
        raise UsageError("--threads must be at least 1")
    if args.seed < 0:
        raise UsageError("--seed must be non-negative")
    if args.cap < 1:
        raise UsageError("--cap must be positive")


def _load(args):
    g = load_graph(args.graph, args.format)
    m = resolve_motif(args.motif)
    return g, m


def _resolve_k(args, g, m, prep, strict):
    if args.samples != "auto":
        return args.samples, None
    return auto_samples(g, m, args.delta, args.eps, args.gamma, seed=args.seed,
                        threads=args.threads, strict=strict, prepared=prep)


def run(args) -> dict:
    g, m = _load(args)
    strict = not args.lenient_ties
    report = {
        "schema_version": SCHEMA_VERSION,
        "graph": {"path": str(args.graph), "n": g.n, "m": g.m, "time_span": g.time_span},
        "motif": m.describe(),
        "delta": args.delta,
        "strict_ties": strict,
        "seed": args.seed,
        "threads": args.threads,
        "timings": {},
    }
    if args.mode in ("estimate", "both"):
        prep = prepare(g, m, args.delta, strict)
        k, auto = _resolve_k(args, g, m, prep, strict)
        est = estimate(g, m, args.delta, k, seed=args.seed, threads=args.threads,
                       strict=strict, prepared=prep)
        report.update(estimate=est.estimate, W_delta=est.W, k=est.k, hits=est.hits,
                      sum_X=est.sum_X, B_max=est.B_max, B_avg=est.B_avg, B_std=est.B_std)
        report["timings"].update(preprocess=est.elapsed_preprocess,
                                 sampling=est.elapsed_sampling)
        if est.notes:
            report["notes"] = est.notes
        if args.diagnostics:
            report["diagnostics"] = {"anchor": est.anchor, "sum_X2": est.sum_X2,
                                     "auto_samples": auto}
    if args.mode in ("exact", "both"):
        start = time.perf_counter()
        report["exact"] = exact_count_parallel(g, m, args.delta, args.threads, strict, args.cap)
        report["timings"]["exact"] = time.perf_counter() - start
    if args.mode == "both":
        report["relative_error"] = relative_error(report["exact"], report["estimate"])
    if args.stable_output:
        del report["timings"], report["threads"]
    return report


def _json_safe(obj):
    # JSON has no infinity; a relative error against an exact count of 0 becomes null
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_json_safe(v) for v in obj]
    return obj


def format_text(report: dict) -> str:
    lines = [f"motif      {report['motif']['name'] or report['motif']['edges']}",
             f"graph      n={report['graph']['n']} m={report['graph']['m']} "
             f"span={report['graph']['time_span']}",
             f"delta      {report['delta']}"]
    if "estimate" in report:
        lines += [f"estimate   {report['estimate']:.6g}",
                  f"W_delta    {report['W_delta']}",
                  f"samples    {report['k']} (hits {report['hits']}, sum_X {report['sum_X']})",
                  f"B          max {report['B_max']} avg {report['B_avg']:.4g} "
                  f"std {report['B_std']:.4g}"]
    if "exact" in report:
        lines.append(f"exact      {report['exact']}")
    if "relative_error" in report:
        lines.append(f"rel. error {report['relative_error']:.4g}")
    for name, secs in report.get("timings", {}).items():
        lines.append(f"time       {name} {secs:.3f}s")
    return "\n".join(lines)


def bench(args) -> list[dict]:
    try:
        thread_list = [int(x) for x in args.thread_list.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad --thread-list {args.thread_list!r}") from None
    if not thread_list or min(thread_list) < 1:
        raise UsageError("--thread-list needs positive integers")
    if args.repetitions < 1:
        raise UsageError("--repetitions must be at least 1")
    g, m = _load(args)
    strict = not args.lenient_ties
    prep = prepare(g, m, args.delta, strict)
    k, _ = _resolve_k(args, g, m, prep, strict)
    # warm-up so the first row does not pay for loading compiled kernels
    estimate(g, m, args.delta, 1, seed=args.seed, strict=strict, prepared=prep)
    rows = []
    for rep in range(args.repetitions):
        for threads in thread_list:
            start = time.perf_counter()
            est = estimate(g, m, args.delta, k, seed=args.seed, threads=threads,
                           strict=strict, prepared=prep)
            rows.append({"threads": threads, "rep": rep,
                         "elapsed": time.perf_counter() - start, "estimate": est.estimate})
    for rep in range(args.repetitions):
        times = [r["elapsed"] for r in rows if r["rep"] == rep]
        if any(b > a * 1.05 for a, b in zip(times, times[1:])):
            log.warning("repetition %d: elapsed time rose with more threads %s", rep,
                        [round(x, 4) for x in times])
    return rows


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        _check(args)
        if args.command == "run":
            report = run(args)
            if args.output == "json":
                print(json.dumps(_json_safe(report), indent=2, sort_keys=True))
            else:
                print(format_text(report))
        else:
            rows = bench(args)
            if args.output == "json":
                print(json.dumps(rows, indent=2))
            else:
                writer = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]))
                writer.writeheader()
                writer.writerows(rows)
    except (UsageError, MotifError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except (OSError, GraphFormatError) as exc:
        log.error("%s", exc)
        return EXIT_IO
    except (WorkCapExceeded, EnumerationCapExceeded) as exc:
        log.error("%s", exc)
        return EXIT_CAP
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
