"""``ringelect`` benchmark runner.

Runs R elections of one algorithm on one transport, checks agreement on every
run and prints per-run rows plus min/max/mean/stddev. Run ``i`` uses seed
``base + i``; the base comes from ``--seed``, else ``$RING_ELECT_SEED``, else 0.

Exit status: 0 on success, 1 on a protocol violation or liveness failure,
2 on bad flags.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

from .errors import ConfigurationError, LivenessFailure, ProtocolViolation, RingElectError
from .live import DEFAULT_TIMEOUT, run_live
from .metrics import aggregate, emit
from .sim import Constant, RunOptions, UniformPerLink, run_election
from .topology import Placement, build_ring

SEED_ENV = "RING_ELECT_SEED"


@dataclass(frozen=True)
class BenchSpec:
    algorithm: str
    n: int = 16
    runs: int = 10
    seed: int = 0
    transport: str = "sim"
    delta: float = 1
    delay: str = "constant"
    placement: Placement = Placement("random")
    announce: bool = True
    initiators: Optional[frozenset[int]] = None
    format: str = "table"
    out: Optional[str] = None
    trace: Optional[str] = None
    parallel_runs: int = 1
    timeout: float = DEFAULT_TIMEOUT

    def delay_model(self, seed: int):
        if self.delay == "constant":
            return Constant(self.delta)
        _, lo, hi = self.delay.split(":")
        return UniformPerLink(float(lo), float(hi), seed=seed, unit=self.delta)

    def options(self) -> RunOptions:
        return RunOptions(announce=self.announce, initiators=self.initiators)


def _one_run(spec: BenchSpec, i: int):
    seed = spec.seed + i
    cfg = build_ring(spec.n, spec.placement, seed)
    if spec.transport == "sim":
        metrics, _ = run_election(cfg, spec.algorithm, spec.delay_model(seed), spec.options())
        return metrics
    report = run_live(cfg, spec.algorithm, spec.options(), timeout=spec.timeout)
    return report.to_metrics(cfg, spec.algorithm)


def run_bench(spec: BenchSpec):
    """Execute every run of ``spec``; returns ``(stats, runs)``."""
    if spec.parallel_runs > 1 and spec.runs > 1:
        with ProcessPoolExecutor(max_workers=spec.parallel_runs) as pool:
            runs = list(pool.map(_one_run, [spec] * spec.runs, range(spec.runs)))
    else:
        runs = [_one_run(spec, i) for i in range(spec.runs)]
    return aggregate(runs), runs


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text}")
    return v


def _delay(text: str) -> str:
    if text == "constant":
        return text
    parts = text.split(":")
    try:
        ok = len(parts) == 3 and parts[0] == "uniform" and 0 < float(parts[1]) <= float(parts[2])
    except ValueError:
        ok = False
    if not ok:
        raise argparse.ArgumentTypeError("expected 'constant' or 'uniform:<min>:<max>' with 0 < min <= max")
    return text


def _placement(text: str) -> Placement:
    try:
        return Placement.parse(text)
    except ConfigurationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positions(text: str) -> frozenset[int]:
    try:
        return frozenset(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad position list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ringelect", description="Benchmark ring leader-election algorithms.")
    p.add_argument("--algorithm", required=True, choices=["chang-roberts", "franklin"])
    p.add_argument("--n", type=_positive_int, default=16, help="ring size (default 16)")
    p.add_argument("--runs", type=_positive_int, default=10, help="number of runs R (default 10)")
    p.add_argument("--seed", type=int, default=None, help=f"base seed (default ${SEED_ENV} or 0)")
    p.add_argument("--transport", choices=["sim", "live"], default="sim")
    p.add_argument("--delta", type=float, default=1.0, help="one-way delay / turnaround unit (sim)")
    p.add_argument("--delay", type=_delay, default="constant", help="constant | uniform:<min>:<max>")
    p.add_argument(
        "--placement", type=_placement, default=Placement("random"),
        help="random | cr-worst | cr-best | explicit:<id,id,...>",
    )
    p.add_argument("--no-announce", dest="announce", action="store_false")
    p.add_argument("--initiators", type=_positions, default=None, help="initiating positions (Chang-Roberts)")
    p.add_argument("--format", choices=["table", "csv", "json"], default="table")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--trace", default=None, help="write the sim trace of run 0 as JSON lines")
    p.add_argument("--parallel-runs", type=_positive_int, default=1)
    p.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT, help="live run timeout in seconds")
    return p


def parse_spec(argv=None) -> BenchSpec:
    parser = build_parser()
    a = parser.parse_args(argv)
    if a.seed is None:
        env = os.environ.get(SEED_ENV)
        try:
            a.seed = int(env) if env else 0
        except ValueError:
            parser.error(f"${SEED_ENV} is not an integer: {env!r}")
    if a.initiators is not None and a.algorithm != "chang-roberts":
        parser.error("--initiators applies to Chang-Roberts only")
    if a.initiators is not None and not a.initiators <= set(range(a.n)):
        parser.error(f"--initiators must be positions in 0..{a.n - 1}")
    if a.delta <= 0:
        parser.error("--delta must be positive")
    if a.placement.kind == "explicit":
        try:
            build_ring(a.n, a.placement)
        except ConfigurationError as exc:
            parser.error(str(exc))
    return BenchSpec(
        algorithm=a.algorithm, n=a.n, runs=a.runs, seed=a.seed, transport=a.transport,
        delta=a.delta, delay=a.delay, placement=a.placement, announce=a.announce,
        initiators=a.initiators, format=a.format, out=a.out, trace=a.trace,
        parallel_runs=a.parallel_runs, timeout=a.timeout,
    )


def main(argv=None) -> int:
    spec = parse_spec(argv)
    try:
        if spec.trace:
            cfg = build_ring(spec.n, spec.placement, spec.seed)
            _, trace = run_election(cfg, spec.algorithm, spec.delay_model(spec.seed), spec.options())
            trace.dump(spec.trace)
        stats, runs = run_bench(spec)
    except (ProtocolViolation, LivenessFailure) as exc:
        trace = getattr(exc, "trace", None)
        if spec.trace and hasattr(trace, "dump"):
            trace.dump(spec.trace)
            hint = f" (partial trace in {spec.trace})"
        else:
            hint = " (rerun with --trace <path> for the event trace)"
        print(f"ringelect: {type(exc).__name__}: {exc}{hint}", file=sys.stderr)
        return 1
    except RingElectError as exc:
        print(f"ringelect: {exc}", file=sys.stderr)
        return 2

    text = emit(stats, runs, spec.format)
    if spec.out:
        with open(spec.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
