"""Per-run metric records, multi-run aggregation and report emission.

CSV and JSON layouts are versioned through :data:`SCHEMA_VERSION`. The CSV
writes one row per run, then one row per statistic (``run`` column holds
``min``/``max``/``mean``/``stddev``) with the run-specific columns left blank.
"""

from __future__ import annotations

import csv
import io
import json
import statistics
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence, Union

from .errors import UsageError

SCHEMA_VERSION = 1

CSV_COLUMNS = (
    "run",
    "algorithm",
    "n",
    "seed",
    "strategy",
    "election_hops",
    "announcement_hops",
    "total_hops",
    "rounds",
    "turnaround",
    "turnaround_unit",
)

ALGORITHMS = ("chang-roberts", "franklin")
UNITS = ("delta", "ns")
STAT_NAMES = ("min", "max", "mean", "stddev")

Number = Union[int, float]


@dataclass(frozen=True)
class RunMetrics:
    algorithm: str
    n: int
    seed: int
    strategy: str
    election_hops: int
    announcement_hops: int
    rounds: Optional[int]
    turnaround: Number
    turnaround_unit: str
    total_hops: int = field(default=-1)

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise UsageError(f"unknown algorithm {self.algorithm!r}")
        if self.turnaround_unit not in UNITS:
            raise UsageError(f"unknown turnaround unit {self.turnaround_unit!r}")
        total = self.election_hops + self.announcement_hops
        if self.total_hops == -1:
            object.__setattr__(self, "total_hops", total)
        elif self.total_hops != total:
            raise UsageError(f"total_hops {self.total_hops} != {total}")
        if (self.rounds is not None) != (self.algorithm == "franklin"):
            raise UsageError("rounds are recorded for Franklin runs only")

    def metric_values(self) -> dict[str, Optional[Number]]:
        return {
            "election_hops": self.election_hops,
            "announcement_hops": self.announcement_hops,
            "total_hops": self.total_hops,
            "rounds": self.rounds,
            "turnaround": self.turnaround,
        }


METRIC_NAMES = ("election_hops", "announcement_hops", "total_hops", "rounds", "turnaround")


@dataclass(frozen=True)
class MetricSummary:
    min: Number
    max: Number
    mean: Number
    stddev: Number


@dataclass(frozen=True)
class SummaryStats:
    algorithm: str
    n: int
    turnaround_unit: str
    runs: int
    metrics: dict[str, MetricSummary]


def _summarize(values: Sequence[Number]) -> MetricSummary:
    # sorted input makes the float sums order independent
    values = sorted(values)
    sd = statistics.stdev(values) if len(values) > 1 else 0
    return MetricSummary(min(values), max(values), statistics.mean(values), sd)


def aggregate(runs: Sequence[RunMetrics]) -> SummaryStats:
    """Min/max/mean/sample-stddev of every metric over ``runs``."""
    if not runs:
        raise UsageError("cannot aggregate an empty list of runs")
    first = runs[0]
    for r in runs:
        key = (r.algorithm, r.n, r.turnaround_unit)
        if key != (first.algorithm, first.n, first.turnaround_unit):
            raise UsageError(
                f"mixed runs: {key} vs {(first.algorithm, first.n, first.turnaround_unit)}"
            )
    metrics = {}
    for name in METRIC_NAMES:
        vals = [r.metric_values()[name] for r in runs]
        if name == "rounds" and first.algorithm != "franklin":
            continue
        metrics[name] = _summarize(vals)
    return SummaryStats(first.algorithm, first.n, first.turnaround_unit, len(runs), metrics)


# emission --------------------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _csv(stats: SummaryStats, runs: Sequence[RunMetrics]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for i, r in enumerate(runs):
        w.writerow(
            [
                i,
                r.algorithm,
                r.n,
                r.seed,
                r.strategy,
                r.election_hops,
                r.announcement_hops,
                r.total_hops,
                _fmt(r.rounds),
                _fmt(r.turnaround),
                r.turnaround_unit,
            ]
        )
    for stat in STAT_NAMES:
        row = [stat, stats.algorithm, stats.n, "", ""]
        for name in METRIC_NAMES:
            m = stats.metrics.get(name)
            row.append("" if m is None else _fmt(getattr(m, stat)))
        row.append(stats.turnaround_unit)
        w.writerow(row)
    return buf.getvalue()


def _json(stats: SummaryStats, runs: Sequence[RunMetrics]) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "runs": [dict(run=i, **{c: asdict(r)[c] for c in CSV_COLUMNS[1:]}) for i, r in enumerate(runs)],
        "summary": {
            "algorithm": stats.algorithm,
            "n": stats.n,
            "turnaround_unit": stats.turnaround_unit,
            "runs": stats.runs,
            "metrics": {k: asdict(v) for k, v in stats.metrics.items()},
        },
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _table(stats: SummaryStats, runs: Sequence[RunMetrics]) -> str:
    unit = stats.turnaround_unit
    head = ["run", "seed", "election", "announce", "total", "rounds", f"turnaround[{unit}]"]
    rows = [
        [str(i), str(r.seed), str(r.election_hops), str(r.announcement_hops), str(r.total_hops),
         _fmt(r.rounds) or "-", _num(r.turnaround)]
        for i, r in enumerate(runs)
    ]
    widths = [max(len(h), *(len(row[k]) for row in rows)) for k, h in enumerate(head)]
    lines = [f"{stats.algorithm}  n={stats.n}  runs={stats.runs}  strategy={runs[0].strategy}", ""]
    lines.append("  ".join(h.rjust(w) for h, w in zip(head, widths)))
    lines.extend("  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in rows)
    lines.append("")
    shead = ["metric", *STAT_NAMES]
    srows = [[name, *(_num(getattr(m, s)) for s in STAT_NAMES)] for name, m in stats.metrics.items()]
    sw = [max(len(h), *(len(row[k]) for row in srows)) for k, h in enumerate(shead)]
    lines.append("  ".join(h.rjust(w) for h, w in zip(shead, sw)))
    lines.extend("  ".join(c.rjust(w) for c, w in zip(row, sw)) for row in srows)
    return "\n".join(lines) + "\n"


def _num(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def emit(stats: SummaryStats, runs: Sequence[RunMetrics], format: str = "table") -> str:
    if not runs:
        raise UsageError("nothing to emit: empty run list")
    writers = {"table": _table, "csv": _csv, "json": _json}
    if format not in writers:
        raise UsageError(f"unknown output format {format!r}")
    return writers[format](stats, runs)


def parse_json(text: str) -> tuple[SummaryStats, list[RunMetrics]]:
    """Inverse of ``emit(..., "json")``."""
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise UsageError(f"unsupported schema version {doc.get('schema_version')!r}")
    runs = [RunMetrics(**{k: v for k, v in r.items() if k != "run"}) for r in doc["runs"]]
    s = doc["summary"]
    stats = SummaryStats(
        s["algorithm"],
        s["n"],
        s["turnaround_unit"],
        s["runs"],
        {k: MetricSummary(**v) for k, v in s["metrics"].items()},
    )
    return stats, runs
