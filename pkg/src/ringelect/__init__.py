"""Ring leader election: Chang-Roberts and Franklin, simulated or live."""

from .errors import (
    ConfigurationError,
    LivenessFailure,
    ProtocolViolation,
    RingElectError,
    SafetyViolation,
    UsageError,
)
from .live import LiveRunReport, run_live
from .metrics import RunMetrics, SummaryStats, aggregate, emit, parse_json
from .sim import Constant, RunOptions, Trace, UniformPerLink, run_election
from .topology import CR_BEST, CR_WORST, RANDOM, Placement, RingConfig, build_ring, explicit, neighbors

__version__ = "0.1.0"

__all__ = [
    "CR_BEST",
    "CR_WORST",
    "RANDOM",
    "ConfigurationError",
    "Constant",
    "LiveRunReport",
    "LivenessFailure",
    "Placement",
    "ProtocolViolation",
    "RingConfig",
    "RingElectError",
    "RunMetrics",
    "RunOptions",
    "SafetyViolation",
    "SummaryStats",
    "Trace",
    "UniformPerLink",
    "UsageError",
    "aggregate",
    "build_ring",
    "emit",
    "explicit",
    "neighbors",
    "parse_json",
    "run_election",
    "run_live",
]
