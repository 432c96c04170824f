"""Deterministic discrete-event transport.

Every directed channel ``(position, direction)`` has a fixed delay drawn once
at setup, so per-channel FIFO holds by construction; simultaneous deliveries
are ordered by a global sequence number assigned at enqueue time. Virtual
time is exact: every delay and start offset is a :class:`fractions.Fraction`,
and the loop counts integer ticks of ``1/scale`` where ``scale`` is the least
common multiple of their denominators.

Trace export is line-delimited JSON, one record per delivery (or initiation)::

    {"v": 1, "t": <virtual time>, "from": <pos>, "to": <pos>,
     "kind": "cr_election" | "fr_token" | "coordinator" | "start",
     "payload": {...}, "events": [{"event": ..., ...}, ...]}
"""

from __future__ import annotations

import heapq
import json
import math
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Optional, Union

from .errors import ConfigurationError, LivenessFailure, ProtocolViolation
from .metrics import RunMetrics
from .outcome import check_agreement
from .protocol import (
    BecameLeader,
    Coordinator,
    CrPhase,
    Direction,
    cr_handle,
    cr_idle,
    cr_start,
    fr_handle,
    fr_init,
    message_payload,
)
from .topology import RingConfig, neighbors

TRACE_SCHEMA_VERSION = 1
ALGORITHMS = ("chang-roberts", "franklin")

Time = Union[int, float, Fraction]


def _as_fraction(x: Time) -> Fraction:
    # floats are read as their decimal literal, so 0.1 means 1/10
    return Fraction(repr(x)) if isinstance(x, float) else Fraction(x)


@dataclass(frozen=True)
class Constant:
    delta: Time = 1

    def __post_init__(self):
        if not self.delta > 0:
            raise ConfigurationError(f"delay must be positive, got {self.delta}")

    def channel_delays(self, n: int) -> dict[tuple[int, Direction], Fraction]:
        d = _as_fraction(self.delta)
        return {(p, dr): d for p in range(n) for dr in Direction}


@dataclass(frozen=True)
class UniformPerLink:
    """One delay per directed channel, uniform on ``[min, max]``.

    ``unit`` is the reference one-way delay turnaround is expressed in;
    it defaults to ``min``.
    """

    min: Time
    max: Time
    seed: int = 0
    unit: Optional[Time] = None

    def __post_init__(self):
        if not (0 < self.min <= self.max):
            raise ConfigurationError(f"need 0 < min <= max, got [{self.min}, {self.max}]")
        if self.unit is not None and not self.unit > 0:
            raise ConfigurationError(f"reference delay must be positive, got {self.unit}")

    def channel_delays(self, n: int) -> dict[tuple[int, Direction], Fraction]:
        rng = random.Random(self.seed)
        lo, hi = float(self.min), float(self.max)
        return {(p, dr): Fraction(rng.uniform(lo, hi)) for p in range(n) for dr in (Direction.CW, Direction.CCW)}


DelayModel = Union[Constant, UniformPerLink]


@dataclass(frozen=True)
class RunOptions:
    announce: bool = True
    # positions that initiate; None means all
    initiators: Optional[frozenset[int]] = None
    # per-initiator start times; unset initiators start at 0
    start_offsets: Mapping[int, Time] = field(default_factory=dict)


@dataclass(frozen=True)
class TraceRecord:
    ticks: int
    scale: int
    src: int
    dst: int
    kind: str
    payload: dict
    events: tuple

    @property
    def time(self) -> Fraction:
        return Fraction(self.ticks, self.scale)

    def to_json(self) -> str:
        t = self.time
        rec = {
            "v": TRACE_SCHEMA_VERSION,
            "t": t.numerator if t.denominator == 1 else float(t),
            "from": self.src,
            "to": self.dst,
            "kind": self.kind,
            "payload": self.payload,
            "events": [e.to_json() for e in self.events],
        }
        return json.dumps(rec, sort_keys=True, separators=(",", ":"))


@dataclass
class Trace:
    records: list[TraceRecord] = field(default_factory=list)
    leader: Optional[int] = None

    def to_jsonl(self) -> str:
        return "".join(r.to_json() + "\n" for r in self.records)

    def dump(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_jsonl())

    def __len__(self):
        return len(self.records)


@dataclass(frozen=True)
class SimEvent:
    deliver_at: int  # ticks
    sequence: int
    src: int
    dst: int
    direction: Direction
    # None marks an initiation
    message: object = None


@dataclass
class World:
    cfg: RingConfig
    algorithm: str
    delays: dict  # (position, direction) -> ticks
    states: list
    scale: int = 1
    # heap of (deliver_at, sequence, SimEvent)
    queue: list = field(default_factory=list)
    seq: int = 0
    now: int = 0
    election_hops: int = 0
    announcement_hops: int = 0
    # position -> list of (time, event)
    node_events: dict = field(default_factory=dict)
    trace: Trace = field(default_factory=Trace)

    def enqueue(self, at: int, src: int, dst: int, direction: Direction, message) -> None:
        heapq.heappush(self.queue, (at, self.seq, SimEvent(at, self.seq, src, dst, direction, message)))
        self.seq += 1

    def send(self, src: int, direction: Direction, message) -> None:
        pred, succ = neighbors(self.cfg, src)
        dst = succ if direction is Direction.CW else pred
        self.enqueue(self.now + self.delays[(src, direction)], src, dst, direction, message)
        if isinstance(message, Coordinator):
            self.announcement_hops += 1
        else:
            self.election_hops += 1


def drive_node(world: World, event: SimEvent) -> World:
    """Deliver the queue head ``event`` and enqueue whatever it triggers."""
    pos = event.dst
    if not 0 <= pos < world.cfg.n:
        raise AssertionError(f"delivery to nonexistent position {pos}")
    world.now = event.deliver_at
    state = world.states[pos]
    msg = event.message
    if msg is None:
        if world.algorithm == "chang-roberts":
            state, out = cr_start(state)
        else:
            state, out = fr_init(state.own, state.announce)
        events = []
        kind, payload = "start", {}
    else:
        if world.algorithm == "chang-roberts":
            state, out, events = cr_handle(state, msg)
        else:
            state, out, events = fr_handle(state, msg, event.direction)
        kind, payload = msg.kind, message_payload(msg)
    world.states[pos] = state
    for direction, m in out:
        world.send(pos, direction, m)
    if events:
        world.node_events.setdefault(pos, []).extend((world.now, e) for e in events)
    world.trace.records.append(TraceRecord(world.now, world.scale, event.src, pos, kind, payload, tuple(events)))
    return world


def run_election(
    cfg: RingConfig,
    algorithm: str,
    delay: DelayModel = Constant(1),
    options: RunOptions = RunOptions(),
) -> tuple[RunMetrics, Trace]:
    """Run one election to quiescence.

    Turnaround is the virtual time of the last agreement event (a node
    winning, a node learning the leader, or the leader getting its own
    announcement back), expressed in units of the reference delay: ``delta``
    for :class:`Constant`, the ``min`` bound for :class:`UniformPerLink`.
    """
    if algorithm not in ALGORITHMS:
        raise ConfigurationError(f"unknown algorithm {algorithm!r}")
    n = cfg.n
    initiators = frozenset(range(n)) if options.initiators is None else frozenset(options.initiators)
    if not initiators <= set(range(n)):
        raise ConfigurationError(f"initiator positions {sorted(initiators)} outside ring of size {n}")
    offsets = {p: _as_fraction(t) for p, t in options.start_offsets.items()}
    if set(offsets) - initiators:
        raise ConfigurationError("start offsets given for non-initiators")
    if any(t < 0 for t in offsets.values()):
        raise ConfigurationError("start offsets must be non-negative")
    if algorithm == "franklin" and (initiators != set(range(n)) or any(offsets.values())):
        raise ConfigurationError("Franklin starts with every node active at time 0")

    delays = delay.channel_delays(n)
    scale = math.lcm(*(d.denominator for d in delays.values()), *(t.denominator for t in offsets.values()))
    world = World(cfg, algorithm, {k: int(d * scale) for k, d in delays.items()}, [None] * n, scale=scale)
    offsets = {p: int(t * scale) for p, t in offsets.items()}
    if isinstance(delay, Constant):
        unit = _as_fraction(delay.delta)
    else:
        unit = _as_fraction(delay.min if delay.unit is None else delay.unit)

    if algorithm == "chang-roberts":
        world.states = [cr_idle(i, options.announce) for i in cfg.placement]
        if n == 1 and initiators:
            # a lone node wins without talking to itself
            s = world.states[0]
            world.states[0] = replace(s, participant=True, phase=CrPhase.LEADER, leader=s.own)
            world.node_events[0] = [(0, BecameLeader(s.own))]
            world.trace.records.append(
                TraceRecord(0, scale, 0, 0, "start", {}, (BecameLeader(s.own),))
            )
            initiators = frozenset()
    else:
        world.states = [fr_init(i, options.announce)[0] for i in cfg.placement]

    for p in sorted(initiators, key=lambda p: (offsets.get(p, 0), p)):
        world.enqueue(offsets.get(p, 0), p, p, Direction.CW, None)

    budget = 64 * n * n + 64
    try:
        while world.queue:
            budget -= 1
            if budget < 0:
                raise LivenessFailure("event budget exhausted", world.trace)
            drive_node(world, heapq.heappop(world.queue)[2])
    except ProtocolViolation as exc:
        exc.trace = world.trace
        raise

    lpos, done_at = check_agreement(cfg, world.node_events, options.announce, world.trace)
    world.trace.leader = cfg.placement[lpos]
    rounds = world.states[lpos].round if algorithm == "franklin" else None
    turnaround = Fraction(done_at, scale) / unit
    metrics = RunMetrics(
        algorithm=algorithm,
        n=n,
        seed=cfg.seed,
        strategy=str(cfg.strategy),
        election_hops=world.election_hops,
        announcement_hops=world.announcement_hops,
        rounds=rounds,
        turnaround=turnaround.numerator if turnaround.denominator == 1 else float(turnaround),
        turnaround_unit="delta",
    )
    return metrics, world.trace


def active_counts(trace: Trace, cfg: RingConfig) -> list[int]:
    """Number of active Franklin nodes at the start of each round, from a trace."""
    passive_at: dict[int, int] = {}
    rounds_seen: dict[int, int] = {p: 1 for p in range(cfg.n)}
    for rec in trace.records:
        for e in rec.events:
            kind = e.to_json()["event"]
            if kind == "round_advanced":
                rounds_seen[rec.dst] = e.round
            elif kind == "turned_passive":
                passive_at[rec.dst] = rounds_seen[rec.dst]
    final = max(rounds_seen.values())
    counts = []
    for r in range(1, final + 1):
        counts.append(sum(1 for p in range(cfg.n) if passive_at.get(p, final + 1) >= r))
    return counts

