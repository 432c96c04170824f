"""Concurrent transport: one thread per ring position.

Each worker owns its state machine and one FIFO inbox per direction of
arrival. Workers only touch their own state; the harness shares nothing with
them except the hop counters and an in-flight message count (both under one
lock), which it uses to detect quiescence.
"""

from __future__ import annotations

import threading
import time
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Optional

from .errors import ConfigurationError, LivenessFailure, ProtocolViolation, RingElectError
from .metrics import RunMetrics
from .outcome import check_agreement
from .protocol import BecameLeader, Coordinator, CrPhase, Direction, cr_handle, cr_idle, cr_start, fr_handle, fr_init
from .sim import ALGORITHMS, RunOptions
from .topology import RingConfig, neighbors

DEFAULT_TIMEOUT = 30.0


@dataclass
class LiveRunReport:
    turnaround_ns: int
    election_hops: int
    announcement_hops: int
    leader: int
    rounds: Optional[int]
    # position -> [(ns since release, event), ...]
    node_log: dict = field(default_factory=dict)

    @property
    def total_hops(self) -> int:
        return self.election_hops + self.announcement_hops

    def to_metrics(self, cfg: RingConfig, algorithm: str) -> RunMetrics:
        return RunMetrics(
            algorithm=algorithm,
            n=cfg.n,
            seed=cfg.seed,
            strategy=str(cfg.strategy),
            election_hops=self.election_hops,
            announcement_hops=self.announcement_hops,
            rounds=self.rounds,
            turnaround=self.turnaround_ns,
            turnaround_unit="ns",
        )


class _Worker(threading.Thread):
    def __init__(self, run: _LiveRun, pos: int, state, initiator: bool):
        super().__init__(name=f"ring-node-{pos}", daemon=True)
        self.run_ = run
        self.pos = pos
        self.state = state
        self.initiator = initiator
        self.inbox = {Direction.CW: deque(), Direction.CCW: deque()}
        self.cond = threading.Condition()
        self.stopped = False
        self.log: list = []

    def deliver(self, direction: Direction, msg) -> None:
        with self.cond:
            self.inbox[direction].append(msg)
            self.cond.notify()

    def stop(self) -> None:
        with self.cond:
            self.stopped = True
            self.cond.notify()

    def _next(self):
        prefer = (Direction.CW, Direction.CCW)
        with self.cond:
            while True:
                if self.stopped:
                    return None
                for d in prefer:
                    if self.inbox[d]:
                        return d, self.inbox[d].popleft()
                self.cond.wait()

    def run(self) -> None:
        r = self.run_
        try:
            r.barrier.wait()
            if self.initiator:
                if r.algorithm == "chang-roberts":
                    self.state, out = cr_start(self.state)
                else:
                    self.state, out = fr_init(self.state.own, self.state.announce)
                self._emit(out, [])
            while True:
                item = self._next()
                if item is None:
                    return
                direction, msg = item
                if r.algorithm == "chang-roberts":
                    self.state, out, events = cr_handle(self.state, msg)
                else:
                    self.state, out, events = fr_handle(self.state, msg, direction)
                self._emit(out, events)
        except threading.BrokenBarrierError:
            return
        except BaseException as exc:  # noqa: BLE001 - reported to the harness
            r.fail(self.pos, exc)

    def _emit(self, out, events) -> None:
        r = self.run_
        if events:
            now = time.perf_counter_ns()
            self.log.extend((now, e) for e in events)
        for direction, msg in out:
            r.send(self.pos, direction, msg)
        r.settle()


class _LiveRun:
    def __init__(self, cfg: RingConfig, algorithm: str, pending: int):
        self.cfg = cfg
        self.algorithm = algorithm
        self.lock = threading.Condition()
        self.in_flight = pending
        self.election_hops = 0
        self.announcement_hops = 0
        self.error: Optional[tuple[int, BaseException]] = None
        self.t0 = 0
        self.workers: list[_Worker] = []
        self.barrier = threading.Barrier(cfg.n, action=self._release)

    def _release(self) -> None:
        self.t0 = time.perf_counter_ns()

    def send(self, src: int, direction: Direction, msg) -> None:
        pred, succ = neighbors(self.cfg, src)
        dst = succ if direction is Direction.CW else pred
        with self.lock:
            self.in_flight += 1
            if isinstance(msg, Coordinator):
                self.announcement_hops += 1
            else:
                self.election_hops += 1
        self.workers[dst].deliver(direction, msg)

    def settle(self) -> None:
        """One unit of work (an initiation or a delivery) has finished."""
        with self.lock:
            self.in_flight -= 1
            if self.in_flight == 0:
                self.lock.notify_all()

    def fail(self, pos: int, exc: BaseException) -> None:
        with self.lock:
            if self.error is None:
                self.error = (pos, exc)
            self.lock.notify_all()


def run_live(
    cfg: RingConfig,
    algorithm: str,
    options: RunOptions = RunOptions(),
    timeout: float = DEFAULT_TIMEOUT,
) -> LiveRunReport:
    """Run one election with a thread per node and time it on the wall clock.

    The clock starts when the start barrier releases and stops at the last
    agreement event, the same event set the simulator uses for turnaround.
    """
    if algorithm not in ALGORITHMS:
        raise ConfigurationError(f"unknown algorithm {algorithm!r}")
    if options.start_offsets:
        raise ConfigurationError("staggered starts are only supported by the simulator")
    n = cfg.n
    initiators = frozenset(range(n)) if options.initiators is None else frozenset(options.initiators)
    if not initiators <= set(range(n)):
        raise ConfigurationError(f"initiator positions {sorted(initiators)} outside ring of size {n}")
    if algorithm == "franklin" and initiators != set(range(n)):
        raise ConfigurationError("Franklin starts with every node active")

    lone_leader = algorithm == "chang-roberts" and n == 1 and bool(initiators)
    if lone_leader:
        initiators = frozenset()
    run = _LiveRun(cfg, algorithm, pending=len(initiators))
    for pos, pid in enumerate(cfg.placement):
        if algorithm == "chang-roberts":
            state = cr_idle(pid, options.announce)
        else:
            state = fr_init(pid, options.announce)[0]
        run.workers.append(_Worker(run, pos, state, pos in initiators))
    if lone_leader:
        w = run.workers[0]
        w.state = replace(w.state, participant=True, phase=CrPhase.LEADER, leader=w.state.own)

    for w in run.workers:
        w.start()

    deadline = time.monotonic() + timeout
    with run.lock:
        while run.in_flight > 0 and run.error is None:
            left = deadline - time.monotonic()
            if left <= 0:
                break
            run.lock.wait(left)
        in_flight, error = run.in_flight, run.error
    for w in run.workers:
        w.stop()
    for w in run.workers:
        w.join(max(0.0, deadline - time.monotonic()) + 1.0)

    if lone_leader:
        w = run.workers[0]
        w.log.append((run.t0, BecameLeader(w.state.own)))
    node_log = {w.pos: [(t - run.t0, e) for t, e in w.log] for w in run.workers if w.log}
    if error is not None:
        pos, exc = error
        if isinstance(exc, RingElectError):
            exc.trace = node_log
            raise exc
        raise ProtocolViolation(f"worker at position {pos} crashed: {exc!r}", node_log) from exc
    if in_flight > 0:
        raise LivenessFailure(f"no quiescence after {timeout}s ({in_flight} messages pending)", node_log)

    lpos, done_ns = check_agreement(cfg, node_log, options.announce, node_log)
    leader_state = run.workers[lpos].state
    return LiveRunReport(
        turnaround_ns=int(done_ns),
        election_hops=run.election_hops,
        announcement_hops=run.announcement_hops,
        leader=cfg.placement[lpos],
        rounds=leader_state.round if algorithm == "franklin" else None,
        node_log=node_log,
    )
