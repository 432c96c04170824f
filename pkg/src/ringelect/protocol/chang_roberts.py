"""Chang-Roberts election on a unidirectional ring.

All tokens travel towards the successor. A token survives a node only if it
carries a larger ID, so the maximum is the single token that completes the
circle; its owner then circulates a ``Coordinator`` announcement.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Optional

from ..errors import ProtocolViolation
from .messages import (
    SUCCESSOR,
    AnnouncementCompleted,
    BecameLeader,
    Coordinator,
    CrElection,
    LearnedLeader,
    NodeEvent,
    Outbound,
    ProcessId,
    ProtocolMessage,
)


class CrPhase(enum.Enum):
    IDLE = "idle"
    ELECTING = "electing"
    LEADER = "leader"
    FOLLOWER = "follower"


@dataclass(frozen=True)
class CrNodeState:
    own: ProcessId
    participant: bool = False
    phase: CrPhase = CrPhase.IDLE
    leader: Optional[ProcessId] = None
    announce: bool = True


def cr_idle(own: ProcessId, announce: bool = True) -> CrNodeState:
    """State of a node that has not initiated (yet)."""
    return CrNodeState(own=own, announce=announce)


def cr_start(state: CrNodeState) -> tuple[CrNodeState, Outbound]:
    """Initiate at ``state``; a node that already participates stays silent."""
    if state.participant:
        return state, []
    new = replace(state, participant=True, phase=CrPhase.ELECTING)
    return new, [(SUCCESSOR, CrElection(state.own))]


def cr_init(own: ProcessId, announce: bool = True) -> tuple[CrNodeState, Outbound]:
    return cr_start(cr_idle(own, announce))


def cr_handle(
    state: CrNodeState, msg: ProtocolMessage
) -> tuple[CrNodeState, Outbound, list[NodeEvent]]:
    own = state.own
    if isinstance(msg, CrElection):
        c = msg.candidate
        if state.phase in (CrPhase.LEADER, CrPhase.FOLLOWER):
            raise ProtocolViolation(f"node {own} got election token {c} after the election ended")
        if c > own:
            new = replace(state, participant=True, phase=CrPhase.ELECTING)
            return new, [(SUCCESSOR, msg)], []
        if c < own:
            if state.participant:
                return state, [], []
            new = replace(state, participant=True, phase=CrPhase.ELECTING)
            return new, [(SUCCESSOR, CrElection(own))], []
        if state.phase is CrPhase.IDLE:
            raise ProtocolViolation(
                f"node {own} received its own ID without having sent it (duplicate ID or broken ring)"
            )
        new = replace(state, phase=CrPhase.LEADER, leader=own)
        out = [(SUCCESSOR, Coordinator(own))] if state.announce else []
        return new, out, [BecameLeader(own)]

    if isinstance(msg, Coordinator):
        ldr = msg.leader
        if ldr == own:
            if state.phase is not CrPhase.LEADER:
                raise ProtocolViolation(f"node {own} saw an announcement for itself but never won")
            return state, [], [AnnouncementCompleted(own)]
        if state.phase in (CrPhase.LEADER, CrPhase.FOLLOWER):
            raise ProtocolViolation(
                f"node {own} ({state.phase.value}) got a second announcement for {ldr}"
            )
        new = replace(state, participant=True, phase=CrPhase.FOLLOWER, leader=ldr)
        return new, [(SUCCESSOR, msg)], [LearnedLeader(ldr)]

    raise ProtocolViolation(f"Chang-Roberts node {own} cannot handle {msg!r}")
