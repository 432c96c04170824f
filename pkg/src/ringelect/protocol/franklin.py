"""Franklin election on a bidirectional ring.

Each round an active node sends its ID both ways and waits for the tokens of
the nearest active node on either side. A larger neighbour makes it passive
(it then just relays); both tokens being its own means it is the only active
node left, i.e. the leader.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Optional

from ..errors import ProtocolViolation
from .messages import (
    AnnouncementCompleted,
    BecameLeader,
    Coordinator,
    Direction,
    FrToken,
    LearnedLeader,
    NodeEvent,
    Outbound,
    ProcessId,
    ProtocolMessage,
    RoundAdvanced,
    TurnedPassive,
)

ANNOUNCE_DIRECTION = Direction.CW


class FrRole(enum.Enum):
    ACTIVE = "active"
    PASSIVE = "passive"
    LEADER = "leader"
    FOLLOWER = "follower"


@dataclass(frozen=True)
class FrNodeState:
    own: ProcessId
    round: int = 1
    role: FrRole = FrRole.ACTIVE
    leader: Optional[ProcessId] = None
    # buffered tokens, at most one per (round, direction); round is the
    # current one or the next (FIFO keeps neighbours at most one round ahead)
    pending: tuple[FrToken, ...] = ()
    announce: bool = True

    def held(self, round_: int, direction: Direction) -> Optional[FrToken]:
        for tok in self.pending:
            if tok.round == round_ and tok.direction is direction:
                return tok
        return None


def _send_both(own: ProcessId, round_: int) -> Outbound:
    return [
        (Direction.CW, FrToken(own, round_, Direction.CW)),
        (Direction.CCW, FrToken(own, round_, Direction.CCW)),
    ]


def fr_init(own: ProcessId, announce: bool = True) -> tuple[FrNodeState, Outbound]:
    return FrNodeState(own=own, announce=announce), _send_both(own, 1)


def _decide(state: FrNodeState) -> tuple[FrNodeState, Outbound, list[NodeEvent]]:
    """Resolve as many rounds as the buffered tokens allow."""
    out: Outbound = []
    events: list[NodeEvent] = []
    own = state.own
    while state.role is FrRole.ACTIVE:
        cw = state.held(state.round, Direction.CW)
        ccw = state.held(state.round, Direction.CCW)
        if cw is None or ccw is None:
            break
        rest = tuple(t for t in state.pending if t.round != state.round)
        biggest = max(cw.origin, ccw.origin)
        if biggest > own:
            state = replace(state, role=FrRole.PASSIVE, pending=())
            events.append(TurnedPassive())
            # early next-round tokens were meant for an active node; pass them on
            out.extend((t.direction, t) for t in sorted(rest, key=lambda t: t.direction.value))
        elif cw.origin == own and ccw.origin == own:
            state = replace(state, role=FrRole.LEADER, leader=own, pending=())
            events.append(BecameLeader(own))
            if state.announce:
                out.append((ANNOUNCE_DIRECTION, Coordinator(own)))
        elif cw.origin == own or ccw.origin == own:
            raise ProtocolViolation(
                f"node {own} got its own token from one side only in round {state.round}"
            )
        else:
            nxt = state.round + 1
            state = replace(state, round=nxt, pending=rest)
            events.append(RoundAdvanced(nxt))
            out.extend(_send_both(own, nxt))
    return state, out, events


def fr_handle(
    state: FrNodeState, msg: ProtocolMessage, arrived_from: Direction
) -> tuple[FrNodeState, Outbound, list[NodeEvent]]:
    """Apply one delivery.

    ``arrived_from`` is the direction the message was travelling when it
    reached this node; relays keep that direction.
    """
    own = state.own
    role = state.role

    if isinstance(msg, FrToken):
        if msg.direction is not arrived_from:
            raise ProtocolViolation(
                f"node {own}: token travelling {msg.direction.value} arrived on the {arrived_from.value} channel"
            )
        if role is FrRole.PASSIVE:
            return state, [(arrived_from, msg)], []
        if role is not FrRole.ACTIVE:
            raise ProtocolViolation(f"node {own} ({role.value}) got token {msg} after the election")
        if msg.round < state.round:
            raise ProtocolViolation(f"node {own} in round {state.round} got stale token {msg}")
        if msg.round > state.round + 1:
            raise ProtocolViolation(
                f"node {own} in round {state.round} got token {msg} from too far ahead (FIFO broken)"
            )
        if state.held(msg.round, msg.direction) is not None:
            raise ProtocolViolation(f"node {own} got a duplicate token {msg}")
        return _decide(replace(state, pending=state.pending + (msg,)))

    if isinstance(msg, Coordinator):
        ldr = msg.leader
        if ldr == own:
            if role is not FrRole.LEADER:
                raise ProtocolViolation(f"node {own} saw an announcement for itself but never won")
            return state, [], [AnnouncementCompleted(own)]
        if role in (FrRole.LEADER, FrRole.FOLLOWER):
            raise ProtocolViolation(f"node {own} ({role.value}) got a second announcement for {ldr}")
        new = replace(state, role=FrRole.FOLLOWER, leader=ldr, pending=())
        return new, [(arrived_from, msg)], [LearnedLeader(ldr)]

    raise ProtocolViolation(f"Franklin node {own} cannot handle {msg!r}")
