"""Identifiers, directions, wire messages and node events."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

ProcessId = int


class Direction(enum.Enum):
    """Direction of travel along the ring.

    ``CW`` moves from position ``i`` to its successor ``i + 1``; ``CCW`` moves
    to the predecessor. Chang-Roberts only ever uses ``CW``.
    """

    CW = "cw"
    CCW = "ccw"

    @property
    def opposite(self) -> Direction:
        return Direction.CCW if self is Direction.CW else Direction.CW


SUCCESSOR = Direction.CW


@dataclass(frozen=True)
class CrElection:
    candidate: ProcessId

    kind = "cr_election"


@dataclass(frozen=True)
class FrToken:
    origin: ProcessId
    round: int
    direction: Direction

    kind = "fr_token"

    def __post_init__(self):
        if self.round < 1:
            raise ValueError(f"token round must be >= 1, got {self.round}")


@dataclass(frozen=True)
class Coordinator:
    leader: ProcessId

    kind = "coordinator"


ProtocolMessage = Union[CrElection, FrToken, Coordinator]


def message_payload(msg: ProtocolMessage) -> dict:
    """JSON-ready payload for a message (used by trace export)."""
    if isinstance(msg, CrElection):
        return {"candidate": msg.candidate}
    if isinstance(msg, FrToken):
        return {"origin": msg.origin, "round": msg.round, "direction": msg.direction.value}
    return {"leader": msg.leader}


# Node events -----------------------------------------------------------------


@dataclass(frozen=True)
class BecameLeader:
    leader: ProcessId

    def to_json(self):
        return {"event": "became_leader", "leader": self.leader}


@dataclass(frozen=True)
class LearnedLeader:
    leader: ProcessId

    def to_json(self):
        return {"event": "learned_leader", "leader": self.leader}


@dataclass(frozen=True)
class TurnedPassive:
    def to_json(self):
        return {"event": "turned_passive"}


@dataclass(frozen=True)
class RoundAdvanced:
    round: int

    def to_json(self):
        return {"event": "round_advanced", "round": self.round}


@dataclass(frozen=True)
class AnnouncementCompleted:
    """The leader got its own Coordinator back: every node has agreed."""

    leader: ProcessId

    def to_json(self):
        return {"event": "announcement_completed", "leader": self.leader}


NodeEvent = Union[BecameLeader, LearnedLeader, TurnedPassive, RoundAdvanced, AnnouncementCompleted]

Outbound = list[tuple[Direction, ProtocolMessage]]
