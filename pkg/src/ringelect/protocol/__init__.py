"""Transport-agnostic election state machines."""

from .chang_roberts import CrNodeState, CrPhase, cr_handle, cr_idle, cr_init, cr_start
from .franklin import FrNodeState, FrRole, fr_handle, fr_init
from .messages import (
    SUCCESSOR,
    AnnouncementCompleted,
    BecameLeader,
    Coordinator,
    CrElection,
    Direction,
    FrToken,
    LearnedLeader,
    NodeEvent,
    ProcessId,
    ProtocolMessage,
    RoundAdvanced,
    TurnedPassive,
    message_payload,
)

__all__ = [
    "SUCCESSOR",
    "AnnouncementCompleted",
    "BecameLeader",
    "Coordinator",
    "CrElection",
    "CrNodeState",
    "CrPhase",
    "Direction",
    "FrNodeState",
    "FrRole",
    "FrToken",
    "LearnedLeader",
    "NodeEvent",
    "ProcessId",
    "ProtocolMessage",
    "RoundAdvanced",
    "TurnedPassive",
    "cr_handle",
    "cr_idle",
    "cr_init",
    "cr_start",
    "fr_handle",
    "fr_init",
    "message_payload",
]
