"""Post-run agreement check shared by both transports."""

from __future__ import annotations

from .errors import LivenessFailure, SafetyViolation
from .protocol import AnnouncementCompleted, BecameLeader, LearnedLeader
from .topology import RingConfig


def check_agreement(cfg: RingConfig, node_events: dict, announce: bool, trace=None):
    """Verify a finished run elected the maximum and nobody disagrees.

    ``node_events`` maps position to ``[(timestamp, event), ...]``. Returns the
    leader position and the timestamp of the last agreement event.
    """
    leaders = [
        (pos, e.leader) for pos, evs in node_events.items() for _, e in evs if isinstance(e, BecameLeader)
    ]
    if not leaders:
        raise LivenessFailure("run went quiet without electing a leader", trace)
    if len(leaders) > 1:
        raise SafetyViolation(f"several leaders elected: {sorted(leaders)}", trace)
    lpos, lid = leaders[0]
    if lid != cfg.max_id or cfg.placement[lpos] != lid:
        raise SafetyViolation(f"elected {lid}, maximum is {cfg.max_id}", trace)
    for pos in range(cfg.n):
        learned = [e.leader for _, e in node_events.get(pos, []) if isinstance(e, LearnedLeader)]
        if len(learned) > 1 or any(x != lid for x in learned):
            raise SafetyViolation(f"position {pos} learned {learned}, leader is {lid}", trace)
        if pos == lpos and learned:
            raise SafetyViolation(f"leader at position {pos} also learned a leader", trace)
        if announce and pos != lpos and not learned:
            raise LivenessFailure(f"position {pos} never learned the leader", trace)
    done = max(
        t
        for evs in node_events.values()
        for t, e in evs
        if isinstance(e, (BecameLeader, LearnedLeader, AnnouncementCompleted))
    )
    return lpos, done
