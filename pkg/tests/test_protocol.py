from dataclasses import replace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ringelect.errors import ProtocolViolation
from ringelect.protocol import (
    AnnouncementCompleted,
    BecameLeader,
    Coordinator,
    CrElection,
    CrPhase,
    Direction,
    FrRole,
    FrToken,
    LearnedLeader,
    RoundAdvanced,
    TurnedPassive,
    cr_handle,
    cr_idle,
    cr_init,
    fr_handle,
    fr_init,
)

CW, CCW = Direction.CW, Direction.CCW


# Chang-Roberts ---------------------------------------------------------------


@pytest.mark.parametrize("own", [5, 0])
def test_cr_init_sends_own_id_to_successor(own):
    state, out = cr_init(own)
    assert state.participant and state.phase is CrPhase.ELECTING
    assert out == [(CW, CrElection(own))]


def test_cr_forwards_larger():
    state, _ = cr_init(5)
    new, out, events = cr_handle(state, CrElection(7))
    assert out == [(CW, CrElection(7))] and events == []
    assert new.participant


def test_cr_swallows_smaller_when_participating():
    state, _ = cr_init(5)
    new, out, events = cr_handle(state, CrElection(3))
    assert (new, out, events) == (state, [], [])


def test_cr_replaces_smaller_when_idle():
    new, out, _ = cr_handle(cr_idle(5), CrElection(3))
    assert out == [(CW, CrElection(5))]
    assert new.participant and new.phase is CrPhase.ELECTING


def test_cr_idle_node_forwards_larger_and_joins():
    new, out, _ = cr_handle(cr_idle(5), CrElection(9))
    assert out == [(CW, CrElection(9))] and new.participant


def test_cr_own_id_makes_leader_and_announces():
    state, _ = cr_init(5)
    new, out, events = cr_handle(state, CrElection(5))
    assert new.phase is CrPhase.LEADER and new.leader == 5
    assert out == [(CW, Coordinator(5))]
    assert events == [BecameLeader(5)]


def test_cr_leader_without_announcement():
    state, _ = cr_init(5, announce=False)
    new, out, events = cr_handle(state, CrElection(5))
    assert out == [] and events == [BecameLeader(5)]


def test_cr_single_node_ring():
    state, out = cr_init(7)
    [(_, token)] = out
    new, out, events = cr_handle(state, token)
    assert new.phase is CrPhase.LEADER and events == [BecameLeader(7)]


def test_cr_coordinator_handling():
    state, _ = cr_init(3)
    new, out, events = cr_handle(state, Coordinator(9))
    assert new.phase is CrPhase.FOLLOWER and new.leader == 9
    assert out == [(CW, Coordinator(9))] and events == [LearnedLeader(9)]

    leader, _, _ = cr_handle(cr_init(9)[0], CrElection(9))
    done, out, events = cr_handle(leader, Coordinator(9))
    assert out == [] and events == [AnnouncementCompleted(9)]


def test_cr_own_id_while_idle_is_violation():
    with pytest.raises(ProtocolViolation):
        cr_handle(cr_idle(4), CrElection(4))


@pytest.mark.parametrize(
    "state,msg",
    [
        (cr_init(4)[0], FrToken(1, 1, CW)),
        (cr_init(4)[0], Coordinator(4)),
        (replace(cr_idle(4), phase=CrPhase.FOLLOWER, leader=9, participant=True), Coordinator(9)),
        (replace(cr_idle(4), phase=CrPhase.LEADER, leader=4, participant=True), CrElection(4)),
    ],
)
def test_cr_violations(state, msg):
    with pytest.raises(ProtocolViolation):
        cr_handle(state, msg)


def test_cr_swallowing_is_safe_on_three_nodes():
    # brute force every delivery interleaving of a 3-node ring (IDs 3, 5, 4 in
    # successor order) and check each schedule elects 5 exactly once
    placement = (3, 5, 4)
    n = len(placement)
    outcomes = set()

    def explore(states, channels, leaders):
        pending = [p for p in range(n) if channels[p]]
        if not pending:
            learned = tuple(s.leader for s in states)
            outcomes.add((tuple(leaders), learned))
            return
        for p in pending:
            chans = [list(c) for c in channels]
            msg = chans[p].pop(0)
            dst = (p + 1) % n
            st_, out, events = cr_handle(states[dst], msg)
            new_states = list(states)
            new_states[dst] = st_
            for _, m in out:
                chans[dst].append(m)
            explore(new_states, chans, leaders + [e.leader for e in events if isinstance(e, BecameLeader)])

    states, channels = [], []
    for pid in placement:
        s, out = cr_init(pid)
        states.append(s)
        channels.append([m for _, m in out])
    explore(states, channels, [])
    assert outcomes == {((5,), (5, 5, 5))}


@given(st.integers(0, 50), st.integers(0, 50), st.booleans())
def test_cr_handle_is_pure(own, cand, participant):
    state = replace(cr_idle(own), participant=participant,
                    phase=CrPhase.ELECTING if participant else CrPhase.IDLE)
    try:
        first = cr_handle(state, CrElection(cand))
    except ProtocolViolation:
        with pytest.raises(ProtocolViolation):
            cr_handle(state, CrElection(cand))
        return
    assert cr_handle(state, CrElection(cand)) == first


# Franklin --------------------------------------------------------------------


def test_fr_init_sends_both_ways():
    state, out = fr_init(9)
    assert state.role is FrRole.ACTIVE and state.round == 1
    assert out == [(CW, FrToken(9, 1, CW)), (CCW, FrToken(9, 1, CCW))]


def _deliver(state, *tokens):
    out_all, ev_all = [], []
    for tok in tokens:
        state, out, events = fr_handle(state, tok, tok.direction)
        out_all += out
        ev_all += events
    return state, out_all, ev_all


def test_fr_both_smaller_advances_round():
    state, out, events = _deliver(fr_init(5)[0], FrToken(3, 1, CW), FrToken(4, 1, CCW))
    assert state.role is FrRole.ACTIVE and state.round == 2
    assert events == [RoundAdvanced(2)]
    assert out == [(CW, FrToken(5, 2, CW)), (CCW, FrToken(5, 2, CCW))]


def test_fr_larger_neighbour_makes_passive():
    state, out, events = _deliver(fr_init(5)[0], FrToken(7, 1, CW), FrToken(3, 1, CCW))
    assert state.role is FrRole.PASSIVE and events == [TurnedPassive()] and out == []


def test_fr_own_tokens_make_leader():
    state, out, events = _deliver(fr_init(5)[0], FrToken(5, 1, CW), FrToken(5, 1, CCW))
    assert state.role is FrRole.LEADER and state.leader == 5
    assert events == [BecameLeader(5)]
    assert out == [(CW, Coordinator(5))]


def test_fr_waits_for_both_directions():
    state, out, events = _deliver(fr_init(5)[0], FrToken(9, 1, CW))
    assert state.role is FrRole.ACTIVE and out == [] and events == []


def test_fr_two_node_ring():
    s1, s2 = fr_init(1)[0], fr_init(2)[0]
    s1, _, ev1 = _deliver(s1, FrToken(2, 1, CW), FrToken(2, 1, CCW))
    s2, _, ev2 = _deliver(s2, FrToken(1, 1, CW), FrToken(1, 1, CCW))
    assert s1.role is FrRole.PASSIVE and ev1 == [TurnedPassive()]
    assert s2.role is FrRole.ACTIVE and ev2 == [RoundAdvanced(2)]


def test_fr_single_node_ring():
    state, out = fr_init(4)
    state, _, events = _deliver(state, *(m for _, m in out))
    assert state.role is FrRole.LEADER and events == [BecameLeader(4)]


def test_fr_passive_relays_unchanged():
    state = replace(fr_init(2)[0], role=FrRole.PASSIVE)
    tok = FrToken(8, 3, CCW)
    assert fr_handle(state, tok, CCW) == (state, [(CCW, tok)], [])
    new, out, events = fr_handle(state, Coordinator(8), CW)
    assert new.role is FrRole.FOLLOWER and out == [(CW, Coordinator(8))] and events == [LearnedLeader(8)]


def test_fr_early_token_is_buffered_then_used():
    state = fr_init(5)[0]
    state, out, _ = _deliver(state, FrToken(3, 1, CW), FrToken(6, 2, CW))
    assert out == [] and state.round == 1
    state, out, events = _deliver(state, FrToken(4, 1, CCW))
    # advances to round 2 and immediately meets the buffered round-2 token; the
    # second round-2 token is still missing so it waits
    assert state.round == 2 and events == [RoundAdvanced(2)]
    state, out, events = _deliver(state, FrToken(1, 2, CCW))
    assert state.role is FrRole.PASSIVE


def test_fr_node_turning_passive_releases_early_tokens():
    state = fr_init(5)[0]
    early = FrToken(6, 2, CCW)
    state, out, events = _deliver(state, FrToken(9, 1, CW), early, FrToken(6, 1, CCW))
    assert state.role is FrRole.PASSIVE
    assert out == [(CCW, early)]


@pytest.mark.parametrize(
    "tokens",
    [
        [FrToken(3, 3, CW)],  # too far ahead
        [FrToken(3, 1, CW), FrToken(4, 1, CW)],  # duplicate direction
        [FrToken(5, 1, CW), FrToken(3, 1, CCW)],  # own token from one side only
    ],
)
def test_fr_violations(tokens):
    with pytest.raises(ProtocolViolation):
        _deliver(fr_init(5)[0], *tokens)


def test_fr_direction_mismatch_is_violation():
    with pytest.raises(ProtocolViolation):
        fr_handle(fr_init(5)[0], FrToken(3, 1, CW), CCW)


def test_fr_stale_token_is_violation():
    state = replace(fr_init(5)[0], round=3)
    with pytest.raises(ProtocolViolation):
        fr_handle(state, FrToken(3, 2, CW), CW)


def test_fr_round_must_be_positive():
    with pytest.raises(ValueError):
        FrToken(1, 0, CW)


@given(st.integers(0, 20), st.integers(0, 20), st.integers(0, 20))
def test_fr_round_decision_matches_rule(own, left, right):
    start = fr_init(own)[0]
    if max(left, right) <= own and (left == own) != (right == own):
        with pytest.raises(ProtocolViolation):
            _deliver(start, FrToken(left, 1, CW), FrToken(right, 1, CCW))
        return
    state, _, _ = _deliver(start, FrToken(left, 1, CW), FrToken(right, 1, CCW))
    if max(left, right) > own:
        assert state.role is FrRole.PASSIVE
    elif left == right == own:
        assert state.role is FrRole.LEADER
    else:
        assert state.role is FrRole.ACTIVE and state.round == 2


@given(st.lists(st.tuples(st.integers(0, 9), st.integers(1, 3), st.sampled_from([CW, CCW])), max_size=12))
def test_fr_passive_never_reactivates(deliveries):
    state = fr_init(5)[0]
    was_passive = False
    for origin, rnd, d in deliveries:
        try:
            state, _, _ = fr_handle(state, FrToken(origin, rnd, d), d)
        except ProtocolViolation:
            continue
        if was_passive:
            assert state.role is FrRole.PASSIVE
        was_passive = was_passive or state.role is FrRole.PASSIVE


@given(st.integers(0, 9), st.integers(0, 9), st.integers(1, 2), st.sampled_from([CW, CCW]))
def test_fr_handle_is_pure(own, origin, rnd, d):
    state = fr_init(own)[0]
    try:
        first = fr_handle(state, FrToken(origin, rnd, d), d)
    except ProtocolViolation:
        return
    assert fr_handle(state, FrToken(origin, rnd, d), d) == first
