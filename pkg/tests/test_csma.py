import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from wbansim.csma import (
    BackoffState, CapClock, ChannelAccessFailure, CsmaParams, attempt_access, frame_fits_in_cap,
    next_backoff,
)
from wbansim.kernel import RngStream
from wbansim.superframe import MediumState, SuperframeConfig, TxKind

from csma_fuzz import random_trace, violations

CFG = SuperframeConfig()
P = CsmaParams()


def busy_medium(until):
    m = MediumState()
    m.begin_transmission(1000, TxKind.DUMMY, 0, until)
    return m


def test_idle_channel_zero_backoff_grants_after_cw_ccas():
    st_ = BackoffState.start(P)
    got = attempt_access(st_, MediumState(), CFG, P, RngStream(1, "n"), 60, 40, backoff_override=0)
    # CCAs at boundaries 60 and 80, frame at the next boundary
    assert got.at == 60 + P.cw_init * P.unit_backoff_symbols
    assert st_.nb == 0 and st_.cw == 0


def test_continuously_busy_channel_fails_after_budget():
    st_ = BackoffState.start(P)
    with pytest.raises(ChannelAccessFailure) as e:
        attempt_access(st_, busy_medium(10 * CFG.interval_symbols), CFG, P, RngStream(1, "n"), 60, 40)
    assert e.value.state.nb == P.max_csma_backoffs + 1
    assert st_.be == P.max_be


def test_zero_budget_fails_on_first_busy_cca():
    p = CsmaParams(max_csma_backoffs=0)
    st_ = BackoffState.start(p)
    with pytest.raises(ChannelAccessFailure) as e:
        attempt_access(st_, busy_medium(1000), CFG, p, RngStream(1, "n"), 60, 40, backoff_override=0)
    assert e.value.at == 60 + p.cca_symbols and st_.nb == 1


def test_cca_sees_frame_starting_at_the_boundary():
    m = MediumState()
    m.begin_transmission(1000, TxKind.DUMMY, 80, 120)
    st_ = BackoffState.start(P)
    got = attempt_access(st_, m, CFG, P, RngStream(3, "n"), 60, 40, backoff_override=0)
    # CCA at 68 idle, 88 and 108 busy, 128 and 148 idle
    assert st_.nb == 2
    assert got.at == 160


def test_frame_fits_examples():
    end = CFG.cfp_start(0)
    assert frame_fits_in_cap(60, 1, CFG)
    assert frame_fits_in_cap(end - 40, 40, CFG)
    assert not frame_fits_in_cap(end - 39, 40, CFG)
    assert not frame_fits_in_cap(60, CFG.cap_length(0) + 1, CFG)


def test_deferred_frame_resumes_next_cap():
    # too little room before the CFP: the attempt moves to the next CAP
    cfp = 12
    end = CFG.cfp_start(cfp)
    st_ = BackoffState.start(P)
    got = attempt_access(st_, MediumState(), CFG, P, RngStream(1, "n"), end - 20, 100,
                         cfp_slots=cfp, backoff_override=0)
    assert got.at == CFG.interval_symbols + CFG.beacon_symbols + 2 * P.unit_backoff_symbols


def test_countdown_pauses_at_cap_end():
    clock = CapClock(CFG, P, cfp_slots=4)
    end = CFG.cfp_start(4)
    t, left = clock.countdown(end - 60, 5)
    assert (t, left) == (end, 2)
    assert clock.next_cap_start(t) == CFG.interval_symbols + CFG.beacon_symbols


def test_backoff_window_examples():
    s = RngStream(11, "b")
    assert next_backoff(BackoffState(0, 0, 2), s) == 0
    assert next_backoff(BackoffState(0, 3, 2), s, override=0) == 0
    counts = Counter(next_backoff(BackoffState(0, 3, 2), s) for _ in range(10_000))
    assert set(counts) == set(range(8))


@given(st.integers(0, 2**63), st.integers(0, 5))
def test_lone_node_on_idle_channel_succeeds_within_one_cap(seed, min_be):
    p = CsmaParams(min_be=min_be, max_be=max(min_be, 5))
    st_ = BackoffState.start(p)
    start = CFG.beacon_symbols
    got = attempt_access(st_, MediumState(), CFG, p, RngStream(seed, "n"), start, 40)
    assert got.at + 40 <= CFG.cfp_start(0)
    assert st_.nb == 0


@pytest.mark.parametrize("bad", [
    dict(min_be=4, max_be=3), dict(min_be=-1), dict(max_csma_backoffs=-1), dict(cw_init=0),
    dict(cca_symbols=21),
])
def test_invalid_params_rejected(bad):
    with pytest.raises(ValueError):
        CsmaParams(**bad)


@given(st.integers(0, 2**32))
def test_state_machine_invariants_on_random_traces(seed):
    t = random_trace(random.Random(seed))
    assert violations(t) == []


def test_failure_rate_grows_with_busy_fraction():
    rates = []
    for f in (0.0, 0.3, 0.6, 0.9, 1.0):
        rnd = random.Random(99)
        rates.append(sum(random_trace(rnd, busy_fraction=f).failed for _ in range(300)) / 300)
    assert rates[0] == 0.0 and rates[-1] == 1.0
    assert rates == sorted(rates)
