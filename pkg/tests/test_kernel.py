from collections import Counter

import pytest
from hypothesis import given, strategies as st

from wbansim.kernel import (
    Event, EventKind, RngStream, SchedulingError, Simulator, derive_seed, draw_uniform,
)


def collecting(sim, target=1):
    seen = []
    sim.register(target, lambda ev: seen.append((sim.now, ev.payload)))
    return seen


def test_event_at_time_zero_dispatches_at_zero():
    sim = Simulator()
    seen = collecting(sim)
    sim.at(0, EventKind.BEACON_TX, 1, "beacon")
    assert sim.run_until(10) == 1
    assert seen == [(0, "beacon")]


def test_equal_times_dispatch_in_insertion_order():
    sim = Simulator()
    seen = collecting(sim)
    sim.at(100, EventKind.CCA, 1, "A")
    sim.at(100, EventKind.BEACON_TX, 1, "B")
    sim.run_until(100)
    assert [p for _, p in seen] == ["A", "B"]


def test_past_event_rejected():
    sim = Simulator()
    sim.run_until(10)
    with pytest.raises(SchedulingError):
        sim.at(5, EventKind.CCA, 1)


def test_run_until_on_empty_queue_advances_clock():
    sim = Simulator()
    assert sim.run_until(1000) == 0
    assert sim.now == 1000


def test_future_event_stays_queued():
    sim = Simulator()
    seen = collecting(sim)
    sim.at(500, EventKind.CCA, 1)
    sim.run_until(400)
    assert seen == [] and sim.now == 400 and sim.pending() == 1
    sim.run_until(500)
    assert len(seen) == 1


def test_cancelled_event_is_skipped():
    sim = Simulator()
    seen = collecting(sim)
    h = sim.at(5, EventKind.CCA, 1, "x")
    sim.at(6, EventKind.CCA, 1, "y")
    Simulator.cancel(h)
    sim.run_until(10)
    assert [p for _, p in seen] == ["y"]


@given(st.lists(st.integers(0, 50), min_size=1, max_size=40))
def test_dispatch_is_sorted_by_time_then_sequence(times):
    sim = Simulator(trace=True)
    sim.register(1, lambda ev: None)
    for i, t in enumerate(times):
        sim.at(t, EventKind.CCA, 1, i)
    sim.run_until(50)
    keys = [(at, seq) for at, seq, _, _ in sim.trace]
    assert keys == sorted(keys)
    assert len(keys) == len(times)


@given(st.lists(st.tuples(st.integers(0, 30), st.integers(0, 30)), min_size=1, max_size=20))
def test_clock_never_decreases_with_handler_scheduling(pairs):
    sim = Simulator()
    observed = []

    def handler(ev):
        observed.append(sim.now)
        if ev.payload:
            sim.at(sim.now + ev.payload, EventKind.CCA, 1, 0)

    sim.register(1, handler)
    for t, d in pairs:
        sim.at(t, EventKind.CCA, 1, d)
    sim.run_until(100)
    assert observed == sorted(observed)


def test_handler_without_registration_is_an_error():
    sim = Simulator()
    sim.schedule(Event(1, EventKind.CCA, 42))
    with pytest.raises(KeyError):
        sim.run_until(2)


def test_degenerate_range_returns_lo():
    s = RngStream(7, "a")
    assert draw_uniform(s, 0, 0) == 0
    assert draw_uniform(s, 5, 5) == 5


def test_inverted_range_is_rejected():
    with pytest.raises(ValueError):
        draw_uniform(RngStream(7, "a"), 3, 2)


def test_uniform_frequencies_within_five_percent():
    s = RngStream(derive_seed(2024, "freq"), "backoff")
    counts = Counter(draw_uniform(s, 0, 7) for _ in range(100_000))
    assert set(counts) == set(range(8))
    for v in range(8):
        assert abs(counts[v] - 12_500) <= 0.05 * 12_500


@given(st.integers(0, 2**64 - 1), st.text(max_size=12), st.integers(-5, 5), st.integers(0, 40))
def test_stream_replays_identically(seed, sid, lo, width):
    a, b = RngStream(seed, sid), RngStream(seed, sid)
    xs = [draw_uniform(a, lo, lo + width) for _ in range(20)]
    assert xs == [draw_uniform(b, lo, lo + width) for _ in range(20)]
    assert all(lo <= x <= lo + width for x in xs)


def test_draw_depends_only_on_seed_stream_and_index():
    a = RngStream(9, "n4")
    for _ in range(10):
        a.next_u64()
    assert a.next_u64() == RngStream(9, "n4", index=10).next_u64()


def test_streams_and_seeds_are_distinct():
    assert RngStream(1, "a").next_u64() != RngStream(1, "b").next_u64()
    assert derive_seed(1, "node", 1) != derive_seed(1, "node", 2)
    assert derive_seed(1, "node", 1) == derive_seed(1, "node", 1)


def test_known_values_are_frozen():
    # computed once with a standalone hashlib script; guards cross-platform stability
    s = RngStream(1, "node-1/csma")
    assert [s.next_u64() for _ in range(3)] == [
        8929845588759055396, 17923847625369254843, 4693175555777530093,
    ]
    assert derive_seed(1, "replication", 0) == 14851773203127676065
