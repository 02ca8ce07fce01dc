"""Deterministic discrete-event kernel.

Time is an integer count of PHY symbol periods. Events at the same instant
are dispatched in insertion order. Randomness comes from counter-based
streams keyed by (master seed, stream id, draw index), so a value never
depends on how many draws other entities made.
"""
from __future__ import annotations

import enum
import hashlib
import heapq
import struct
from dataclasses import dataclass, field
from typing import Any, Callable


class EventKind(enum.IntEnum):
    BEACON_TX = 0
    BACKOFF_SLOT_BOUNDARY = 1
    CCA = 2
    FRAME_TX_START = 3
    FRAME_TX_END = 4
    GTS_SLOT_START = 5
    GTS_SLOT_END = 6
    JAM_START = 7
    JAM_END = 8


@dataclass(eq=False)
class Event:
    at: int
    kind: EventKind
    target: int
    payload: Any = None
    seq: int = -1
    cancelled: bool = False


class SchedulingError(ValueError):
    """An event was scheduled before the current simulation time."""


class Simulator:
    """Single-threaded event loop.

    Handlers are registered per target entity id and called with the event.
    When ``trace`` is enabled every dispatched event is appended to
    ``self.trace`` as ``(at, seq, kind, target)``.
    """

    def __init__(self, trace: bool = False):
        self.now = 0
        self._queue: list[tuple[int, int, Event]] = []
        self._seq = 0
        self._handlers: dict[int, Callable[[Event], None]] = {}
        self.dispatched = 0
        self.trace: list[tuple] | None = [] if trace else None

    def register(self, target: int, handler: Callable[[Event], None]) -> None:
        self._handlers[target] = handler

    def schedule(self, event: Event) -> Event:
        if event.at < self.now:
            raise SchedulingError(f"event at t={event.at} scheduled when now={self.now}")
        event.seq = self._seq
        self._seq += 1
        heapq.heappush(self._queue, (event.at, event.seq, event))
        return event

    def at(self, t: int, kind: EventKind, target: int, payload: Any = None) -> Event:
        return self.schedule(Event(t, kind, target, payload))

    @staticmethod
    def cancel(handle: Event) -> None:
        handle.cancelled = True

    def run_until(self, end: int) -> int:
        """Dispatch every event with ``at <= end``; returns the number dispatched."""
        if end < self.now:
            raise SchedulingError(f"run_until({end}) is before now={self.now}")
        queue = self._queue
        handlers = self._handlers
        trace = self.trace
        n = 0
        while queue and queue[0][0] <= end:
            at, seq, ev = heapq.heappop(queue)
            if ev.cancelled:
                continue
            self.now = at
            if trace is not None:
                trace.append((at, seq, int(ev.kind), ev.target))
            handlers[ev.target](ev)
            n += 1
        self.now = end
        self.dispatched += n
        return n

    def pending(self) -> int:
        return sum(1 for _, _, ev in self._queue if not ev.cancelled)


def derive_seed(master: int, *labels: Any) -> int:
    """64-bit seed derived from a master seed and any number of labels."""
    h = hashlib.blake2b(digest_size=8, person=b"wbansim-seed")
    h.update(struct.pack(">Q", master & 0xFFFFFFFFFFFFFFFF))
    for label in labels:
        h.update(b"\x1f" + str(label).encode())
    return int.from_bytes(h.digest(), "big")


@dataclass
class RngStream:
    """Counter-based random stream.

    Draw ``i`` of stream ``(seed, stream_id)`` is a keyed BLAKE2b hash of the
    draw index, which makes the sequence identical on every platform.
    """

    seed: int
    stream_id: str
    index: int = 0
    _key: bytes = field(init=False, repr=False)

    def __post_init__(self):
        self._key = hashlib.blake2b(
            struct.pack(">Q", self.seed & 0xFFFFFFFFFFFFFFFF) + self.stream_id.encode(),
            digest_size=32,
        ).digest()

    def next_u64(self) -> int:
        d = hashlib.blake2b(struct.pack(">Q", self.index), digest_size=8, key=self._key).digest()
        self.index += 1
        return int.from_bytes(d, "big")

    def uniform(self, lo: int, hi: int) -> int:
        return draw_uniform(self, lo, hi)

    def random(self) -> float:
        """Float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def bernoulli(self, p: float) -> bool:
        if p <= 0.0:
            return False
        if p >= 1.0:
            return True
        return self.random() < p


_U64 = 1 << 64


def draw_uniform(stream: RngStream, lo: int, hi: int) -> int:
    """Unbiased integer in the closed range [lo, hi] (rejection sampling)."""
    if lo > hi:
        raise ValueError(f"empty range [{lo}, {hi}]")
    n = hi - lo + 1
    if n == 1:
        return lo
    limit = _U64 - (_U64 % n)
    while True:
        v = stream.next_u64()
        if v < limit:
            return lo + v % n
