"""Slotted CSMA/CA for the CAP.

The state transitions live on :class:`BackoffState` so the event-driven
network model and the synchronous :func:`attempt_access` driver share them.

Timing conventions:

* backoff boundaries are aligned to the superframe start;
* a CCA started at boundary ``b`` samples the medium at ``b + cca_symbols``,
  so it sees frames that begin at ``b``;
* after ``cw_init`` idle CCAs the frame starts at the following boundary;
* a countdown that reaches the CAP end pauses and resumes at the next CAP;
* if CCAs plus the frame cannot finish inside the CAP, the node waits for the
  next CAP and draws a fresh backoff (NB and BE are kept).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .kernel import RngStream, draw_uniform
from .superframe import MediumState, SuperframeConfig


@dataclass(frozen=True)
class CsmaParams:
    min_be: int = 3
    max_be: int = 5
    max_csma_backoffs: int = 4
    cw_init: int = 2
    unit_backoff_symbols: int = 20
    cca_symbols: int = 8

    def __post_init__(self):
        if not 0 <= self.min_be <= self.max_be:
            raise ValueError("need 0 <= min_be <= max_be")
        if self.max_csma_backoffs < 0:
            raise ValueError("max_csma_backoffs must be >= 0")
        if self.cw_init < 1:
            raise ValueError("cw_init must be >= 1")
        if not 0 < self.cca_symbols <= self.unit_backoff_symbols:
            raise ValueError("cca_symbols must fit inside one backoff period")


@dataclass
class BackoffState:
    nb: int
    be: int
    cw: int
    pending_frame: object = None

    @classmethod
    def start(cls, params: CsmaParams, frame: object = None) -> BackoffState:
        return cls(nb=0, be=params.min_be, cw=params.cw_init, pending_frame=frame)

    def on_idle(self) -> bool:
        """Record an idle CCA; True when the contention window is exhausted."""
        self.cw -= 1
        return self.cw == 0

    def on_busy(self, params: CsmaParams) -> bool:
        """Record a busy CCA; True when the NB budget is exhausted (access failure)."""
        self.cw = params.cw_init
        self.nb += 1
        self.be = min(self.be + 1, params.max_be)
        return self.nb > params.max_csma_backoffs


def next_backoff(state: BackoffState, rng: RngStream, override: int | None = None) -> int:
    """Backoff periods to wait: uniform over [0, 2^BE - 1] unless overridden."""
    if override is not None:
        return override
    return draw_uniform(rng, 0, (1 << state.be) - 1)


def frame_fits_in_cap(t_grant: int, frame_symbols: int, cfg: SuperframeConfig, cfp_slots: int = 0) -> bool:
    """Whether a frame starting at ``t_grant`` finishes by the end of its CAP."""
    base = t_grant - t_grant % cfg.interval_symbols
    return t_grant + frame_symbols <= base + cfg.cfp_start(cfp_slots)


def round_to_backoff(symbols: int, unit: int) -> int:
    return -(-symbols // unit) * unit


class CapClock:
    """Backoff-boundary arithmetic for one CAP layout.

    ``cap_end_of(sf_base)`` gives the absolute CAP end of the superframe that
    starts at ``sf_base``; the default uses a fixed CFP size.
    """

    def __init__(self, cfg: SuperframeConfig, params: CsmaParams,
                 cap_end_of: Callable[[int], int] | None = None, cfp_slots: int = 0):
        self.cfg = cfg
        self.unit = params.unit_backoff_symbols
        self.interval = cfg.interval_symbols
        if cap_end_of is None:
            end = cfg.cfp_start(cfp_slots)
            cap_end_of = lambda base: base + end  # noqa: E731
        self.cap_end_of = cap_end_of

    def cap_start(self, t: int) -> int:
        return t - t % self.interval + self.cfg.beacon_symbols

    def next_cap_start(self, t: int) -> int:
        """Start of the first CAP after the one containing (or ending at) ``t``."""
        return self.owner(t) + self.interval + self.cfg.beacon_symbols

    def align(self, t: int) -> int:
        """First backoff boundary at or after ``t`` (boundaries are superframe-aligned)."""
        base = t - t % self.interval
        off = t - base
        return base + round_to_backoff(off, self.unit)

    def owner(self, t: int) -> int:
        """Start of the superframe whose CAP can contain or end at ``t``.

        An interval's first instant belongs to the beacon, so ``t`` landing
        exactly there is the end of the previous CAP (empty CFP, SO = BO).
        """
        return (t - 1) - (t - 1) % self.interval

    def countdown(self, boundary: int, periods: int) -> tuple[int, int]:
        """Advance ``periods`` backoff periods from ``boundary`` within this CAP.

        Returns ``(t, left)``: when ``left`` is 0, ``t`` is the boundary where
        the countdown ends; otherwise the CAP ran out at ``t`` with ``left``
        periods still to count in the next CAP.
        """
        cap_end = self.cap_end_of(self.owner(boundary))
        room = max(0, (cap_end - boundary) // self.unit)
        if periods <= room:
            return boundary + periods * self.unit, 0
        return cap_end, periods - room

    def can_proceed(self, boundary: int, cw: int, frame_symbols: int) -> bool:
        return boundary + cw * self.unit + frame_symbols <= self.cap_end_of(self.owner(boundary))


@dataclass(frozen=True)
class AccessGranted:
    at: int
    state: BackoffState


class ChannelAccessFailure(Exception):
    def __init__(self, at: int, state: BackoffState):
        super().__init__(f"channel access failure at t={at} after NB={state.nb}")
        self.at = at
        self.state = state


def attempt_access(
    state: BackoffState,
    medium: MediumState,
    cfg: SuperframeConfig,
    params: CsmaParams,
    rng: RngStream,
    t_start: int,
    frame_symbols: int,
    cfp_slots: int = 0,
    backoff_override: int | None = None,
    horizon: int | None = None,
) -> AccessGranted:
    """Run the slotted CSMA/CA procedure against a medium whose occupancy is known.

    Returns the transmission start time, or raises :class:`ChannelAccessFailure`.
    ``horizon`` bounds the search (default: 64 beacon intervals).
    """
    clock = CapClock(cfg, params, cfp_slots=cfp_slots)
    unit = params.unit_backoff_symbols
    if horizon is None:
        horizon = t_start + 64 * cfg.interval_symbols
    frame_symbols = round_to_backoff(frame_symbols, unit)

    b = clock.align(max(t_start, clock.cap_start(t_start)))
    if b >= clock.cap_end_of(clock.owner(b)):
        b = clock.next_cap_start(b)
    left = next_backoff(state, rng, backoff_override)
    while b < horizon:
        b, left = clock.countdown(b, left)
        if left:
            b = clock.next_cap_start(b)
            continue
        if not clock.can_proceed(b, state.cw, frame_symbols):
            b = clock.next_cap_start(b)
            left = next_backoff(state, rng, backoff_override)
            continue
        if medium.cca(b + params.cca_symbols):
            if state.on_idle():
                return AccessGranted(b + unit, state)
            b += unit
            left = 0
        else:
            if state.on_busy(params):
                raise ChannelAccessFailure(b + params.cca_symbols, state)
            b += unit
            left = next_backoff(state, rng, backoff_override)
    raise RuntimeError("attempt_access exceeded its horizon")
