"""Beacon-enabled superframe timing and the shared medium.

All durations are integer symbols. Layout of one beacon interval::

    | beacon | CAP ............ | CFP (GTS slots) | inactive ... |
    0        beacon_symbols     cfp_start         active         interval

The CFP is packed against the end of the active portion and grows toward
the CAP as descriptors are added.
"""
from __future__ import annotations

import enum
from functools import cached_property
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable

if TYPE_CHECKING:
    from .gts import GtsTable


@dataclass(frozen=True)
class SuperframeConfig:
    beacon_order: int = 3
    superframe_order: int = 3
    num_slots: int = 16
    base_slot_symbols: int = 60
    cfp_slot_capacity: int = 7
    beacon_symbols: int = 60
    min_cap_symbols: int = 440

    def __post_init__(self):
        if not 0 <= self.superframe_order <= self.beacon_order <= 14:
            raise ValueError(
                f"need 0 <= SO <= BO <= 14, got SO={self.superframe_order} BO={self.beacon_order}"
            )
        if self.num_slots < 1 or self.base_slot_symbols < 1:
            raise ValueError("num_slots and base_slot_symbols must be positive")
        if self.cfp_slot_capacity < 0:
            raise ValueError("cfp_slot_capacity must be >= 0")
        if not 0 < self.beacon_symbols < self.active_symbols:
            raise ValueError("beacon must be shorter than the active portion")
        if self.beacon_symbols + self.min_cap_symbols > self.active_symbols:
            raise ValueError("beacon plus minimum CAP exceed the active portion")

    @cached_property
    def slot_symbols(self) -> int:
        return self.base_slot_symbols << self.superframe_order

    @cached_property
    def active_symbols(self) -> int:
        return self.base_slot_symbols * self.num_slots << self.superframe_order

    @cached_property
    def interval_symbols(self) -> int:
        return self.base_slot_symbols * self.num_slots << self.beacon_order

    def cfp_start(self, cfp_slots: int) -> int:
        """Offset of the CFP within the interval for a CFP of ``cfp_slots`` slots."""
        return self.active_symbols - cfp_slots * self.slot_symbols

    def cap_length(self, cfp_slots: int) -> int:
        return self.cfp_start(cfp_slots) - self.beacon_symbols

    def slot_start(self, slot: int) -> int:
        return slot * self.slot_symbols


class Period(enum.Enum):
    BEACON = "beacon"
    CAP = "cap"
    CFP = "cfp"
    INACTIVE = "inactive"


@dataclass(frozen=True)
class PeriodTag:
    period: Period
    slot: int | None = None

    def __str__(self):
        return f"CFP({self.slot})" if self.period is Period.CFP else self.period.name


def period_of(t: int, cfg: SuperframeConfig, gts_table: GtsTable | None = None) -> PeriodTag:
    """Which part of the superframe the instant ``t`` falls in."""
    off = t % cfg.interval_symbols
    if off < cfg.beacon_symbols:
        return PeriodTag(Period.BEACON)
    if off >= cfg.active_symbols:
        return PeriodTag(Period.INACTIVE)
    slot = off // cfg.slot_symbols
    if gts_table is not None and slot in gts_table.granted_slots():
        return PeriodTag(Period.CFP, slot)
    return PeriodTag(Period.CAP)


class TxKind(enum.Enum):
    DATA = "data"
    GTS_REQUEST = "gts-request"
    BEACON = "beacon"
    JAM = "jam"
    DUMMY = "dummy"


@dataclass(eq=False)
class Transmission:
    entity: int
    kind: TxKind
    start: int
    end: int
    collided: bool = False
    # entity ids of the transmissions that overlapped this one
    hit_by: set = field(default_factory=set)


class MediumError(RuntimeError):
    pass


class MediumState:
    """Single shared channel with half-open occupancy intervals.

    ``in_cap`` (optional) lets CCA enforce that it is only used in the CAP.
    """

    def __init__(self, in_cap: Callable[[int], bool] | None = None):
        self.occupants: list[Transmission] = []
        self.in_cap = in_cap

    def _purge(self, t: int) -> None:
        if self.occupants and any(o.end <= t for o in self.occupants):
            self.occupants = [o for o in self.occupants if o.end > t]

    def begin_transmission(self, entity: int, kind: TxKind, t_start: int, t_end: int) -> Transmission:
        if t_end <= t_start:
            raise MediumError(f"empty transmission [{t_start}, {t_end})")
        self._purge(t_start)
        tx = Transmission(entity, kind, t_start, t_end)
        for other in self.occupants:
            if other.entity == entity:
                raise MediumError(f"entity {entity} is already transmitting")
            if other.kind is TxKind.BEACON or kind is TxKind.BEACON:
                continue
            # jammers cause collisions but are never their victims
            if kind is not TxKind.JAM:
                tx.collided = True
                tx.hit_by.add(other.entity)
            if other.kind is not TxKind.JAM:
                other.collided = True
                other.hit_by.add(entity)
        self.occupants.append(tx)
        return tx

    def end_transmission(self, tx: Transmission) -> None:
        try:
            self.occupants.remove(tx)
        except ValueError:
            pass

    def busy(self, t: int) -> bool:
        return any(o.start <= t < o.end for o in self.occupants)

    def cca(self, t: int) -> bool:
        """True when the channel is idle at ``t``."""
        if self.in_cap is not None and not self.in_cap(t):
            raise MediumError(f"CCA outside the CAP at t={t}")
        return not self.busy(t)
