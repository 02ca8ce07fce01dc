"""Coordinator-side GTS bookkeeping: allocation, deallocation, beacon payload.

Descriptors are kept in grant order and packed contiguously downward from
the end of the active portion: the first grant sits at the top slots, each
later grant directly below the previous one.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

from .superframe import SuperframeConfig

log = logging.getLogger(__name__)


class Direction(enum.Enum):
    UPLINK = "uplink"
    DOWNLINK = "downlink"


class DenialReason(enum.Enum):
    DUPLICATE = "duplicate"
    CAPACITY = "capacity"
    SPACE = "space"


@dataclass(frozen=True)
class GtsRequest:
    device: int
    length_slots: int
    direction: Direction = Direction.UPLINK

    def __post_init__(self):
        if self.length_slots < 1:
            raise ValueError(f"malformed GTS request: length_slots={self.length_slots}")


@dataclass(frozen=True)
class GtsDescriptor:
    device: int
    start_slot: int
    length_slots: int
    direction: Direction = Direction.UPLINK

    @property
    def slots(self) -> range:
        return range(self.start_slot, self.start_slot + self.length_slots)


@dataclass(frozen=True)
class Granted:
    descriptor: GtsDescriptor


@dataclass(frozen=True)
class Denied:
    reason: DenialReason


@dataclass
class GtsTable:
    capacity: int = 7
    descriptors: list[GtsDescriptor] = field(default_factory=list)

    def total_slots(self) -> int:
        return sum(d.length_slots for d in self.descriptors)

    def granted_slots(self) -> set[int]:
        return {s for d in self.descriptors for s in d.slots}

    def find(self, device: int, direction: Direction) -> GtsDescriptor | None:
        for d in self.descriptors:
            if d.device == device and d.direction is direction:
                return d
        return None

    def copy(self) -> GtsTable:
        return GtsTable(self.capacity, list(self.descriptors))


def _pack(entries, cfg: SuperframeConfig) -> list[GtsDescriptor]:
    out = []
    top = cfg.num_slots
    for device, length, direction in entries:
        top -= length
        out.append(GtsDescriptor(device, top, length, direction))
    return out


def handle_request(req: GtsRequest, table: GtsTable, cfg: SuperframeConfig) -> Granted | Denied:
    """Try to grant ``req``; mutates ``table`` on success."""
    if table.find(req.device, req.direction) is not None:
        return Denied(DenialReason.DUPLICATE)
    if len(table.descriptors) >= table.capacity:
        return Denied(DenialReason.CAPACITY)
    new_total = table.total_slots() + req.length_slots
    if new_total > cfg.cfp_slot_capacity or cfg.cap_length(new_total) < cfg.min_cap_symbols:
        return Denied(DenialReason.SPACE)
    desc = GtsDescriptor(
        req.device, cfg.num_slots - new_total, req.length_slots, req.direction
    )
    table.descriptors.append(desc)
    return Granted(desc)


def deallocate(device: int, direction: Direction, table: GtsTable, cfg: SuperframeConfig) -> GtsTable:
    """Remove a descriptor and repack the survivors. Unknown device: logged no-op."""
    target = table.find(device, direction)
    if target is None:
        log.warning("deallocate: no GTS for device %s (%s)", device, direction.value)
        return table
    survivors = [
        (d.device, d.length_slots, d.direction) for d in table.descriptors if d is not target
    ]
    table.descriptors = _pack(survivors, cfg)
    return table


@dataclass(frozen=True)
class BeaconPayload:
    beacon_order: int
    superframe_order: int
    cfp_start_slot: int
    gts: tuple[GtsDescriptor, ...]


def build_beacon(table: GtsTable, cfg: SuperframeConfig) -> BeaconPayload:
    return BeaconPayload(
        cfg.beacon_order,
        cfg.superframe_order,
        cfg.num_slots - table.total_slots(),
        tuple(table.descriptors),
    )
