"""Attacker classes and their decision rules.

Smart attackers contend greedily in the CAP and jam the longest GTS; random
attackers jam the GTS closest to the mean length; weak attackers jam the
shortest. Knowledge of the GTS layout comes only from received beacons.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .gts import BeaconPayload, GtsDescriptor
from .kernel import RngStream
from .superframe import SuperframeConfig


class AttackerKind(enum.Enum):
    SMART = "smart"
    RANDOM = "random"
    WEAK = "weak"


@dataclass(frozen=True)
class AttackerProfile:
    kind: AttackerKind
    activation: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.activation <= 1.0:
            raise ValueError(f"activation must lie in [0, 1], got {self.activation}")

    @property
    def attacks_cap(self) -> bool:
        return self.kind is AttackerKind.SMART

    @property
    def attacks_cfp(self) -> bool:
        return True


@dataclass
class AttackerState:
    rng: RngStream
    synchronized: bool = False
    known_gts: tuple[GtsDescriptor, ...] = ()
    beacons_seen: int = 0
    jams: list = field(default_factory=list)


def on_beacon(state: AttackerState, payload: BeaconPayload) -> AttackerState:
    state.synchronized = True
    state.known_gts = tuple(payload.gts)
    state.beacons_seen += 1
    return state


def choose_target_slot(state: AttackerState, profile: AttackerProfile) -> GtsDescriptor | None:
    gts = state.known_gts
    if not state.synchronized or not gts:
        return None
    if profile.kind is AttackerKind.SMART:
        key = lambda d: (-d.length_slots, d.start_slot)  # noqa: E731
    elif profile.kind is AttackerKind.WEAK:
        key = lambda d: (d.length_slots, d.start_slot)  # noqa: E731
    else:
        mean = sum(d.length_slots for d in gts) / len(gts)
        key = lambda d: (abs(d.length_slots - mean), d.start_slot)  # noqa: E731
    return min(gts, key=key)


@dataclass(frozen=True)
class BackoffOverride:
    backoff: int
    greedy: bool


def cap_attack_policy(profile: AttackerProfile) -> BackoffOverride | None:
    """Backoff override for the CAP; None for attackers that do not contend."""
    if profile.kind is AttackerKind.SMART:
        return BackoffOverride(backoff=0, greedy=True)
    return None


@dataclass(frozen=True)
class JamPlan:
    target: GtsDescriptor
    start: int
    end: int


def jam(state: AttackerState, target: GtsDescriptor, superframe_start: int, cfg: SuperframeConfig) -> JamPlan:
    """Interference spanning every slot of ``target`` in the given superframe."""
    start = superframe_start + cfg.slot_start(target.start_slot)
    plan = JamPlan(target, start, start + target.length_slots * cfg.slot_symbols)
    state.jams.append(plan)
    return plan
