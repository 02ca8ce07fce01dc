"""One simulated WBAN: a coordinator, legitimate nodes and attackers.

Entity ids: coordinator 0, nodes 1..N, attackers 1000+.

Per superframe, at the beacon instant the coordinator (in node-id order)
ends expired sessions, builds the beacon from the GTS table and hands it to
every node and, unless disabled, every attacker. Grants and deallocations
made during a superframe show up in the next beacon.

Legitimate node life cycle::

    IDLE --idle countdown--> REQUESTING --granted--> WAIT_GRANT --beacon--> HOLDING
      ^                         |  ^ failed/denied: retry after a pause          |
      +-------------------------+--+--------------- session over: deallocate ---+
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .adversary import (
    AttackerKind, AttackerProfile, AttackerState, cap_attack_policy, choose_target_slot, jam,
    on_beacon,
)
from .csma import BackoffState, CapClock, next_backoff, round_to_backoff
from .gts import (
    BeaconPayload, Denied, Direction, GtsRequest, GtsTable, build_beacon, deallocate,
    handle_request,
)
from .kernel import Event, EventKind, RngStream, Simulator, derive_seed, draw_uniform
from .metrics import RunMetrics
from .scenario import Scenario
from .security.suites import (
    KeyRecord, SecurityError, SecuritySuite, protect, unprotect,
)
from .superframe import MediumState, TxKind

COORDINATOR = 0
ATTACKER_BASE = 1000


class NodeState(enum.Enum):
    IDLE = "idle"
    REQUESTING = "requesting"
    WAIT_GRANT = "wait-grant"
    HOLDING = "holding"


class CsmaAgent:
    """Event-driven slotted CSMA/CA for one entity.

    Subclasses implement ``on_access_failure`` and ``on_frame_done``.
    """

    frame_kind = TxKind.GTS_REQUEST

    def __init__(self, ident: int, net: Network, rng: RngStream, frame_symbols: int):
        self.id = ident
        self.net = net
        self.rng = rng
        self.frame_symbols = round_to_backoff(frame_symbols, net.params.unit_backoff_symbols)
        self.csma: BackoffState | None = None
        self.pending: Event | None = None
        self.tx = None
        self.override: int | None = None

    # --- CSMA procedure -------------------------------------------------
    def begin_access(self, boundary: int) -> None:
        self.csma = BackoffState.start(self.net.params)
        self._backoff_from(boundary)

    def abort_access(self) -> None:
        if self.pending is not None:
            Simulator.cancel(self.pending)
            self.pending = None
        self.csma = None

    def _backoff_from(self, boundary: int) -> None:
        self._count(boundary, next_backoff(self.csma, self.rng, self.override))

    def _count(self, boundary: int, periods: int) -> None:
        clock = self.net.clock
        t, left = clock.countdown(boundary, periods)
        if left:
            self._schedule(clock.next_cap_start(t), EventKind.BACKOFF_SLOT_BOUNDARY, left)
        elif clock.can_proceed(t, self.csma.cw, self.frame_symbols):
            self._schedule(t + self.net.params.cca_symbols, EventKind.CCA)
        else:
            self._schedule(clock.next_cap_start(t), EventKind.BACKOFF_SLOT_BOUNDARY, -1)

    def _schedule(self, t: int, kind: EventKind, payload=None) -> None:
        self.pending = self.net.sim.at(t, kind, self.id, payload)

    def handle(self, ev: Event) -> None:
        kind = ev.kind
        net = self.net
        if kind is EventKind.CCA:
            self.pending = None
            b = ev.at - net.params.cca_symbols
            if net.medium.cca(ev.at):
                if self.csma.on_idle():
                    self._schedule(b + net.params.unit_backoff_symbols, EventKind.FRAME_TX_START)
                else:
                    self._schedule(b + net.params.unit_backoff_symbols + net.params.cca_symbols,
                                   EventKind.CCA)
            elif self.csma.on_busy(net.params):
                self.csma = None
                self.on_access_failure(ev.at)
            else:
                self._backoff_from(b + net.params.unit_backoff_symbols)
        elif kind is EventKind.FRAME_TX_START:
            self.pending = None
            self.tx = net.medium.begin_transmission(
                self.id, self.frame_kind, ev.at, ev.at + self.frame_symbols
            )
            self._schedule(ev.at + self.frame_symbols, EventKind.FRAME_TX_END)
        elif kind is EventKind.FRAME_TX_END:
            self.pending = None
            tx, self.tx = self.tx, None
            net.medium.end_transmission(tx)
            self.csma = None
            self.on_frame_done(ev.at, not tx.collided)
        elif kind is EventKind.BACKOFF_SLOT_BOUNDARY:
            self.pending = None
            if ev.payload == -1:
                self._backoff_from(ev.at)
            else:
                self._count(ev.at, ev.payload)
        else:
            self.handle_other(ev)

    def handle_other(self, ev: Event) -> None:
        raise RuntimeError(f"{type(self).__name__} {self.id} got unexpected {ev.kind.name}")

    def on_access_failure(self, t: int) -> None:
        raise NotImplementedError

    def on_frame_done(self, t: int, delivered: bool) -> None:
        raise NotImplementedError


@dataclass
class SlotTx:
    slot: int
    tx: object
    frame: object = None


class Node(CsmaAgent):
    def __init__(self, ident: int, net: Network, gts_length: int):
        sc = net.scenario
        seed = net.seed
        super().__init__(ident, net, RngStream(seed, f"node-{ident}/csma"), sc.traffic.request_symbols)
        self.traffic_rng = RngStream(seed, f"node-{ident}/traffic")
        self.gts_length = gts_length
        self.direction = Direction(sc.traffic.direction)
        self.state = NodeState.IDLE
        self.countdown = self._draw_mean(sc.traffic.idle_superframes)
        self.session_left = 0
        self.suite = sc.security.suite_for(ident)
        self.keyrec: KeyRecord | None = None
        if self.suite is not SecuritySuite.NULL:
            self.keyrec = KeyRecord(net.key_for(ident), ident)

    def _draw_mean(self, mean: int) -> int:
        return draw_uniform(self.traffic_rng, 1, 2 * mean - 1)

    # --- beacon-time hooks ----------------------------------------------
    def end_of_session(self) -> bool:
        """Called before the beacon is built; True if the node releases its GTS."""
        if self.state is not NodeState.HOLDING:
            return False
        self.session_left -= 1
        if self.session_left > 0:
            return False
        self.state = NodeState.IDLE
        self.countdown = self._draw_mean(self.net.scenario.traffic.idle_superframes)
        return True

    def on_beacon(self, beacon: BeaconPayload, sf_base: int) -> None:
        net = self.net
        mine = next((d for d in beacon.gts if d.device == self.id and d.direction is self.direction), None)
        if self.state is NodeState.WAIT_GRANT and mine is not None:
            self.state = NodeState.HOLDING
            self.session_left = self._draw_mean(net.scenario.traffic.session_superframes)
        if self.state is NodeState.HOLDING:
            if mine is None:
                raise RuntimeError(f"node {self.id} holds a GTS missing from the beacon")
            if self.traffic_rng.bernoulli(net.scenario.traffic.data_probability):
                for slot in mine.slots:
                    net.sim.at(sf_base + net.cfg.slot_start(slot), EventKind.GTS_SLOT_START, self.id, slot)
            return
        if self.state is NodeState.IDLE:
            self.countdown -= 1
            if self.countdown <= 0:
                self.state = NodeState.REQUESTING
                self._start_request(sf_base)

    def _start_request(self, sf_base: int) -> None:
        net = self.net
        unit = net.params.unit_backoff_symbols
        periods = max(1, net.cfg.cap_length(net.cfp_slots) // unit)
        offset = draw_uniform(self.traffic_rng, 0, periods - 1) * unit
        self.begin_access(sf_base + net.cfg.beacon_symbols + offset)

    def _request_failed(self, cause: str) -> None:
        self.net.record_request(self.id, cause)
        self.state = NodeState.IDLE
        self.countdown = self.net.scenario.traffic.retry_superframes

    # --- CSMA outcomes ----------------------------------------------------
    def on_access_failure(self, t: int) -> None:
        self._request_failed("cap_access")

    def on_frame_done(self, t: int, delivered: bool) -> None:
        if not delivered:
            self._request_failed("collision")
            return
        result = self.net.coordinator_receive(GtsRequest(self.id, self.gts_length, self.direction))
        if isinstance(result, Denied):
            self._request_failed("denied")
        else:
            self.net.record_request(self.id, "ok")
            self.state = NodeState.WAIT_GRANT

    # --- CFP data ---------------------------------------------------------
    def handle_other(self, ev: Event) -> None:
        net = self.net
        if ev.kind is EventKind.GTS_SLOT_START:
            payload = net.scenario.traffic.payload_symbols
            tx = net.medium.begin_transmission(self.id, TxKind.DATA, ev.at, ev.at + payload)
            frame = None
            if self.keyrec is not None:
                frame = protect(net.payload_bytes(self.id, ev.payload), self.suite, self.keyrec)
            net.sim.at(ev.at + payload, EventKind.GTS_SLOT_END, self.id, SlotTx(ev.payload, tx, frame))
            net.sf_data_slots.add(ev.payload)
        elif ev.kind is EventKind.GTS_SLOT_END:
            st: SlotTx = ev.payload
            net.medium.end_transmission(st.tx)
            net.slot_outcome(self.id, st)
        else:
            super().handle_other(ev)


class Attacker(CsmaAgent):
    frame_kind = TxKind.DUMMY

    def __init__(self, ident: int, net: Network, profile: AttackerProfile):
        super().__init__(ident, net, RngStream(net.seed, f"attacker-{ident}/csma"),
                         net.scenario.attack.dummy_frame_symbols)
        self.profile = profile
        self.state = AttackerState(RngStream(net.seed, f"attacker-{ident}/activation"))
        policy = cap_attack_policy(profile)
        self.override = policy.backoff if policy else None
        self.greedy = bool(policy and policy.greedy)
        self.active = False
        self.jam_tx = None

    def on_beacon(self, beacon: BeaconPayload | None, sf_base: int) -> None:
        net = self.net
        if beacon is not None:
            on_beacon(self.state, beacon)
        self.abort_access()
        self.active = self.state.rng.bernoulli(self.profile.activation)
        if not self.active:
            return
        if self.greedy and self.state.synchronized:
            self.begin_access(sf_base + net.cfg.beacon_symbols)
        target = choose_target_slot(self.state, self.profile)
        if target is not None:
            plan = jam(self.state, target, sf_base, net.cfg)
            net.sim.at(plan.start, EventKind.JAM_START, self.id, plan)
            net.log_jam(self.id, plan)

    def _restart(self, t: int) -> None:
        boundary = self.net.clock.align(t)
        if self.net.in_cap(boundary):
            self.begin_access(boundary)

    def on_access_failure(self, t: int) -> None:
        self._restart(t)

    def on_frame_done(self, t: int, delivered: bool) -> None:
        self._restart(t)

    def handle_other(self, ev: Event) -> None:
        net = self.net
        if ev.kind is EventKind.JAM_START:
            plan = ev.payload
            self.jam_tx = net.medium.begin_transmission(self.id, TxKind.JAM, plan.start, plan.end)
            net.sf_jammed_slots.update(plan.target.slots)
            net.sim.at(plan.end, EventKind.JAM_END, self.id, plan)
        elif ev.kind is EventKind.JAM_END:
            net.medium.end_transmission(self.jam_tx)
            self.jam_tx = None
        else:
            super().handle_other(ev)


class Network:
    def __init__(self, scenario: Scenario, seed: int, trace: bool = False):
        self.scenario = scenario
        self.seed = seed
        self.cfg = scenario.superframe
        self.params = scenario.csma
        self.sim = Simulator(trace=trace)
        self.records: list[tuple] | None = [] if trace else None
        self.metrics = RunMetrics()
        self.table = GtsTable(scenario.gts.capacity)
        self.beacon = build_beacon(self.table, self.cfg)
        self.cfp_slots = 0
        self.cap_end_offset = self.cfg.active_symbols
        self.sf_index = -1
        self.sf_base = 0
        self.sf_data_slots: set[int] = set()
        self.sf_jammed_slots: set[int] = set()
        self.medium = MediumState(in_cap=self.in_cap)
        self.clock = CapClock(self.cfg, self.params, cap_end_of=self._cap_end_of)
        self.coord_acl: dict[int, KeyRecord] = {}
        self.security_verified = 0
        self.security_rejected = 0

        lengths = scenario.traffic.gts_lengths
        self.nodes = [Node(i, self, lengths[(i - 1) % len(lengths)])
                      for i in range(1, scenario.traffic.nodes + 1)]
        self.attackers = [Attacker(ATTACKER_BASE + j, self, p)
                          for j, p in enumerate(scenario.attack.roster())]
        for node in self.nodes:
            if node.keyrec is not None:
                self.coord_acl[node.id] = KeyRecord(node.keyrec.key, node.id)
        for ent in (*self.nodes, *self.attackers):
            self.sim.register(ent.id, ent.handle)
        self.sim.register(COORDINATOR, self._on_coordinator)
        self.sim.at(0, EventKind.BEACON_TX, COORDINATOR)

    # --- timing helpers ---------------------------------------------------
    def _cap_end_of(self, base: int) -> int:
        return base + self.cap_end_offset

    def in_cap(self, t: int) -> bool:
        off = t - self.sf_base
        return self.cfg.beacon_symbols <= off < self.cap_end_offset

    # --- security ----------------------------------------------------------
    def key_for(self, node: int) -> bytes:
        hexkey = self.scenario.security.keys.get(node)
        if hexkey is not None:
            return bytes.fromhex(hexkey)
        return derive_seed(self.scenario.run.seed, "key", node).to_bytes(8, "big") * 2

    def payload_bytes(self, node: int, slot: int) -> bytes:
        n = self.scenario.security.payload_octets
        head = f"{node}:{self.sf_index}:{slot}:".encode()
        return (head * (n // max(1, len(head)) + 1))[:n]

    # --- coordinator --------------------------------------------------------
    def _on_coordinator(self, ev: Event) -> None:
        if ev.kind is not EventKind.BEACON_TX:
            raise RuntimeError(f"coordinator got {ev.kind.name}")
        if self.sf_index >= 0:
            self._finish_superframe()
        self.sf_index += 1
        self.sf_base = ev.at
        for node in self.nodes:
            if node.end_of_session():
                deallocate(node.id, node.direction, self.table, self.cfg)
        self.beacon = build_beacon(self.table, self.cfg)
        self.cfp_slots = sum(d.length_slots for d in self.beacon.gts)
        self.cap_end_offset = self.cfg.cfp_start(self.cfp_slots)
        if self.records is not None:
            self.records.append(("beacon", self.sf_index,
                                 [(d.device, d.start_slot, d.length_slots) for d in self.beacon.gts]))
        for node in self.nodes:
            node.on_beacon(self.beacon, ev.at)
        deliver = self.scenario.attack.beacon_delivery
        for att in self.attackers:
            att.on_beacon(self.beacon if deliver else None, ev.at)
        self.sim.at(ev.at + self.cfg.interval_symbols, EventKind.BEACON_TX, COORDINATOR)

    def coordinator_receive(self, req: GtsRequest):
        return handle_request(req, self.table, self.cfg)

    # --- accounting -----------------------------------------------------------
    def record_request(self, node: int, outcome: str) -> None:
        m = self.metrics
        m.gts_requests_total += 1
        if outcome == "cap_access":
            m.failed_cap_access += 1
        elif outcome == "collision":
            m.failed_collision += 1
        elif outcome == "denied":
            m.failed_denied += 1
        if self.records is not None:
            self.records.append(("req", self.sf_index, node, outcome))

    def slot_outcome(self, node: int, st: SlotTx) -> None:
        m = self.metrics
        payload = self.scenario.traffic.payload_symbols
        m.gts_slots_scheduled += 1
        m.payload_symbols_offered += payload
        corrupted = st.tx.collided
        if corrupted:
            m.gts_slots_corrupted += 1
        else:
            m.payload_symbols_delivered += payload
            if st.frame is not None:
                try:
                    unprotect(st.frame, self.coord_acl)
                    self.security_verified += 1
                except SecurityError:
                    self.security_rejected += 1
        if self.records is not None:
            self.records.append(("slot", self.sf_index, st.slot, node, payload, int(corrupted)))

    def log_jam(self, attacker: int, plan) -> None:
        if self.records is not None:
            self.records.append(("jam", self.sf_index, attacker,
                                 plan.target.start_slot, plan.target.length_slots))

    def _finish_superframe(self) -> None:
        empty = len(self.sf_jammed_slots - self.sf_data_slots)
        self.metrics.gts_slots_jammed_empty += empty
        if self.records is not None and empty:
            self.records.append(("jam_empty", self.sf_index, empty))
        self.sf_data_slots = set()
        self.sf_jammed_slots = set()

    # --- driving --------------------------------------------------------------
    def run_until(self, end: int) -> RunMetrics:
        self.sim.run_until(end)
        return self.metrics.snapshot()

    def run(self, superframes: int) -> RunMetrics:
        end = superframes * self.cfg.interval_symbols - 1
        self.sim.run_until(end)
        self._finish_superframe()
        self.metrics.security_verified = self.security_verified
        self.metrics.security_rejected = self.security_rejected
        return self.metrics.snapshot()


def simulate(scenario: Scenario, seed: int, trace: bool = False) -> tuple[RunMetrics, Network]:
    net = Network(scenario, seed, trace=trace)
    return net.run(scenario.run.horizon), net
