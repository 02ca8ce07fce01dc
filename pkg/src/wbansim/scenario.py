"""Scenario configuration.

Scenario files are flat ``dotted.path = value`` text; ``#`` starts a comment.
Tuples are comma separated. Mapping fields take one more path component,
e.g. ``security.keys.3 = 000102...0f``. In files, ``include = other.scn``
(resolved next to the including file) applies another file's lines first.
"""
from __future__ import annotations

import dataclasses
import typing
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .adversary import AttackerKind, AttackerProfile
from .csma import CsmaParams
from .gts import Direction
from .security.suites import SecuritySuite
from .superframe import SuperframeConfig


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class GtsConfig:
    capacity: int = 7


@dataclass(frozen=True)
class TrafficConfig:
    nodes: int = 10
    # request length per node, cycled over node ids
    gts_lengths: tuple[int, ...] = (1, 2, 3)
    direction: str = "uplink"
    payload_symbols: int = 400
    data_probability: float = 1.0
    # session and idle lengths are uniform on [1, 2*mean - 1]
    session_superframes: int = 10
    idle_superframes: int = 30
    retry_superframes: int = 1
    request_symbols: int = 40


@dataclass(frozen=True)
class AttackerGroup:
    count: int = 0
    activation: float = 0.5


@dataclass(frozen=True)
class AttackConfig:
    smart: AttackerGroup = AttackerGroup()
    random: AttackerGroup = AttackerGroup()
    weak: AttackerGroup = AttackerGroup()
    # longest PPDU: 127-octet PSDU plus 6-octet synchronization header
    dummy_frame_symbols: int = 266
    beacon_delivery: bool = True

    def roster(self) -> list[AttackerProfile]:
        out = []
        for kind in AttackerKind:
            group = getattr(self, kind.value)
            out += [AttackerProfile(kind, group.activation)] * group.count
        return out


@dataclass(frozen=True)
class SecurityConfig:
    suite: str = "Null"
    payload_octets: int = 16
    node_suites: dict[int, str] = field(default_factory=dict)
    keys: dict[int, str] = field(default_factory=dict)

    def suite_for(self, node: int) -> SecuritySuite:
        return SecuritySuite.parse(self.node_suites.get(node, self.suite))


@dataclass(frozen=True)
class RunConfig:
    horizon: int = 100
    seed: int = 1
    replications: int = 1


@dataclass(frozen=True)
class Scenario:
    superframe: SuperframeConfig = SuperframeConfig()
    csma: CsmaParams = CsmaParams()
    gts: GtsConfig = GtsConfig()
    traffic: TrafficConfig = TrafficConfig()
    attack: AttackConfig = AttackConfig()
    security: SecurityConfig = SecurityConfig()
    run: RunConfig = RunConfig()


def validate(s: Scenario) -> Scenario:
    t = s.traffic
    checks = [
        ("traffic.nodes", t.nodes >= 1, "need at least one node"),
        ("run.horizon", s.run.horizon >= 1, "horizon must be >= 1 superframe"),
        ("run.replications", s.run.replications >= 1, "need at least one replication"),
        ("traffic.gts_lengths", bool(t.gts_lengths) and min(t.gts_lengths) >= 1,
         "lengths must be >= 1"),
        ("traffic.payload_symbols",
         0 < t.payload_symbols <= s.superframe.slot_symbols, "must fit in one GTS slot"),
        ("traffic.data_probability", 0.0 <= t.data_probability <= 1.0, "must lie in [0, 1]"),
        ("traffic.session_superframes", t.session_superframes >= 1, "must be >= 1"),
        ("traffic.idle_superframes", t.idle_superframes >= 1, "must be >= 1"),
        ("traffic.retry_superframes", t.retry_superframes >= 1, "must be >= 1"),
        ("traffic.request_symbols", t.request_symbols >= 1, "must be >= 1"),
        ("attack.dummy_frame_symbols", s.attack.dummy_frame_symbols >= 1, "must be >= 1"),
        ("gts.capacity", s.gts.capacity >= 0, "must be >= 0"),
        ("security.payload_octets", 0 <= s.security.payload_octets <= 102, "must lie in 0..102"),
    ]
    for path, ok, msg in checks:
        if not ok:
            raise ConfigError(path, msg)
    if t.direction not in {d.value for d in Direction}:
        raise ConfigError("traffic.direction", f"unknown direction {t.direction!r}")
    for kind in AttackerKind:
        g = getattr(s.attack, kind.value)
        if g.count < 0:
            raise ConfigError(f"attack.{kind.value}.count", "must be >= 0")
        if not 0.0 <= g.activation <= 1.0:
            raise ConfigError(f"attack.{kind.value}.activation", "must lie in [0, 1]")
    try:
        SecuritySuite.parse(s.security.suite)
        for n, name in s.security.node_suites.items():
            SecuritySuite.parse(name)
    except ValueError as e:
        raise ConfigError("security.suite", str(e)) from None
    for n, k in s.security.keys.items():
        try:
            if len(bytes.fromhex(k)) != 16:
                raise ValueError
        except ValueError:
            raise ConfigError(f"security.keys.{n}", "need 32 hex digits") from None
    return s


def _coerce(path: str, tp: Any, raw: str) -> Any:
    raw = raw.strip()
    try:
        if tp is bool:
            low = raw.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if tp is int:
            return int(raw, 0)
        if tp is float:
            return float(raw)
        if tp is str:
            return raw
        if typing.get_origin(tp) is tuple:
            (inner, *_) = typing.get_args(tp)
            return tuple(_coerce(path, inner, p) for p in raw.split(",") if p.strip())
    except ValueError:
        raise ConfigError(path, f"cannot parse {raw!r} as {getattr(tp, '__name__', tp)}") from None
    raise ConfigError(path, f"unsupported field type {tp}")


def _apply(obj: Any, items: list[tuple[list[str], str, str]], section: str) -> Any:
    hints = typing.get_type_hints(type(obj))
    changes: dict[str, Any] = {}
    nested: dict[str, list] = {}
    for parts, raw, full in items:
        name, rest = parts[0], parts[1:]
        if name not in hints:
            raise ConfigError(full, f"unknown key {name!r}")
        tp = hints[name]
        current = getattr(obj, name)
        if dataclasses.is_dataclass(current):
            if not rest:
                raise ConfigError(full, "names a section, not a value")
            nested.setdefault(name, []).append((rest, raw, full))
        elif typing.get_origin(tp) is dict:
            kt, vt = typing.get_args(tp)
            if len(rest) != 1:
                raise ConfigError(full, "mapping keys take exactly one more path component")
            value = dict(changes.get(name, current))
            value[_coerce(full, kt, rest[0])] = _coerce(full, vt, raw)
            changes[name] = value
        else:
            if rest:
                raise ConfigError(full, f"{name!r} is a value, not a section")
            changes[name] = _coerce(full, tp, raw)
    for name, sub in nested.items():
        changes[name] = _apply(getattr(obj, name), sub, f"{section}{name}.")
    try:
        return dataclasses.replace(obj, **changes)
    except ValueError as e:
        raise ConfigError(section.rstrip(".") or "<root>", str(e)) from None


def with_overrides(s: Scenario, overrides: list[tuple[str, Any]]) -> Scenario:
    """Copy of ``s`` with every ``(dotted.path, value)`` applied at once."""
    items = [(path.split("."), str(raw), path) for path, raw in overrides]
    return _apply(s, items, "")


def with_override(s: Scenario, path: str, raw: Any) -> Scenario:
    return with_overrides(s, [(path, raw)])


def axis_is_scalar(path: str) -> bool:
    obj: Any = Scenario()
    for part in path.split("."):
        if not dataclasses.is_dataclass(obj) or part not in typing.get_type_hints(type(obj)):
            return False
        obj = getattr(obj, part)
    return isinstance(obj, (int, float, str, bool))


def _lines(text: str, source: str, seen: tuple[Path, ...] = ()) -> list[tuple[str, str]]:
    overrides = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}", "expected 'key = value'")
        key, value = (p.strip() for p in line.split("=", 1))
        if key == "include":
            if not seen:
                raise ConfigError(f"{source}:{lineno}", "include needs a file location")
            target = (seen[-1].parent / value).resolve()
            if target in seen:
                raise ConfigError(f"{source}:{lineno}", f"include cycle through {value}")
            overrides += _lines(_read(target), str(target), (*seen, target))
        else:
            overrides.append((key, value))
    return overrides


def _read(path: Path) -> str:
    try:
        return path.read_text()
    except OSError as e:
        raise ConfigError(str(path), f"cannot read scenario file ({e.strerror})") from None


def parse_scenario(text: str, base: Scenario | None = None, source: str = "<text>") -> Scenario:
    return validate(with_overrides(base or Scenario(), _lines(text, source)))


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path).resolve()
    return validate(with_overrides(Scenario(), _lines(_read(path), str(path), (path,))))


def dump_scenario(s: Scenario) -> str:
    """Serialize to the flat key/value format (round-trips through parse_scenario)."""
    lines = []

    def walk(obj, prefix):
        for f in dataclasses.fields(obj):
            v = getattr(obj, f.name)
            key = f"{prefix}{f.name}"
            if dataclasses.is_dataclass(v):
                walk(v, key + ".")
            elif isinstance(v, dict):
                lines.extend(f"{key}.{k} = {x}" for k, x in v.items())
            elif isinstance(v, tuple):
                lines.append(f"{key} = {','.join(map(str, v))}")
            else:
                lines.append(f"{key} = {str(v).lower() if isinstance(v, bool) else v}")

    walk(s, "")
    return "\n".join(lines) + "\n"
