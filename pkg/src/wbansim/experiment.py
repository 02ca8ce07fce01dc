"""Replicated runs and parameter sweeps."""
from __future__ import annotations

from typing import Any, Callable, Iterable, Sequence

from .kernel import derive_seed
from .metrics import Aggregate, RunMetrics, aggregate
from .network import Network, simulate
from .scenario import ConfigError, Scenario, axis_is_scalar, validate, with_override

TraceSink = Callable[[int, int, Network], None]


def replication_seed(master: int, r: int) -> int:
    return derive_seed(master, "replication", r)


def run_replications(s: Scenario, trace: TraceSink | None = None) -> list[RunMetrics]:
    validate(s)
    runs = []
    for r in range(s.run.replications):
        seed = replication_seed(s.run.seed, r)
        m, net = simulate(s, seed, trace=trace is not None)
        if trace is not None:
            trace(r, seed, net)
        runs.append(m)
    return runs


def run_scenario(s: Scenario, trace: TraceSink | None = None) -> Aggregate:
    return aggregate(run_replications(s, trace))


def sweep(base: Scenario, axis: str, values: Iterable[Any],
          trace: Callable[[Any], TraceSink] | None = None) -> list[tuple[Any, Aggregate]]:
    """One aggregated row per axis value; each row is an independent run_scenario."""
    if not axis_is_scalar(axis):
        raise ConfigError(axis, "unknown or non-scalar sweep axis")
    table = []
    for v in values:
        s = validate(with_override(base, axis, v))
        value = s
        for part in axis.split("."):
            value = getattr(value, part)
        table.append((value, run_scenario(s, trace(value) if trace else None)))
    return table


def utilization(m: RunMetrics) -> float:
    if m.payload_symbols_offered == 0:
        return 1.0
    return m.payload_symbols_delivered / m.payload_symbols_offered


def relative_decrease(attacked: RunMetrics, baseline: RunMetrics) -> float:
    """Utilization lost relative to an unattacked run on the same seed."""
    ub = utilization(baseline)
    if ub == 0:
        return 0.0
    return max(0.0, 1.0 - utilization(attacked) / ub)


def paired_decrease(s: Scenario) -> list[float]:
    """Per-replication decrease against the same scenario with every attacker removed."""
    quiet = s
    for kind in ("smart", "random", "weak"):
        quiet = with_override(quiet, f"attack.{kind}.count", 0)
    return [relative_decrease(a, b)
            for a, b in zip(run_replications(s), run_replications(quiet))]


def column(table: Sequence[tuple[Any, Aggregate]], field: str) -> list[float]:
    return [agg.mean(field) for _, agg in table]
