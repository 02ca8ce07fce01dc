"""The three attack-impact experiments, driven by the shipped scenario files."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .experiment import relative_decrease, run_replications, sweep
from .metrics import Aggregate
from .scenario import Scenario, load_scenario, with_override, with_overrides

SCENARIOS = Path(__file__).resolve().parents[2] / "scenarios"

FIG5_COUNTS = (0, 1, 2, 3, 4, 5)
FIG6_COUNTS = (2, 5, 10, 20, 30)
# attacker class -> count used for the utilization comparison
FIG7_ROSTER = (("smart", 2), ("random", 2), ("weak", 1))


def scenario(name: str, directory: Path | None = None) -> Scenario:
    return load_scenario((directory or SCENARIOS) / f"{name}.scn")


def fig5(s: Scenario | None = None, counts=FIG5_COUNTS) -> list[tuple[int, Aggregate]]:
    return sweep(s or scenario("fig5"), "attack.smart.count", counts)


def fig6(s: Scenario | None = None, counts=FIG6_COUNTS) -> list[tuple[int, Aggregate]]:
    return sweep(s or scenario("fig6"), "attack.smart.count", counts)


@dataclass
class Fig7:
    # attacker class -> per-replication decrease versus the unattacked run
    decrease: dict[str, list[float]]

    def mean(self, kind: str) -> float:
        vals = self.decrease[kind]
        return sum(vals) / len(vals)


def fig7(s: Scenario | None = None, roster=FIG7_ROSTER) -> Fig7:
    s = s or scenario("fig7")
    quiet = with_overrides(s, [(f"attack.{k}.count", 0) for k in ("smart", "random", "weak")])
    baseline = run_replications(quiet)
    out = {}
    for kind, count in roster:
        attacked = run_replications(with_override(quiet, f"attack.{kind}.count", count))
        out[kind] = [relative_decrease(a, b) for a, b in zip(attacked, baseline)]
    return Fig7(out)
