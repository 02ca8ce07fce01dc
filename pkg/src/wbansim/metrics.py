"""Run metrics, aggregation over replications, and table output."""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import statistics
from dataclasses import dataclass
from typing import Any, Iterable, Sequence


@dataclass
class RunMetrics:
    gts_requests_total: int = 0
    failed_cap_access: int = 0
    failed_collision: int = 0
    failed_denied: int = 0
    gts_slots_scheduled: int = 0
    gts_slots_corrupted: int = 0
    gts_slots_jammed_empty: int = 0
    payload_symbols_offered: int = 0
    payload_symbols_delivered: int = 0
    security_verified: int = 0
    security_rejected: int = 0

    @property
    def gts_requests_failed(self) -> int:
        return self.failed_cap_access + self.failed_collision + self.failed_denied

    @property
    def failed_request_probability(self) -> float:
        if self.gts_requests_total == 0:
            return 0.0
        return self.gts_requests_failed / self.gts_requests_total

    @property
    def bandwidth_utilization_decrease(self) -> float:
        offered = self.payload_symbols_offered
        if offered == 0:
            return 0.0
        return (offered - self.payload_symbols_delivered) / offered

    def snapshot(self) -> RunMetrics:
        return dataclasses.replace(self)

    def as_dict(self) -> dict[str, float]:
        d: dict[str, float] = dataclasses.asdict(self)
        d["gts_requests_failed"] = self.gts_requests_failed
        d["failed_request_probability"] = self.failed_request_probability
        d["bandwidth_utilization_decrease"] = self.bandwidth_utilization_decrease
        return d


FIELDS = tuple(RunMetrics().as_dict())


def metrics_from_records(records: Iterable[tuple]) -> RunMetrics:
    """Recompute metrics from the outcome records of a traced run."""
    m = RunMetrics()
    for rec in records:
        tag = rec[0]
        if tag == "req":
            outcome = rec[3]
            m.gts_requests_total += 1
            if outcome != "ok":
                name = f"failed_{outcome}"
                setattr(m, name, getattr(m, name) + 1)
        elif tag == "slot":
            _, _, _, _, payload, corrupted = rec
            m.gts_slots_scheduled += 1
            m.payload_symbols_offered += payload
            if corrupted:
                m.gts_slots_corrupted += 1
            else:
                m.payload_symbols_delivered += payload
        elif tag == "jam_empty":
            m.gts_slots_jammed_empty += rec[2]
    return m


@dataclass
class Aggregate:
    """Mean and sample standard deviation of every metric over replications."""

    runs: list[RunMetrics]

    def values(self, name: str) -> list[float]:
        return [r.as_dict()[name] for r in self.runs]

    def mean(self, name: str) -> float:
        return statistics.fmean(self.values(name))

    def std(self, name: str) -> float:
        vals = self.values(name)
        return statistics.stdev(vals) if len(vals) > 1 else 0.0

    def row(self) -> dict[str, float]:
        out: dict[str, float] = {"replications": len(self.runs)}
        for name in FIELDS:
            out[f"{name}_mean"] = self.mean(name)
            out[f"{name}_std"] = self.std(name)
        return out


def aggregate(runs: Sequence[RunMetrics]) -> Aggregate:
    if not runs:
        raise ValueError("nothing to aggregate")
    return Aggregate(list(runs))


def _fmt(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def table_rows(table: Sequence[tuple[Any, Aggregate]], axis: str) -> list[dict[str, Any]]:
    rows = []
    for value, agg in table:
        row: dict[str, Any] = {axis: value}
        row.update(agg.row())
        rows.append(row)
    return rows


def emit(table: Sequence[tuple[Any, Aggregate]], fmt: str = "csv", axis: str = "axis") -> bytes:
    """Serialize a sweep table as CSV or JSON (floats with six decimals)."""
    if not table:
        raise ValueError("empty table")
    rows = table_rows(table, axis)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = list(rows[0])
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(row[k]) for k in header])
        return buf.getvalue().encode()
    if fmt == "json":
        out = []
        for row in rows:
            out.append({k: (round(v, 6) if isinstance(v, float) else v) for k, v in row.items()})
        return (json.dumps(out, indent=1) + "\n").encode()
    raise ValueError(f"unknown format {fmt!r}")
