import csv
import io
import json

import jsonschema
import pytest
from hypothesis import given, strategies as st

from wbansim.experiment import (
    paired_decrease, relative_decrease, replication_seed, run_scenario, sweep, utilization,
)
from wbansim.figures import scenario
from wbansim.metrics import FIELDS, RunMetrics, aggregate, emit, metrics_from_records
from wbansim.network import simulate
from wbansim.scenario import ConfigError, with_overrides

from conftest import ROOT

SMALL = with_overrides(scenario("reference"), [("run.horizon", 80), ("run.replications", 3)])
SCHEMA = json.loads((ROOT / "schemas" / "run_metrics.schema.json").read_text())


def small(**kw):
    return with_overrides(SMALL, [(k.replace("__", "."), v) for k, v in kw.items()])


def test_derived_ratios():
    m = RunMetrics(gts_requests_total=4, failed_cap_access=1, failed_denied=1,
                   payload_symbols_offered=800, payload_symbols_delivered=200)
    assert m.gts_requests_failed == 2
    assert m.failed_request_probability == 0.5
    assert m.bandwidth_utilization_decrease == 0.75
    assert RunMetrics().failed_request_probability == 0.0
    assert RunMetrics().bandwidth_utilization_decrease == 0.0


def test_aggregate_mean_and_sample_std():
    agg = aggregate([RunMetrics(gts_slots_corrupted=v) for v in (1, 2, 3, 4)])
    assert agg.mean("gts_slots_corrupted") == 2.5
    assert agg.std("gts_slots_corrupted") == pytest.approx(1.2909944487)
    assert aggregate([RunMetrics()]).std("gts_slots_corrupted") == 0.0
    with pytest.raises(ValueError):
        aggregate([])


def test_unattacked_single_node_baseline():
    m, _ = simulate(small(traffic__nodes=1, run__horizon=300), 3)
    assert m.gts_requests_total > 0 and m.failed_request_probability == 0.0
    assert m.gts_slots_corrupted == 0 and m.bandwidth_utilization_decrease == 0.0


def test_cfp_jammer_on_every_slot_saturates():
    m, _ = simulate(small(traffic__nodes=1, run__horizon=300, attack__weak__count=1,
                          attack__weak__activation=1.0), 3)
    assert m.gts_slots_scheduled > 0
    assert m.gts_slots_corrupted == m.gts_slots_scheduled
    assert m.bandwidth_utilization_decrease == 1.0


@given(st.integers(0, 2**32), st.integers(0, 3), st.integers(0, 2))
def test_live_metrics_equal_trace_replay(seed, smart, weak):
    s = small(run__horizon=40, attack__smart__count=smart, attack__weak__count=weak)
    m, net = simulate(s, seed, trace=True)
    replay = metrics_from_records(net.records)
    live = m.as_dict()
    for name, value in replay.as_dict().items():
        if not name.startswith("security_"):
            assert live[name] == value, name


@given(st.integers(0, 2**32), st.integers(0, 4))
def test_metric_invariants(seed, k):
    m, _ = simulate(small(run__horizon=40, attack__smart__count=k), seed)
    assert m.gts_requests_failed <= m.gts_requests_total
    assert m.gts_slots_corrupted <= m.gts_slots_scheduled
    assert m.payload_symbols_delivered <= m.payload_symbols_offered
    assert 0.0 <= m.bandwidth_utilization_decrease <= 1.0


def test_same_seed_runs_are_identical():
    s = small(attack__smart__count=2)
    a, na = simulate(s, 11, trace=True)
    b, nb = simulate(s, 11, trace=True)
    assert a == b and na.sim.trace == nb.sim.trace and na.records == nb.records
    c, _ = simulate(s, 12)
    assert c != a


def test_adding_an_attacker_keeps_node_streams():
    # attacker streams are separate, so with zero activation the legit run is unchanged
    base, _ = simulate(small(), 4)
    quiet, _ = simulate(small(attack__weak__count=3, attack__weak__activation=0.0), 4)
    assert base == quiet


def test_run_scenario_uses_derived_replication_seeds():
    agg = run_scenario(small())
    assert len(agg.runs) == 3
    assert agg.runs[1] == simulate(small(), replication_seed(SMALL.run.seed, 1))[0]


def test_sweep_single_value_equals_run_scenario():
    s = small(attack__smart__count=1)
    [(value, agg)] = sweep(s, "attack.smart.count", [1])
    assert value == 1 and agg.runs == run_scenario(s).runs


def test_sweep_rows_do_not_depend_on_order():
    a = dict(sweep(SMALL, "attack.weak.count", [0, 2]))
    b = dict(sweep(SMALL, "attack.weak.count", [2, 0]))
    assert a[2].runs == b[2].runs and a[0].runs == b[0].runs


def test_sweep_rejects_unknown_axis():
    with pytest.raises(ConfigError):
        sweep(SMALL, "attack.laser.count", [1])
    with pytest.raises(ConfigError):
        sweep(SMALL, "traffic.gts_lengths", ["1,2"])


def test_decrease_zero_without_attackers_and_monotone_in_activation():
    assert paired_decrease(small()) == [0.0, 0.0, 0.0]
    means = []
    for p in (0.0, 0.4, 1.0):
        vals = paired_decrease(small(attack__random__count=1, attack__random__activation=p))
        means.append(sum(vals) / len(vals))
    assert means[0] == 0.0 and means == sorted(means)


def test_relative_decrease_matches_metric_when_baseline_is_clean():
    attacked, _ = simulate(small(attack__weak__count=1), 8)
    clean, _ = simulate(small(), 8)
    assert utilization(clean) == 1.0
    assert relative_decrease(attacked, clean) == pytest.approx(attacked.bandwidth_utilization_decrease)


@pytest.fixture(scope="module")
def table():
    return sweep(small(run__horizon=30), "attack.smart.count", [0, 2])


def test_csv_header_and_round_trip(table):
    text = emit(table, "csv", axis="attack.smart.count").decode()
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 2
    header = text.splitlines()[0].split(",")
    assert header[0] == "attack.smart.count"
    for name in FIELDS:
        assert f"{name}_mean" in header and f"{name}_std" in header
    for row, (value, agg) in zip(rows, table):
        assert int(row["attack.smart.count"]) == value
        for name in FIELDS:
            assert float(row[f"{name}_mean"]) == pytest.approx(agg.mean(name), abs=5e-7)
            assert len(row[f"{name}_mean"].split(".")[1]) == 6


def test_one_row_table_has_header_plus_one_line(table):
    assert len(emit(table[:1], "csv").decode().splitlines()) == 2


def test_json_matches_schema(table):
    data = json.loads(emit(table, "json", axis="attack.smart.count"))
    jsonschema.validate(data, SCHEMA)
    assert [r["attack.smart.count"] for r in data] == [0, 2]


def test_schema_rejects_missing_field(table):
    data = json.loads(emit(table, "json"))
    del data[0]["gts_slots_corrupted_mean"]
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(data, SCHEMA)


def test_emit_rejects_empty_and_unknown_format(table):
    with pytest.raises(ValueError):
        emit([], "csv")
    with pytest.raises(ValueError):
        emit(table, "xml")
