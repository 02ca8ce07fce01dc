import pytest
from hypothesis import given, strategies as st

from wbansim.adversary import AttackerKind
from wbansim.scenario import (
    ConfigError, Scenario, axis_is_scalar, dump_scenario, load_scenario, parse_scenario,
    with_override,
)

from conftest import ROOT


def test_defaults_are_valid():
    s = parse_scenario("")
    assert s == Scenario()
    assert s.traffic.nodes == 10 and s.gts.capacity == 7


def test_parse_keys_comments_and_tuples():
    s = parse_scenario("""
        # ten nodes, two smart attackers
        traffic.gts_lengths = 1, 2 ,4   # cycled over node ids
        attack.smart.count = 2
        attack.beacon_delivery = off
        security.keys.3 = 000102030405060708090a0b0c0d0e0f
        security.node_suites.3 = AesCcm64
    """)
    assert s.traffic.gts_lengths == (1, 2, 4)
    assert s.attack.smart.count == 2
    assert s.attack.beacon_delivery is False
    assert s.security.keys == {3: "000102030405060708090a0b0c0d0e0f"}
    assert s.security.suite_for(3).name == "AES_CCM_64"
    roster = s.attack.roster()
    assert [p.kind for p in roster] == [AttackerKind.SMART] * 2


@pytest.mark.parametrize("text,path", [
    ("traffic.nodes = 0", "traffic.nodes"),
    ("traffic.nodes = ten", "traffic.nodes"),
    ("bogus = 1", "bogus"),
    ("traffic.bogus = 1", "traffic.bogus"),
    ("traffic = 1", "traffic"),
    ("traffic.nodes.x = 1", "traffic.nodes.x"),
    ("run.horizon = 0", "run.horizon"),
    ("attack.weak.activation = 2", "attack.weak.activation"),
    ("attack.smart.count = -1", "attack.smart.count"),
    ("security.suite = Rot13", "security.suite"),
    ("security.keys.1 = abcd", "security.keys.1"),
    ("superframe.superframe_order = 5", "superframe"),
    ("traffic.payload_symbols = 481", "traffic.payload_symbols"),
    ("traffic.direction = sideways", "traffic.direction"),
    ("just words", "<text>:1"),
])
def test_errors_name_the_field(text, path):
    with pytest.raises(ConfigError) as e:
        parse_scenario(text)
    assert e.value.path == path


def test_section_overrides_applied_together():
    # raising SO above the current BO alone would be invalid; both change at once
    s = parse_scenario("superframe.superframe_order = 4\nsuperframe.beacon_order = 4")
    assert (s.superframe.beacon_order, s.superframe.superframe_order) == (4, 4)


def test_shipped_files_load_and_share_the_reference_workload():
    ref = load_scenario(ROOT / "scenarios" / "reference.scn")
    assert ref.traffic.nodes == 10
    assert ref.superframe.beacon_order == ref.superframe.superframe_order == 3
    assert ref.run.horizon == 2000 and ref.run.replications == 20
    for name in ("fig5", "fig6", "fig7"):
        s = load_scenario(ROOT / "scenarios" / f"{name}.scn")
        assert s.traffic == ref.traffic and s.superframe == ref.superframe and s.run == ref.run


def test_include_cycle_and_missing_file(tmp_path):
    (tmp_path / "a.scn").write_text("include = b.scn\n")
    (tmp_path / "b.scn").write_text("include = a.scn\n")
    with pytest.raises(ConfigError, match="cycle"):
        load_scenario(tmp_path / "a.scn")
    with pytest.raises(ConfigError, match="cannot read"):
        load_scenario(tmp_path / "missing.scn")
    with pytest.raises(ConfigError, match="include"):
        parse_scenario("include = a.scn")


def test_later_lines_override_included_ones(tmp_path):
    (tmp_path / "base.scn").write_text("traffic.nodes = 4\nrun.seed = 3\n")
    (tmp_path / "top.scn").write_text("include = base.scn\ntraffic.nodes = 6\n")
    s = load_scenario(tmp_path / "top.scn")
    assert (s.traffic.nodes, s.run.seed) == (6, 3)


def test_axis_paths():
    assert axis_is_scalar("attack.smart.count")
    assert axis_is_scalar("superframe.cfp_slot_capacity")
    assert not axis_is_scalar("attack.smart")
    assert not axis_is_scalar("traffic.gts_lengths")
    assert not axis_is_scalar("nope.nothing")


@given(st.integers(1, 30), st.integers(0, 12), st.floats(0, 1), st.booleans(),
       st.lists(st.integers(1, 4), min_size=1, max_size=4))
def test_dump_parse_round_trip(nodes, k, act, deliver, lengths):
    s = with_override(Scenario(), "traffic.nodes", nodes)
    s = with_override(s, "attack.random.count", k)
    s = with_override(s, "attack.random.activation", repr(act))
    s = with_override(s, "attack.beacon_delivery", str(deliver))
    s = with_override(s, "traffic.gts_lengths", ",".join(map(str, lengths)))
    s = with_override(s, "security.keys.2", "ff" * 16)
    assert parse_scenario(dump_scenario(s)) == s
