from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from capdelta.aggregation import NON_SUMMATIVE, SUMMATIVE, Action, TeamSpec
from capdelta.arbitration import BREAK
from capdelta.compensation import ConjugatedPair
from capdelta.core import AgentKind, AgentProfile, ResourceState
from capdelta.crsolver import SelectionPolicy
from capdelta.formats import (
    FormatError,
    TeamConfig,
    load_profile,
    load_scenario,
    load_team,
    locate,
    parse_performances,
    parse_profile,
    parse_tasks,
    parse_team,
    serialize_profile,
    serialize_tasks,
    serialize_team,
)
from capdelta.report import DeltaReport, build_delta_report

from conftest import FIXTURES, cid, human, robot

CAP_IDS = ["1.05", "3.01", "3.02", "3.03", "3.04", "9.05"]
names = st.text("abcdefgh-", min_size=1, max_size=6)


@st.composite
def profiles(draw):
    caps = draw(st.dictionaries(st.sampled_from(CAP_IDS).map(cid), st.integers(0, 5)))
    res = ResourceState(
        actuation=draw(st.dictionaries(names, st.booleans(), max_size=3)),
        mental_stamina=draw(st.fractions(0, 1, max_denominator=100)),
        environmental=draw(st.dictionaries(names, st.booleans(), max_size=2)),
        societal=draw(st.dictionaries(names, st.booleans(), max_size=2)),
    )
    kind = draw(st.sampled_from(AgentKind))
    return AgentProfile(draw(names), kind, caps, res)


@given(profiles())
def test_profile_round_trip(profile):
    assert parse_profile(serialize_profile(profile)) == profile


@given(
    st.dictionaries(st.sampled_from(CAP_IDS).map(cid), st.sampled_from([SUMMATIVE, NON_SUMMATIVE])),
    st.sampled_from(SelectionPolicy),
    st.lists(st.tuples(st.sampled_from(CAP_IDS), st.sampled_from(CAP_IDS), st.sampled_from([1, 2, 0.5])), max_size=3),
)
def test_team_round_trip(kinds, policy, raw_pairs):
    pairs = tuple(ConjugatedPair(cid(d), cid(c), Fraction(r)) for d, c, r in raw_pairs if d != c)
    team = TeamConfig(TeamSpec(kinds=kinds), pairs, policy)
    assert parse_team(serialize_team(team)) == team


def test_tasks_round_trip():
    steps = [
        Action("a", {cid("3.03"): 3}, frozenset({"right-arm"})),
        BREAK,
        Action("b", {cid("3.02"): 0, cid("9.05"): 5}),
    ]
    assert parse_tasks(serialize_tasks(steps)) == steps


def test_empty_tasks():
    assert parse_tasks("format_version = 1\n") == []


def test_report_round_trip():
    h, a = load_profile(FIXTURES / "teamed_haul" / "human.toml"), load_profile(FIXTURES / "teamed_haul" / "autonomous.toml")
    team = load_team(FIXTURES / "teamed_haul" / "team.toml")
    actions = [Action("x", {cid("3.03"): 4, cid("3.02"): 2}), Action("y", {cid("3.04"): 5})]
    report = build_delta_report(h, a, actions, team)
    assert DeltaReport.loads(report.dumps()) == report


def test_report_jobs_keep_order():
    h, a = human({"3.03": 3}), robot({"3.03": 5})
    actions = [Action(f"x{i}", {cid("3.03"): i % 6}) for i in range(20)]
    serial = build_delta_report(h, a, actions, TeamConfig())
    assert build_delta_report(h, a, actions, TeamConfig(), jobs=4) == serial
    assert [e.action_id for e in serial.entries] == [f"x{i}" for i in range(20)]


def test_fixtures_load():
    for name in ("human_only_haul", "teamed_haul", "teamed_screw"):
        scenario = load_scenario(FIXTURES / name / "scenario.toml")
        assert scenario.human.kind is AgentKind.HUMAN
        assert scenario.autonomous.kind is AgentKind.AUTONOMOUS
        assert scenario.steps


def test_float_rates_read_exactly():
    team = parse_team('format_version = 1\n[[pairs]]\ndegraded = "3.02"\ncompensator = "3.03"\nrate = 0.1\n')
    assert team.pairs[0].rate == Fraction(1, 10)


PROFILE = """format_version = 1
agent_id = "w"
kind = "human"

[capacities]
"3.03" = 3
"""


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        (PROFILE + "colour = 1\n", 7, "colour"),
        (PROFILE.replace('kind = "human"', 'kind = "cyborg"'), 3, "kind"),
        (PROFILE.replace("format_version = 1", "format_version = 2"), 1, "format_version"),
        (PROFILE.replace('"3.03" = 3', '"3.x" = 3'), 6, "3.x"),
        (PROFILE.replace('"3.03" = 3', '"3.03" = "high"'), 6, "3.03"),
        (PROFILE + "[resources]\nmental_stamina = \"lots\"\n", 8, "mental_stamina"),
    ],
)
def test_profile_errors_located(text, line, fragment):
    with pytest.raises(FormatError) as err:
        parse_profile(text, "w.toml")
    assert err.value.line == line
    assert str(err.value).startswith(f"w.toml:{line}:")
    assert fragment in str(err.value)


def test_syntax_error_has_line():
    with pytest.raises(FormatError) as err:
        parse_profile('format_version = 1\nagent_id = "w\n', "bad.toml")
    assert err.value.line == 2


def test_out_of_range_stamina_is_left_to_validation():
    from capdelta.core import validate_profile

    profile = parse_profile(PROFILE + "[resources]\nmental_stamina = 1.5\n")
    assert [v.capability for v in validate_profile(profile)] == [None]


def test_fractional_stamina_kept_exact():
    profile = human({}, resources=ResourceState(mental_stamina=Fraction(1, 3)))
    assert 'mental_stamina = "1/3"' in serialize_profile(profile)
    assert parse_profile(serialize_profile(profile)).resources.mental_stamina == Fraction(1, 3)


def test_missing_key():
    with pytest.raises(FormatError, match="agent_id"):
        parse_profile('format_version = 1\nkind = "human"\n')


def test_missing_file():
    with pytest.raises(FormatError, match="nowhere"):
        load_profile("/nowhere/profile.toml")


def test_unknown_task_key():
    text = 'format_version = 1\n[[actions]]\nid = "a"\nrequirements = {}\nurgency = 2\n'
    with pytest.raises(FormatError, match="urgency") as err:
        parse_tasks(text, "t.toml")
    assert err.value.line == 5


def test_performances():
    h, a = parse_performances('format_version = 1\n[human]\n"3.03" = 2\n[autonomous]\n"3.03" = 5\n')
    assert h == {cid("3.03"): 2} and a == {cid("3.03"): 5}


def test_locate():
    text = '[a]\nx = 1\n[b]\nx = 2\n"3.03" = 4\n'
    assert locate(text, "b", "x") == 4
    assert locate(text, "a", "x") == 2
    assert locate(text, None, "3.03") == 5
    assert locate(text, "b") == 3
