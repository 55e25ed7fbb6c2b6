from itertools import product

import pytest

from capdelta.aggregation import (
    NON_SUMMATIVE,
    SUMMATIVE,
    Action,
    AggregationKind,
    DeltaVector,
    Delta,
    Fulfillment,
    TeamSpec,
    capability_delta,
    classify_fulfillment,
    delta_vector,
    team_capability,
)
from capdelta.core import OutOfRangeError, QuantScale

from conftest import cid

GRID = list(product(range(6), repeat=2))


def test_summative_adds():
    assert team_capability(1, 3, SUMMATIVE) == 4


def test_summative_clamps():
    assert team_capability(4, 4, SUMMATIVE) == min(4 + 4, 5)


def test_non_summative_is_max():
    assert team_capability(2, 3, NON_SUMMATIVE) == 3


@pytest.mark.parametrize("a, h", [(-1, 0), (0, 6), (7, 7)])
def test_team_capability_range(a, h):
    with pytest.raises(OutOfRangeError):
        team_capability(a, h, SUMMATIVE)


def test_custom_scale():
    assert team_capability(6, 3, SUMMATIVE, QuantScale(7)) == 7


@pytest.mark.parametrize("r, c, expected", [(4, 4, 0), (0, 3, -3), (5, 0, 5)])
def test_capability_delta(r, c, expected):
    assert capability_delta(r, c) == expected


def test_capability_delta_range():
    with pytest.raises(OutOfRangeError):
        capability_delta(6, 0)


def test_sum_dominates_max():
    for a, h in GRID:
        assert team_capability(h, a, SUMMATIVE) >= team_capability(h, a, NON_SUMMATIVE)


@pytest.mark.parametrize("kind", list(AggregationKind))
def test_kinds_commutative_and_monotone(kind):
    for a, h in GRID:
        assert team_capability(h, a, kind) == team_capability(a, h, kind)
        if a < 5:
            assert team_capability(h, a + 1, kind) >= team_capability(h, a, kind)
        if h < 5:
            assert team_capability(h + 1, a, kind) >= team_capability(h, a, kind)


def test_delta_monotonicity():
    for r, c in GRID:
        if c < 5:
            assert capability_delta(r, c + 1) < capability_delta(r, c)
        if r < 5:
            assert capability_delta(r + 1, c) > capability_delta(r, c)


def test_delta_vector_forward_reach():
    action = Action("haul", {cid("3.03"): 3})
    dv = delta_vector(action, {cid("3.03"): 3}, {}, TeamSpec())
    assert dv.as_dict() == {cid("3.03"): 0}


def test_zero_requirement_never_under_fulfilled():
    action = Action("haul", {cid("3.02"): 0})
    for h, a in GRID:
        dv = delta_vector(action, {cid("3.02"): h}, {cid("3.02"): a}, TeamSpec())
        assert dv.values[0] <= 0


def test_empty_action():
    assert len(delta_vector(Action("none", {}), {}, {}, TeamSpec())) == 0


def test_delta_vector_keys_match_requirements():
    reqs = {cid("3.02"): 2, cid("5.01"): 4, cid("3.04"): 1}
    dv = delta_vector(Action("x", reqs), {cid("5.01"): 2}, {cid("5.01"): 2, cid("3.02"): 1}, TeamSpec())
    assert set(dv.as_dict()) == set(reqs)
    # lifting is summative by default, the rest non-summative; missing keys act as 0
    assert dv.as_dict() == {cid("3.02"): 1, cid("5.01"): 0, cid("3.04"): 1}


def test_team_spec_override():
    spec = TeamSpec(kinds={cid("5.01"): NON_SUMMATIVE, cid("3.03"): SUMMATIVE})
    assert spec.kind_for("5.01") is NON_SUMMATIVE
    assert spec.kind_for("3.03") is SUMMATIVE
    assert spec.kind_for("3.02") is NON_SUMMATIVE
    assert TeamSpec().kind_for("5.01") is SUMMATIVE


def _dv(*values):
    return DeltaVector("x", tuple(Delta(cid(f"3.0{i + 1}"), v) for i, v in enumerate(values)))


@pytest.mark.parametrize(
    "values, expected",
    [
        ((0, 0), Fulfillment.FULFILLED),
        ((-1, 0), Fulfillment.OVER_FULFILLED),
        ((2, -3), Fulfillment.UNDER_FULFILLED),
        ((), Fulfillment.FULFILLED),
    ],
)
def test_classify_fulfillment(values, expected):
    assert classify_fulfillment(_dv(*values)) is expected
