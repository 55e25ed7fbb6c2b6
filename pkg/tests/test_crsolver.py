from itertools import product

import pytest

from capdelta.aggregation import NON_SUMMATIVE, SUMMATIVE, AggregationKind
from capdelta.crsolver import (
    ControlDistribution as P,
    SelectionPolicy,
    SpaceLabel,
    classify_point,
    enumerate_grid,
    point_delta,
    requirement_line,
    solve_distribution,
)

Q = range(6)


def oracle(r, kind, cap_a, cap_h, policy):
    """Brute force: keep points reaching r, prefer the smallest over-shoot,
    then order by the policy. None means a control deficit."""
    def value(a, h):
        return a + h if kind is SUMMATIVE else max(a, h)

    feasible = [(a, h) for a in range(cap_a + 1) for h in range(cap_h + 1) if value(a, h) >= r]
    if not feasible:
        return None

    def key(p):
        a, h = p
        over = value(a, h) - r
        if policy is SelectionPolicy.MAX_HUMAN:
            return (over, -h, a)
        if policy is SelectionPolicy.MIN_SUPPORT:
            return (over, a, -h)
        return (over, abs(r - min(value(a, h), 5)), -h, a)

    return min(feasible, key=key)


@pytest.mark.parametrize("caps, n", [((5, 5), 36), ((0, 0), 1), ((2, 3), 12)])
def test_enumerate_grid(caps, n):
    grid = enumerate_grid(*caps)
    assert len(grid) == len(set(grid)) == n
    assert all(p.auto_perf <= caps[0] and p.human_perf <= caps[1] for p in grid)


@pytest.mark.parametrize(
    "p, label",
    [(P(4, 0), SpaceLabel.COLLABORATIVE), (P(2, 2), SpaceLabel.SUMMATIVE_ONLY), (P(1, 1), SpaceLabel.INSUFFICIENT)],
)
def test_classify_point(p, label):
    assert classify_point(p, 4) is label


def test_requirement_line_summative():
    assert set(requirement_line(4, SUMMATIVE, 5, 5)) == {P(0, 4), P(1, 3), P(2, 2), P(3, 1), P(4, 0)}


@pytest.mark.parametrize("kind", list(AggregationKind))
def test_requirement_line_zero(kind):
    assert requirement_line(0, kind, 5, 5) == [P(0, 0)]


def test_requirement_line_non_summative():
    assert set(requirement_line(4, NON_SUMMATIVE, 5, 3)) == {P(4, 0), P(4, 1), P(4, 2), P(4, 3)}


def test_requirement_line_at_q_max_is_unclamped():
    line = requirement_line(5, SUMMATIVE, 5, 5)
    assert all(p.auto_perf + p.human_perf == 5 for p in line)
    assert len(line) == 6


def test_solve_examples():
    assert solve_distribution(4, SUMMATIVE, 5, 5).chosen == P(0, 4)
    assert solve_distribution(4, NON_SUMMATIVE, 5, 3).chosen == P(4, 3)
    out = solve_distribution(5, NON_SUMMATIVE, 2, 2)
    assert out.is_deficit and out.chosen is None
    assert out.deficit.best_achievable == 2


def test_min_support_prefers_less_automation():
    assert solve_distribution(4, SUMMATIVE, 5, 2, SelectionPolicy.MIN_SUPPORT).chosen == P(2, 2)
    assert solve_distribution(4, NON_SUMMATIVE, 5, 3, SelectionPolicy.MIN_SUPPORT).chosen == P(4, 3)


@pytest.mark.parametrize(
    "p, r, kind, expected",
    [(P(2, 2), 4, SUMMATIVE, 0), (P(0, 0), 4, SUMMATIVE, 4), (P(0, 0), 4, NON_SUMMATIVE, 4), (P(5, 5), 4, NON_SUMMATIVE, -1)],
)
def test_point_delta(p, r, kind, expected):
    assert point_delta(p, r, kind) == expected


def test_collaborative_nested_in_summative():
    for a, h, r in product(Q, repeat=3):
        label = classify_point(P(a, h), r)
        if label is SpaceLabel.COLLABORATIVE:
            assert a + h >= r


def test_solver_matches_oracle_everywhere():
    for r, ca, ch, kind, policy in product(Q, Q, Q, AggregationKind, SelectionPolicy):
        out = solve_distribution(r, kind, ca, ch, policy)
        expected = oracle(r, kind, ca, ch, policy)
        if expected is None:
            assert out.is_deficit
        else:
            assert (out.chosen.auto_perf, out.chosen.human_perf) == expected


def test_deficit_iff_grid_cannot_reach():
    for r, ca, ch, kind in product(Q, Q, Q, AggregationKind):
        best = max(kind.combine(p.auto_perf, p.human_perf, 5) for p in enumerate_grid(ca, ch))
        out = solve_distribution(r, kind, ca, ch)
        assert out.is_deficit == (best < r)
        if out.is_deficit:
            assert out.deficit.best_achievable == best


def test_line_points_have_zero_delta():
    for r, ca, ch, kind in product(Q, Q, Q, AggregationKind):
        for p in requirement_line(r, kind, ca, ch):
            assert point_delta(p, r, kind) == 0


def test_non_summative_choice_has_one_agent_covering():
    for r, ca, ch, policy in product(range(1, 6), Q, Q, SelectionPolicy):
        out = solve_distribution(r, NON_SUMMATIVE, ca, ch, policy)
        if not out.is_deficit:
            assert max(out.chosen.auto_perf, out.chosen.human_perf) >= r


class _Shifted:
    """A kind whose values skip the requirement, forcing the over-shoot path."""

    def raw(self, a, h):
        return 2 * max(a, h)

    def combine(self, a, h, q_max):
        return min(self.raw(a, h), q_max)


def test_over_fulfilment_fallback():
    out = solve_distribution(3, _Shifted(), 3, 3)
    # 2*max(a,h) never equals 3; the closest reachable value is 4
    assert out.chosen == P(0, 2)
    assert out.delta == -1
