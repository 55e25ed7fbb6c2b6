"""Capabilities-requirement (CR) diagram: grid, spaces and distribution choice.

The horizontal axis carries the autonomous agent's performance, the vertical
axis the human's. Every integer point inside both capacities is a candidate
control distribution.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import product
from typing import Optional

from .aggregation import AggregationKind

DEFAULT_Q_MAX = 5


@dataclass(frozen=True, order=True)
class ControlDistribution:
    auto_perf: int
    human_perf: int

    def __str__(self) -> str:
        return f"(a={self.auto_perf}, h={self.human_perf})"


class SpaceLabel(enum.Enum):
    COLLABORATIVE = "collaborative"
    SUMMATIVE_ONLY = "summative_only"
    INSUFFICIENT = "insufficient"


class SelectionPolicy(enum.Enum):
    MAX_HUMAN = "max-human"
    MIN_SUPPORT = "min-support"
    MIN_DELTA = "min-delta"


@dataclass(frozen=True)
class ControlDeficit:
    requirement: int
    cap_auto: int
    cap_human: int
    best_achievable: int


@dataclass(frozen=True)
class SolveOutcome:
    chosen: Optional[ControlDistribution] = None
    delta: Optional[int] = None
    label: Optional[SpaceLabel] = None
    deficit: Optional[ControlDeficit] = None

    @property
    def is_deficit(self) -> bool:
        return self.deficit is not None


def enumerate_grid(cap_auto: int, cap_human: int) -> list[ControlDistribution]:
    return [ControlDistribution(a, h) for a, h in product(range(cap_auto + 1), range(cap_human + 1))]


def classify_point(p: ControlDistribution, requirement: int) -> SpaceLabel:
    if max(p.auto_perf, p.human_perf) >= requirement:
        return SpaceLabel.COLLABORATIVE
    if p.auto_perf + p.human_perf >= requirement:
        return SpaceLabel.SUMMATIVE_ONLY
    return SpaceLabel.INSUFFICIENT


def requirement_line(
    requirement: int, kind: AggregationKind, cap_auto: int, cap_human: int
) -> list[ControlDistribution]:
    """Grid points whose unclamped team value equals the requirement."""
    return [
        p for p in enumerate_grid(cap_auto, cap_human) if kind.raw(p.auto_perf, p.human_perf) == requirement
    ]


def point_delta(
    p: ControlDistribution, requirement: int, kind: AggregationKind, q_max: int = DEFAULT_Q_MAX
) -> int:
    return requirement - kind.combine(p.auto_perf, p.human_perf, q_max)


def policy_key(policy: SelectionPolicy, p: ControlDistribution, delta: int = 0) -> tuple:
    """Sort key; the smallest key wins."""
    if policy is SelectionPolicy.MAX_HUMAN:
        return (-p.human_perf, p.auto_perf)
    if policy is SelectionPolicy.MIN_SUPPORT:
        return (p.auto_perf, -p.human_perf)
    return (abs(delta), -p.human_perf, p.auto_perf)


def solve_distribution(
    requirement: int,
    kind: AggregationKind,
    cap_auto: int,
    cap_human: int,
    policy: SelectionPolicy = SelectionPolicy.MAX_HUMAN,
    q_max: int = DEFAULT_Q_MAX,
) -> SolveOutcome:
    """Pick a control distribution on the requirement line, falling back to
    the smallest over-shoot, or report a control deficit."""
    candidates = requirement_line(requirement, kind, cap_auto, cap_human)
    if not candidates:
        over = [
            p for p in enumerate_grid(cap_auto, cap_human) if kind.raw(p.auto_perf, p.human_perf) > requirement
        ]
        if not over:
            best = kind.combine(cap_auto, cap_human, q_max)
            return SolveOutcome(deficit=ControlDeficit(requirement, cap_auto, cap_human, best))
        overshoot = min(kind.raw(p.auto_perf, p.human_perf) for p in over)
        candidates = [p for p in over if kind.raw(p.auto_perf, p.human_perf) == overshoot]

    chosen = min(
        candidates,
        key=lambda p: policy_key(policy, p, point_delta(p, requirement, kind, q_max)),
    )
    return SolveOutcome(
        chosen=chosen,
        delta=point_delta(chosen, requirement, kind, q_max),
        label=classify_point(chosen, requirement),
    )
