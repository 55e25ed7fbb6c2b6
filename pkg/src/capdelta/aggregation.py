"""Team capability formation and capability deltas."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional

from .core import (
    DEFAULT_SCALE,
    SUMMATIVE_BY_DEFAULT,
    CapabilityId,
    CapLike,
    PerformanceAssignment,
    QuantScale,
    as_id,
)


class AggregationKind(enum.Enum):
    SUMMATIVE = "summative"
    NON_SUMMATIVE = "non_summative"

    def raw(self, auto: int, human: int) -> int:
        """Unclamped team value; the requirement line is drawn on this."""
        if self is AggregationKind.SUMMATIVE:
            return auto + human
        return max(auto, human)

    def combine(self, auto: int, human: int, q_max: int) -> int:
        return min(self.raw(auto, human), q_max)


SUMMATIVE = AggregationKind.SUMMATIVE
NON_SUMMATIVE = AggregationKind.NON_SUMMATIVE


def default_kind(cid: CapLike) -> AggregationKind:
    return SUMMATIVE if as_id(cid) in SUMMATIVE_BY_DEFAULT else NON_SUMMATIVE


@dataclass(frozen=True)
class TeamSpec:
    scale: QuantScale = DEFAULT_SCALE
    kinds: Mapping[CapabilityId, AggregationKind] = field(default_factory=dict)

    def kind_for(self, cid: CapLike) -> AggregationKind:
        key = as_id(cid)
        return self.kinds.get(key) or default_kind(key)

    @property
    def q_max(self) -> int:
        return self.scale.q_max


@dataclass(frozen=True)
class Action:
    action_id: str
    requirements: Mapping[CapabilityId, int]
    # resource names the human needs present to act at all
    resources: frozenset[str] = frozenset()

    @property
    def capabilities(self) -> list[CapabilityId]:
        return sorted(self.requirements)

    def requirement(self, cid: CapLike) -> int:
        return self.requirements[as_id(cid)]

    def with_requirements(self, requirements: Mapping[CapabilityId, int]) -> "Action":
        return Action(self.action_id, dict(requirements), self.resources)


@dataclass(frozen=True)
class Delta:
    capability: CapabilityId
    value: int


@dataclass(frozen=True)
class DeltaVector:
    action_id: str
    deltas: tuple[Delta, ...] = ()

    def __iter__(self) -> Iterator[Delta]:
        return iter(self.deltas)

    def __len__(self) -> int:
        return len(self.deltas)

    def as_dict(self) -> dict[CapabilityId, int]:
        return {d.capability: d.value for d in self.deltas}

    @property
    def values(self) -> list[int]:
        return [d.value for d in self.deltas]


class Fulfillment(enum.Enum):
    FULFILLED = "fulfilled"
    OVER_FULFILLED = "over_fulfilled"
    UNDER_FULFILLED = "under_fulfilled"


def team_capability(
    human_perf: int,
    auto_perf: int,
    kind: AggregationKind,
    scale: QuantScale = DEFAULT_SCALE,
) -> int:
    scale.check(human_perf, "human performance")
    scale.check(auto_perf, "autonomous performance")
    return kind.combine(auto_perf, human_perf, scale.q_max)


def capability_delta(requirement: int, team_cap: int, scale: QuantScale = DEFAULT_SCALE) -> int:
    """Positive: the team falls short by that much. Negative: reserve."""
    scale.check(requirement, "requirement")
    scale.check(team_cap, "team capability")
    return requirement - team_cap


def delta_vector(
    action: Action,
    human: PerformanceAssignment,
    auto: PerformanceAssignment,
    spec: TeamSpec,
) -> DeltaVector:
    deltas = []
    for cid in action.capabilities:
        team = team_capability(human.get(cid, 0), auto.get(cid, 0), spec.kind_for(cid), spec.scale)
        deltas.append(Delta(cid, capability_delta(action.requirements[cid], team, spec.scale)))
    return DeltaVector(action.action_id, tuple(deltas))


def capacity_delta_vector(action: Action, human, auto, spec: TeamSpec) -> DeltaVector:
    """Delta vector with both agents acting at full capacity."""
    return delta_vector(action, dict(human.capacities), dict(auto.capacities), spec)


def classify_fulfillment(dv: DeltaVector) -> Fulfillment:
    values = dv.values
    if any(v > 0 for v in values):
        return Fulfillment.UNDER_FULFILLED
    if any(v < 0 for v in values):
        return Fulfillment.OVER_FULFILLED
    return Fulfillment.FULFILLED


def parse_kind(text: str, location: Optional[str] = None) -> AggregationKind:
    try:
        return AggregationKind(text)
    except ValueError:
        where = f" at {location}" if location else ""
        raise ValueError(f"unknown aggregation kind {text!r}{where}") from None
