"""Delta compensation across conjugated capabilities.

A capability whose team capacity falls short of its requirement has that
requirement virtually lowered to what the team can do. The missing amount is
shifted onto conjugated capabilities that still have reserves, in the order
given by :func:`find_reserves`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .aggregation import Action, DeltaVector, TeamSpec, capacity_delta_vector
from .core import AgentProfile, CapabilityId, Taxonomy, UnknownCapabilityError, as_id, to_fraction
from .crsolver import SelectionPolicy, SolveOutcome, solve_distribution


@dataclass(frozen=True)
class ConjugatedPair:
    degraded: CapabilityId
    compensator: CapabilityId
    rate: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "degraded", as_id(self.degraded))
        object.__setattr__(self, "compensator", as_id(self.compensator))
        object.__setattr__(self, "rate", to_fraction(self.rate))
        if self.degraded == self.compensator:
            raise ValueError(f"pair {self.degraded} cannot compensate itself")
        if self.rate <= 0:
            raise ValueError(f"pair {self.degraded}->{self.compensator}: rate must be > 0")

    def __str__(self) -> str:
        return f"{self.degraded}->{self.compensator}"


@dataclass(frozen=True)
class VirtualRequirement:
    capability: CapabilityId
    original: int
    adjusted: int


@dataclass(frozen=True)
class Transfer:
    pair: ConjugatedPair
    shortfall_moved: int
    raised_by: int


class CompensationStatus(enum.Enum):
    NO_OP_ALL_FULFILLED = "no_op_all_fulfilled"
    COMPENSATED = "compensated"
    PARTIALLY_COMPENSATED = "partially_compensated"
    UNCOMPENSATABLE = "uncompensatable"


@dataclass(frozen=True)
class CompensationPlan:
    action_id: str
    status: CompensationStatus
    requirements: dict[CapabilityId, int]
    adjustments: tuple[VirtualRequirement, ...] = ()
    transfers: tuple[Transfer, ...] = ()
    residuals: dict[CapabilityId, int] = field(default_factory=dict)
    distributions: dict[CapabilityId, SolveOutcome] = field(default_factory=dict)

    @property
    def adjusted_requirements(self) -> dict[CapabilityId, int]:
        out = dict(self.requirements)
        out.update({v.capability: v.adjusted for v in self.adjustments})
        return out

    @property
    def residual(self) -> int:
        return sum(self.residuals.values())


def find_reserves(dv: DeltaVector) -> list[tuple[CapabilityId, int]]:
    reserves = [(d.capability, -d.value) for d in dv if d.value < 0]
    return sorted(reserves, key=lambda item: (-item[1], item[0].sort_key))


def _absorbable(shortfall: int, rate: Fraction, room: int) -> int:
    """Largest k <= shortfall with ceil(rate * k) <= room."""
    k = min(shortfall, math.floor(room / rate))
    while k > 0 and math.ceil(rate * k) > room:
        k -= 1
    return max(k, 0)


def check_pairs(pairs: Iterable[ConjugatedPair], taxonomy: Taxonomy) -> None:
    for pair in pairs:
        for cid in (pair.degraded, pair.compensator):
            if cid not in taxonomy:
                raise UnknownCapabilityError(str(cid))


def compensate(
    action: Action,
    human: AgentProfile,
    auto: AgentProfile,
    spec: TeamSpec,
    pairs: Iterable[ConjugatedPair] = (),
    policy: SelectionPolicy = SelectionPolicy.MAX_HUMAN,
    taxonomy: Optional[Taxonomy] = None,
) -> CompensationPlan:
    pairs = tuple(pairs)
    if taxonomy is not None:
        check_pairs(pairs, taxonomy)
    q_max = spec.q_max
    dv = capacity_delta_vector(action, human, auto, spec)
    deltas = dv.as_dict()
    team_cap = {cid: action.requirements[cid] - d for cid, d in deltas.items()}
    original = dict(action.requirements)
    adjusted = dict(original)
    transfers: list[Transfer] = []
    residuals: dict[CapabilityId, int] = {}
    outcomes = []

    degraded = sorted(cid for cid, d in deltas.items() if d > 0)
    if degraded:
        reserve_order = [cid for cid, _ in find_reserves(dv)]
        for cid in degraded:
            shortfall = deltas[cid]
            adjusted[cid] = team_cap[cid]
            moved_total = 0
            usable = {p.compensator: p for p in pairs if p.degraded == cid}
            for comp in reserve_order:
                pair = usable.get(comp)
                remaining = shortfall - moved_total
                if pair is None or remaining == 0:
                    continue
                room = min(q_max, team_cap[comp]) - adjusted[comp]
                k = _absorbable(remaining, pair.rate, room)
                if k == 0:
                    continue
                raise_by = math.ceil(pair.rate * k)
                adjusted[comp] += raise_by
                moved_total += k
                transfers.append(Transfer(pair, k, raise_by))
            if moved_total == shortfall:
                outcomes.append("full")
            else:
                residuals[cid] = shortfall - moved_total
                outcomes.append("none" if moved_total == 0 else "partial")

    if not degraded:
        status = CompensationStatus.NO_OP_ALL_FULFILLED
    elif all(o == "full" for o in outcomes):
        status = CompensationStatus.COMPENSATED
    elif all(o == "none" for o in outcomes):
        status = CompensationStatus.UNCOMPENSATABLE
    else:
        status = CompensationStatus.PARTIALLY_COMPENSATED

    adjustments = tuple(
        VirtualRequirement(cid, original[cid], adjusted[cid]) for cid in sorted(adjusted) if adjusted[cid] != original[cid]
    )
    distributions = {
        cid: solve_distribution(
            adjusted[cid], spec.kind_for(cid), auto.capacity(cid), human.capacity(cid), policy, q_max
        )
        for cid in action.capabilities
    }
    return CompensationPlan(
        action_id=action.action_id,
        status=status,
        requirements=original,
        adjustments=adjustments,
        transfers=tuple(transfers),
        residuals=residuals,
        distributions=distributions,
    )


def contributions(plan: CompensationPlan) -> tuple[int, int]:
    """Total (human, autonomous) performance over the adjusted capabilities."""
    adjusted = {v.capability for v in plan.adjustments}
    chosen = [o.chosen for cid, o in plan.distributions.items() if cid in adjusted and o.chosen]
    return sum(p.human_perf for p in chosen), sum(p.auto_perf for p in chosen)


def plan_report(plan: CompensationPlan) -> dict:
    """Plain-data summary of a plan, with leader/supporter roles."""
    human_total, auto_total = contributions(plan)
    # ties go to the autonomous agent, the usual holder of reserves
    supporter = "human" if human_total > auto_total else "autonomous"
    leader = "autonomous" if supporter == "human" else "human"
    adjusted = plan.adjusted_requirements
    return {
        "action_id": plan.action_id,
        "status": plan.status.value,
        "requirements": [
            {"capability": str(cid), "original": plan.requirements[cid], "adjusted": adjusted[cid]}
            for cid in sorted(plan.requirements)
        ],
        "adjustments": [
            {"capability": str(v.capability), "original": v.original, "adjusted": v.adjusted}
            for v in plan.adjustments
        ],
        "transfers": [
            {
                "degraded": str(t.pair.degraded),
                "compensator": str(t.pair.compensator),
                "rate": str(t.pair.rate),
                "shortfall_moved": t.shortfall_moved,
                "raised_by": t.raised_by,
            }
            for t in plan.transfers
        ],
        "residuals": {str(cid): v for cid, v in sorted(plan.residuals.items())},
        "residual_total": plan.residual,
        "distributions": {str(cid): outcome_to_dict(o) for cid, o in sorted(plan.distributions.items())},
        "roles": {
            "leader": leader,
            "supporter": supporter,
            "human_contribution": human_total,
            "autonomous_contribution": auto_total,
        },
    }


def outcome_to_dict(outcome: SolveOutcome) -> dict:
    if outcome.deficit is not None:
        d = outcome.deficit
        return {
            "deficit": True,
            "requirement": d.requirement,
            "cap_auto": d.cap_auto,
            "cap_human": d.cap_human,
            "best_achievable": d.best_achievable,
        }
    return {
        "deficit": False,
        "auto_perf": outcome.chosen.auto_perf,
        "human_perf": outcome.chosen.human_perf,
        "delta": outcome.delta,
        "label": outcome.label.value,
    }


def apply_plan(action: Action, plan: CompensationPlan) -> Action:
    """Action carrying the plan's virtual requirements."""
    return action.with_requirements(plan.adjusted_requirements)

