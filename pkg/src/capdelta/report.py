"""Delta reports: per-action deltas, solver choices and compensation.

The machine form is JSON; the text form is rendered from the same data.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional

from .aggregation import Action, classify_fulfillment, delta_vector, team_capability
from .compensation import compensate, outcome_to_dict, plan_report
from .core import AgentProfile, PerformanceAssignment
from .crsolver import ControlDistribution, classify_point, solve_distribution
from .formats import FORMAT_VERSION, TeamConfig


@dataclass(frozen=True)
class DeltaEntry:
    action_id: str
    requirements: dict[str, int]
    team_capabilities: dict[str, int]
    deltas: dict[str, int]
    fulfillment: str
    space_labels: dict[str, str]
    distributions: dict[str, dict]
    deficits: list[str]
    compensation: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DeltaReport:
    entries: tuple[DeltaEntry, ...] = ()
    policy: str = "max-human"
    format_version: int = FORMAT_VERSION

    def to_dict(self) -> dict:
        return {
            "format_version": self.format_version,
            "kind": "delta_report",
            "policy": self.policy,
            "entries": [asdict(e) for e in self.entries],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DeltaReport":
        if data.get("kind") != "delta_report":
            raise ValueError("not a delta report")
        return cls(tuple(DeltaEntry(**e) for e in data["entries"]), data["policy"], data["format_version"])

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def loads(cls, text: str) -> "DeltaReport":
        return cls.from_dict(json.loads(text))

    @property
    def has_deficit(self) -> bool:
        return any(e.deficits for e in self.entries)


def delta_entry(
    action: Action,
    human: AgentProfile,
    auto: AgentProfile,
    team: TeamConfig,
    human_perf: Optional[PerformanceAssignment] = None,
    auto_perf: Optional[PerformanceAssignment] = None,
) -> DeltaEntry:
    spec = team.spec
    h_perf = dict(human.capacities) if human_perf is None else dict(human_perf)
    a_perf = dict(auto.capacities) if auto_perf is None else dict(auto_perf)
    dv = delta_vector(action, h_perf, a_perf, spec)
    team_caps, labels, dists, deficits = {}, {}, {}, []
    for cid in action.capabilities:
        key = str(cid)
        kind = spec.kind_for(cid)
        team_caps[key] = team_capability(h_perf.get(cid, 0), a_perf.get(cid, 0), kind, spec.scale)
        outcome = solve_distribution(
            action.requirements[cid], kind, auto.capacity(cid), human.capacity(cid), team.policy, spec.q_max
        )
        dists[key] = outcome_to_dict(outcome)
        if outcome.is_deficit:
            deficits.append(key)
            point = ControlDistribution(auto.capacity(cid), human.capacity(cid))
            labels[key] = classify_point(point, action.requirements[cid]).value
        else:
            labels[key] = outcome.label.value
    plan = compensate(action, human, auto, spec, team.pairs, team.policy)
    return DeltaEntry(
        action_id=action.action_id,
        requirements={str(c): v for c, v in sorted(action.requirements.items())},
        team_capabilities=team_caps,
        deltas={str(d.capability): d.value for d in dv},
        fulfillment=classify_fulfillment(dv).value,
        space_labels=labels,
        distributions=dists,
        deficits=deficits,
        compensation=plan_report(plan),
    )


def build_delta_report(
    human: AgentProfile,
    auto: AgentProfile,
    actions: Iterable[Action],
    team: TeamConfig,
    human_perf: Optional[PerformanceAssignment] = None,
    auto_perf: Optional[PerformanceAssignment] = None,
    jobs: int = 1,
) -> DeltaReport:
    """One entry per action, in input order whatever ``jobs`` is."""
    actions = list(actions)

    def one(action: Action) -> DeltaEntry:
        return delta_entry(action, human, auto, team, human_perf, auto_perf)

    if jobs > 1 and len(actions) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(one, actions))
    else:
        entries = [one(a) for a in actions]
    return DeltaReport(tuple(entries), team.policy.value)


def _dist_text(d: dict) -> str:
    if d["deficit"]:
        return f"DEFICIT (best achievable {d['best_achievable']} < {d['requirement']})"
    return f"(a={d['auto_perf']}, h={d['human_perf']}) delta={d['delta']} [{d['label']}]"


def render_plan_text(plan: dict) -> str:
    lines = [f"compensation for {plan['action_id']}: {plan['status']}"]
    for req in plan["requirements"]:
        mark = " *" if req["original"] != req["adjusted"] else ""
        lines.append(f"  r[{req['capability']}] {req['original']} -> {req['adjusted']}{mark}")
    for t in plan["transfers"]:
        lines.append(
            f"  transfer {t['degraded']} -> {t['compensator']}: shortfall {t['shortfall_moved']}, raised by {t['raised_by']}"
        )
    for cid, value in plan["residuals"].items():
        lines.append(f"  residual {cid}: {value}")
    for cid, d in plan["distributions"].items():
        lines.append(f"  {cid}: {_dist_text(d)}")
    roles = plan["roles"]
    lines.append(
        f"  roles: leader={roles['leader']} supporter={roles['supporter']} "
        f"(human {roles['human_contribution']}, autonomous {roles['autonomous_contribution']})"
    )
    return "\n".join(lines)


def render_text(report: DeltaReport) -> str:
    if not report.entries:
        return "no actions\n"
    blocks = []
    for e in report.entries:
        lines = [f"action {e.action_id}: {e.fulfillment}"]
        for cid, r in e.requirements.items():
            lines.append(
                f"  {cid}: r={r} team={e.team_capabilities[cid]} delta={e.deltas[cid]:+d} "
                f"{_dist_text(e.distributions[cid])}"
            )
        if e.deficits:
            lines.append(f"  control deficit on {', '.join(e.deficits)}")
        lines.append("  " + render_plan_text(e.compensation).replace("\n", "\n  "))
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
