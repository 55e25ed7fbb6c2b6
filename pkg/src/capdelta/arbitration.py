"""Two-agent arbitration over control distributions.

Each agent knows its own capacities and holds a belief about the other's,
built from the performances the other has been seen to offer. Both agents
propose a distribution per capability; they agree when the proposals match.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .aggregation import Action, TeamSpec, capacity_delta_vector
from .compensation import CompensationStatus, ConjugatedPair, compensate, plan_report
from .core import DEFAULT_SCALE, AgentProfile, CapabilityId, QuantScale, effective_profile, to_fraction
from .crsolver import ControlDistribution, SelectionPolicy, solve_distribution


@dataclass(frozen=True)
class AgentBelief:
    subject: str
    estimates: Mapping[CapabilityId, int] = field(default_factory=dict)
    observation_count: Mapping[CapabilityId, int] = field(default_factory=dict)

    def estimate(self, cid: CapabilityId) -> int:
        return self.estimates.get(cid, 0)

    @classmethod
    def exact(cls, profile: AgentProfile) -> "AgentBelief":
        return cls(profile.agent_id, dict(profile.capacities))


def observe(
    belief: AgentBelief,
    capability: CapabilityId,
    witnessed_perf: int,
    under_read: bool = False,
    q_max: int = DEFAULT_SCALE.q_max,
) -> AgentBelief:
    """Fold one witnessed performance into a belief (a lower bound)."""
    QuantScale(q_max).check(witnessed_perf, "witnessed performance")
    reading = max(0, witnessed_perf - (1 if under_read else 0))
    estimates = dict(belief.estimates)
    estimates[capability] = max(belief.estimate(capability), reading)
    counts = dict(belief.observation_count)
    counts[capability] = counts.get(capability, 0) + 1
    return replace(belief, estimates=estimates, observation_count=counts)


@dataclass(frozen=True)
class Proposal:
    """Per-capability distributions offered by one agent.

    Where the proposer sees a control deficit it still offers a best-effort
    point (both agents at full believed capacity) and lists the capability in
    ``deficits``; the offered performance is what the other agent observes.
    """

    round: int
    proposer: str
    distributions: dict[CapabilityId, ControlDistribution]
    deficits: frozenset[CapabilityId] = frozenset()

    def own_contribution(self, cid: CapabilityId, human: bool) -> int:
        p = self.distributions[cid]
        return p.human_perf if human else p.auto_perf

    def same_offer(self, other: "Proposal") -> bool:
        return self.distributions == other.distributions and self.deficits == other.deficits


def propose(
    self_profile: AgentProfile,
    belief_about_other: AgentBelief,
    action: Action,
    spec: TeamSpec,
    policy: SelectionPolicy = SelectionPolicy.MAX_HUMAN,
    round: int = 1,
) -> Proposal:
    distributions = {}
    deficits = set()
    for cid in action.capabilities:
        own = self_profile.capacity(cid)
        other = belief_about_other.estimate(cid)
        cap_auto, cap_human = (other, own) if self_profile.is_human else (own, other)
        outcome = solve_distribution(
            action.requirements[cid], spec.kind_for(cid), cap_auto, cap_human, policy, spec.q_max
        )
        if outcome.is_deficit:
            deficits.add(cid)
            distributions[cid] = ControlDistribution(cap_auto, cap_human)
        else:
            distributions[cid] = outcome.chosen
    return Proposal(round, self_profile.agent_id, distributions, frozenset(deficits))


class ConsensusStatus(enum.Enum):
    CONSENSUS = "consensus"
    DISSONANCE = "dissonance"


@dataclass(frozen=True)
class ConsensusState:
    status: ConsensusStatus
    rounds_used: int
    agreed: Optional[Proposal]
    log: tuple[Proposal, ...]
    human_belief: AgentBelief
    auto_belief: AgentBelief

    @property
    def has_deficit(self) -> bool:
        return self.agreed is not None and bool(self.agreed.deficits)


@dataclass(frozen=True)
class SimulationConfig:
    seed: int = 0
    max_rounds: int = 6
    perception_noise: Fraction = Fraction(0)
    stamina_drain_per_action: Fraction = Fraction(0)
    stamina_recovery_per_break: Fraction = Fraction(0)

    def __post_init__(self):
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")
        for name in ("perception_noise", "stamina_drain_per_action", "stamina_recovery_per_break"):
            value = to_fraction(getattr(self, name))
            if not 0 <= value <= 1:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
            object.__setattr__(self, name, value)


def _under_read(rng: random.Random, noise: Fraction) -> bool:
    # no draw at zero noise, so noiseless runs never touch the generator
    return noise > 0 and rng.random() < noise


def arbitrate(
    human: AgentProfile,
    auto: AgentProfile,
    action: Action,
    spec: TeamSpec,
    config: SimulationConfig = SimulationConfig(),
    policy: SelectionPolicy = SelectionPolicy.MAX_HUMAN,
    human_belief: Optional[AgentBelief] = None,
    auto_belief: Optional[AgentBelief] = None,
    rng: Optional[random.Random] = None,
) -> ConsensusState:
    """Negotiate distributions for one action.

    ``human_belief`` is the human's belief about the autonomous agent and
    ``auto_belief`` the reverse; both default to knowing nothing.
    """
    rng = rng if rng is not None else random.Random(config.seed)
    human_belief = human_belief or AgentBelief(auto.agent_id)
    auto_belief = auto_belief or AgentBelief(human.agent_id)
    log: list[Proposal] = []
    q_max = spec.q_max

    for rnd in range(1, config.max_rounds + 1):
        from_human = propose(human, human_belief, action, spec, policy, rnd)
        from_auto = propose(auto, auto_belief, action, spec, policy, rnd)
        log += [from_human, from_auto]
        if from_human.same_offer(from_auto):
            return ConsensusState(
                ConsensusStatus.CONSENSUS, rnd, from_human, tuple(log), human_belief, auto_belief
            )
        for cid in action.capabilities:
            seen = from_auto.own_contribution(cid, human=False)
            human_belief = observe(human_belief, cid, seen, _under_read(rng, config.perception_noise), q_max)
            seen = from_human.own_contribution(cid, human=True)
            auto_belief = observe(auto_belief, cid, seen, _under_read(rng, config.perception_noise), q_max)

    return ConsensusState(
        ConsensusStatus.DISSONANCE, config.max_rounds, None, tuple(log), human_belief, auto_belief
    )


class Break:
    """Marker for a rest period inside an action sequence."""

    def __repr__(self) -> str:
        return "BREAK"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Break)

    def __hash__(self) -> int:
        return hash(Break)


BREAK = Break()
Step = Union[Action, Break]


@dataclass(frozen=True)
class SequenceReport:
    records: tuple[dict, ...]

    @property
    def failures(self) -> list[dict]:
        return [r for r in self.records if r["kind"] == "action" and not r["resolved"]]


def _caps(profile: AgentProfile, action: Action) -> dict[str, int]:
    return {str(cid): profile.capacity(cid) for cid in action.capabilities}


def run_sequence(
    human: AgentProfile,
    auto: AgentProfile,
    steps: Sequence[Step],
    spec: TeamSpec,
    pairs: Iterable[ConjugatedPair] = (),
    config: SimulationConfig = SimulationConfig(),
    policy: SelectionPolicy = SelectionPolicy.MAX_HUMAN,
) -> SequenceReport:
    """Run actions in order, draining human stamina per action and
    restoring it at breaks. Beliefs carry over between actions."""
    pairs = tuple(pairs)
    rng = random.Random(config.seed)
    stamina = human.resources.mental_stamina
    human_belief = AgentBelief(auto.agent_id)
    auto_belief = AgentBelief(human.agent_id)
    records = []

    for index, step in enumerate(steps):
        if isinstance(step, Break):
            stamina = min(Fraction(1), stamina + config.stamina_recovery_per_break)
            records.append({"index": index, "kind": "break", "stamina": str(stamina)})
            continue

        stamina = stamina * (1 - config.stamina_drain_per_action)
        drained = replace(human, resources=human.resources.with_stamina(stamina))
        h_eff = effective_profile(drained, step.resources)
        a_eff = effective_profile(auto)
        state = arbitrate(h_eff, a_eff, step, spec, config, policy, human_belief, auto_belief, rng)
        human_belief, auto_belief = state.human_belief, state.auto_belief

        dv = capacity_delta_vector(step, h_eff, a_eff, spec)
        record = {
            "index": index,
            "kind": "action",
            "action_id": step.action_id,
            "stamina": str(stamina),
            "human_effective": _caps(h_eff, step),
            "auto_effective": _caps(a_eff, step),
            "deltas": {str(d.capability): d.value for d in dv},
            "status": state.status.value,
            "rounds": state.rounds_used,
            "deficit": state.has_deficit,
            "distributions": None,
            "compensation": None,
        }
        if state.agreed is not None:
            record["distributions"] = {
                str(cid): {"auto_perf": p.auto_perf, "human_perf": p.human_perf, "deficit": cid in state.agreed.deficits}
                for cid, p in sorted(state.agreed.distributions.items())
            }
        resolved = state.status is ConsensusStatus.CONSENSUS
        if state.status is ConsensusStatus.DISSONANCE or state.has_deficit:
            plan = compensate(step, h_eff, a_eff, spec, pairs, policy)
            record["compensation"] = plan_report(plan)
            resolved = resolved and plan.status is CompensationStatus.COMPENSATED
        record["resolved"] = resolved
        records.append(record)

    return SequenceReport(tuple(records))

