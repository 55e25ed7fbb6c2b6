"""Capability deltas for human-autonomy teams.

Quantify agent capabilities, aggregate them into team capabilities, measure
the gap to task requirements and pick control distributions between a human
and an autonomous agent.
"""

from .aggregation import (
    Action,
    AggregationKind,
    Delta,
    DeltaVector,
    Fulfillment,
    TeamSpec,
    capability_delta,
    classify_fulfillment,
    delta_vector,
    team_capability,
)
from .arbitration import (
    BREAK,
    AgentBelief,
    ConsensusState,
    ConsensusStatus,
    SimulationConfig,
    arbitrate,
    observe,
    propose,
    run_sequence,
)
from .compensation import (
    CompensationPlan,
    CompensationStatus,
    ConjugatedPair,
    compensate,
    find_reserves,
    plan_report,
)
from .core import (
    BUILTIN_TAXONOMY,
    AgentKind,
    AgentProfile,
    CapabilityId,
    DiscretizerSpec,
    QuantScale,
    ResourceState,
    ScaleKind,
    builtin_imba_subset,
    discretize,
    effective_capacity,
    parse_capability_id,
    validate_profile,
)
from .crsolver import (
    ControlDistribution,
    SelectionPolicy,
    SolveOutcome,
    SpaceLabel,
    classify_point,
    enumerate_grid,
    point_delta,
    requirement_line,
    solve_distribution,
)

__version__ = "0.1.0"

__all__ = [
    "Action",
    "AggregationKind",
    "Delta",
    "DeltaVector",
    "Fulfillment",
    "TeamSpec",
    "capability_delta",
    "classify_fulfillment",
    "delta_vector",
    "team_capability",
    "BREAK",
    "AgentBelief",
    "ConsensusState",
    "ConsensusStatus",
    "SimulationConfig",
    "arbitrate",
    "observe",
    "propose",
    "run_sequence",
    "CompensationPlan",
    "CompensationStatus",
    "ConjugatedPair",
    "compensate",
    "find_reserves",
    "plan_report",
    "BUILTIN_TAXONOMY",
    "AgentKind",
    "AgentProfile",
    "CapabilityId",
    "DiscretizerSpec",
    "QuantScale",
    "ResourceState",
    "ScaleKind",
    "builtin_imba_subset",
    "discretize",
    "effective_capacity",
    "parse_capability_id",
    "validate_profile",
    "ControlDistribution",
    "SelectionPolicy",
    "SolveOutcome",
    "SpaceLabel",
    "classify_point",
    "enumerate_grid",
    "point_delta",
    "requirement_line",
    "solve_distribution",
]
