"""Input file formats: profiles, team configs, task sequences, scenarios.

All inputs are TOML documents carrying a ``format_version`` key. Parsing is
structural only; range and taxonomy checks are left to validation so that a
syntactically fine file with bad values reports violations instead of failing.
"""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Union

import tomli_w

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .aggregation import Action, AggregationKind, TeamSpec
from .arbitration import BREAK, Break, SimulationConfig, Step
from .compensation import ConjugatedPair
from .core import (
    AgentKind,
    AgentProfile,
    CapabilityId,
    CapabilityIdError,
    QuantScale,
    ResourceState,
    Taxonomy,
    Violation,
    parse_capability_id,
    to_fraction,
)
from .crsolver import SelectionPolicy

FORMAT_VERSION = 1


class FormatError(Exception):
    """A file could not be read or does not have the expected structure."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.path = path
        self.line = line

    def __str__(self) -> str:
        where = self.path or "<input>"
        if self.line is not None:
            where += f":{self.line}"
        return f"{where}: {self.message}"


def locate(text: str, section: Optional[str], key: Optional[str] = None, occurrence: int = 0) -> Optional[int]:
    """1-based line of ``key`` inside table ``section`` (best effort).

    ``occurrence`` picks the n-th ``[[section]]`` for arrays of tables.
    """
    lines = text.splitlines()
    start = 0
    if section is not None:
        header = re.compile(r"^\s*\[\[?\s*" + re.escape(section) + r"\s*\]\]?\s*(#.*)?$")
        hits = [i for i, line in enumerate(lines) if header.match(line)]
        if len(hits) <= occurrence:
            return None
        start = hits[occurrence]
        if key is None:
            return start + 1
    if key is None:
        return None
    pattern = re.compile(r"^\s*(\"" + re.escape(key) + r"\"|'" + re.escape(key) + r"'|" + re.escape(key) + r")\s*=")
    for i in range(start, len(lines)):
        if pattern.match(lines[i]):
            return i + 1
    for i, line in enumerate(lines):
        if key in line:
            return i + 1
    return None


class _Reader:
    """Walks a parsed TOML document, raising located FormatErrors."""

    def __init__(self, text: str, path: Optional[str]):
        self.text = text
        self.path = path
        try:
            self.doc = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            found = re.search(r"at line (\d+)", str(exc))
            raise FormatError(f"syntax error: {exc}", path, int(found.group(1)) if found else None) from None

    def fail(self, message: str, section: Optional[str] = None, key: Optional[str] = None, occurrence: int = 0):
        raise FormatError(message, self.path, locate(self.text, section, key, occurrence))

    def keys(self, table: Mapping, allowed: Iterable[str], where: Optional[str], occurrence: int = 0) -> None:
        allowed = set(allowed)
        for key in table:
            if key not in allowed:
                label = f"{where}.{key}" if where else key
                self.fail(f"unknown key {label!r}", where, key, occurrence)

    def require(self, table: Mapping, key: str, kind, where: Optional[str], occurrence: int = 0):
        if key not in table:
            label = f"{where}.{key}" if where else key
            self.fail(f"missing key {label!r}", where, None if where else key, occurrence)
        return self.typed(table[key], kind, where, key, occurrence)

    def typed(self, value, kind, where: Optional[str], key: str, occurrence: int = 0):
        kinds = kind if isinstance(kind, tuple) else (kind,)
        bad_bool = isinstance(value, bool) and bool not in kinds
        if bad_bool or not isinstance(value, kinds):
            label = f"{where}.{key}" if where else key
            names = "/".join(k.__name__ for k in kinds)
            self.fail(f"{label!r} must be {names}, got {value!r}", where, key, occurrence)
        return value

    def table(self, parent: Mapping, key: str, where: Optional[str] = None, required: bool = False) -> dict:
        if key not in parent:
            if required:
                self.fail(f"missing table [{key}]", None, key)
            return {}
        return self.typed(parent[key], dict, where, key)

    def cap_id(self, text: str, section: Optional[str], occurrence: int = 0) -> CapabilityId:
        try:
            return parse_capability_id(text)
        except CapabilityIdError as exc:
            self.fail(str(exc), section, text, occurrence)

    def version(self) -> None:
        version = self.doc.get("format_version", FORMAT_VERSION)
        if version != FORMAT_VERSION:
            self.fail(f"unsupported format_version {version!r}", None, "format_version")

    def scale(self, parent: Mapping, where: str = "scale") -> QuantScale:
        table = self.table(parent, where)
        self.keys(table, ["q_max"], where)
        q_max = table.get("q_max", 5)
        self.typed(q_max, int, where, "q_max")
        try:
            return QuantScale(q_max)
        except ValueError as exc:
            self.fail(str(exc), where, "q_max")


def _read_text(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read file: {exc.strerror or exc}", str(path)) from None


def _num(value: Fraction) -> Union[int, float, str]:
    """Plain number when it reads back exactly, else a "p/q" string."""
    if value.denominator == 1:
        return int(value)
    if to_fraction(float(value)) == value:
        return float(value)
    return str(value)


def _fraction(reader: _Reader, value, where: str, key: str) -> Fraction:
    reader.typed(value, (int, float, str), where, key)
    try:
        return Fraction(value) if isinstance(value, str) else to_fraction(value)
    except ValueError as exc:
        reader.fail(f"{key}: {exc}", where, key)


# --- profiles ---------------------------------------------------------------

def parse_profile(text: str, path: Optional[str] = None) -> AgentProfile:
    r = _Reader(text, path)
    doc = r.doc
    r.keys(doc, ["format_version", "agent_id", "kind", "scale", "capacities", "resources"], None)
    r.version()
    agent_id = r.require(doc, "agent_id", str, None)
    kind_text = r.require(doc, "kind", str, None)
    try:
        kind = AgentKind(kind_text)
    except ValueError:
        r.fail(f"kind must be 'human' or 'autonomous', got {kind_text!r}", None, "kind")
    scale = r.scale(doc)

    capacities = {}
    for key, value in r.table(doc, "capacities").items():
        cid = r.cap_id(key, "capacities")
        capacities[cid] = r.typed(value, int, "capacities", key)

    res = r.table(doc, "resources")
    r.keys(res, ["actuation", "environmental", "societal", "mental_stamina"], "resources")
    pools = {}
    for pool in ("actuation", "environmental", "societal"):
        where = f"resources.{pool}"
        table = r.table(res, pool, "resources")
        pools[pool] = {name: r.typed(flag, bool, where, name) for name, flag in table.items()}
    stamina = _fraction(r, res.get("mental_stamina", 1), "resources", "mental_stamina")
    return AgentProfile(agent_id, kind, capacities, ResourceState(mental_stamina=stamina, **pools), scale)


def serialize_profile(profile: AgentProfile) -> str:
    res = profile.resources
    doc = {
        "format_version": FORMAT_VERSION,
        "agent_id": profile.agent_id,
        "kind": profile.kind.value,
        "scale": {"q_max": profile.scale.q_max},
        "capacities": {str(cid): v for cid, v in sorted(profile.capacities.items())},
        "resources": {
            "mental_stamina": _num(res.mental_stamina),
            "actuation": dict(res.actuation),
            "environmental": dict(res.environmental),
            "societal": dict(res.societal),
        },
    }
    return tomli_w.dumps(doc)


def load_profile(path: Union[str, Path]) -> AgentProfile:
    return parse_profile(_read_text(path), str(path))


# --- team configs -------------------------------------------------------------

@dataclass(frozen=True)
class TeamConfig:
    spec: TeamSpec = field(default_factory=TeamSpec)
    pairs: tuple[ConjugatedPair, ...] = ()
    policy: SelectionPolicy = SelectionPolicy.MAX_HUMAN


def parse_team(text: str, path: Optional[str] = None) -> TeamConfig:
    r = _Reader(text, path)
    doc = r.doc
    r.keys(doc, ["format_version", "scale", "aggregation", "pairs", "policy"], None)
    r.version()
    scale = r.scale(doc)

    kinds = {}
    for key, value in r.table(doc, "aggregation").items():
        cid = r.cap_id(key, "aggregation")
        r.typed(value, str, "aggregation", key)
        try:
            kinds[cid] = AggregationKind(value)
        except ValueError:
            r.fail(f"aggregation.{key}: unknown kind {value!r} (summative|non_summative)", "aggregation", key)

    pairs = []
    raw_pairs = doc.get("pairs", [])
    r.typed(raw_pairs, list, None, "pairs")
    for n, item in enumerate(raw_pairs):
        where = "pairs"
        r.typed(item, dict, None, f"pairs[{n}]")
        r.keys(item, ["degraded", "compensator", "rate"], where, n)
        degraded = r.cap_id(r.require(item, "degraded", str, where, n), where, n)
        compensator = r.cap_id(r.require(item, "compensator", str, where, n), where, n)
        rate = _fraction(r, item.get("rate", 1), where, "rate")
        try:
            pairs.append(ConjugatedPair(degraded, compensator, rate))
        except ValueError as exc:
            r.fail(f"pairs[{n}]: {exc}", where, None, n)

    policy_text = doc.get("policy", SelectionPolicy.MAX_HUMAN.value)
    r.typed(policy_text, str, None, "policy")
    try:
        policy = SelectionPolicy(policy_text)
    except ValueError:
        r.fail(f"unknown policy {policy_text!r}", None, "policy")
    return TeamConfig(TeamSpec(scale, kinds), tuple(pairs), policy)


def serialize_team(team: TeamConfig) -> str:
    doc: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "policy": team.policy.value,
        "scale": {"q_max": team.spec.scale.q_max},
        "aggregation": {str(cid): kind.value for cid, kind in sorted(team.spec.kinds.items())},
    }
    if team.pairs:
        doc["pairs"] = [
            {"degraded": str(p.degraded), "compensator": str(p.compensator), "rate": _num(p.rate)}
            for p in team.pairs
        ]
    return tomli_w.dumps(doc)


def load_team(path: Union[str, Path]) -> TeamConfig:
    return parse_team(_read_text(path), str(path))


# --- task sequences -----------------------------------------------------------

def _parse_steps(r: _Reader, items, where: str = "actions") -> list[Step]:
    r.typed(items, list, None, where)
    steps: list[Step] = []
    for n, item in enumerate(items):
        r.typed(item, dict, None, f"{where}[{n}]")
        if "break" in item:
            r.keys(item, ["break"], where, n)
            if item["break"] is not True:
                r.fail(f"{where}[{n}].break must be true", where, None, n)
            steps.append(BREAK)
            continue
        r.keys(item, ["id", "requirements", "resources"], where, n)
        action_id = r.require(item, "id", str, where, n)
        reqs = r.typed(item.get("requirements", {}), dict, where, "requirements", n)
        requirements = {}
        for key, value in reqs.items():
            cid = r.cap_id(key, where, n)
            requirements[cid] = r.typed(value, int, where, key, n)
        resources = r.typed(item.get("resources", []), list, where, "resources", n)
        for name in resources:
            r.typed(name, str, where, "resources", n)
        steps.append(Action(action_id, requirements, frozenset(resources)))
    return steps


def parse_tasks(text: str, path: Optional[str] = None) -> list[Step]:
    r = _Reader(text, path)
    r.keys(r.doc, ["format_version", "actions"], None)
    r.version()
    return _parse_steps(r, r.doc.get("actions", []))


def _steps_doc(steps: Iterable[Step]) -> list[dict]:
    out = []
    for step in steps:
        if isinstance(step, Break):
            out.append({"break": True})
            continue
        item: dict[str, Any] = {"id": step.action_id}
        if step.resources:
            item["resources"] = sorted(step.resources)
        item["requirements"] = {str(cid): v for cid, v in sorted(step.requirements.items())}
        out.append(item)
    return out


def serialize_tasks(steps: Iterable[Step]) -> str:
    return tomli_w.dumps({"format_version": FORMAT_VERSION, "actions": _steps_doc(steps)})


def load_tasks(path: Union[str, Path]) -> list[Step]:
    return parse_tasks(_read_text(path), str(path))


def actions_only(steps: Iterable[Step]) -> list[Action]:
    return [s for s in steps if isinstance(s, Action)]


# --- performances -------------------------------------------------------------

def parse_performances(text: str, path: Optional[str] = None) -> tuple[dict, dict]:
    """``[human]`` and ``[autonomous]`` tables of id -> performance."""
    r = _Reader(text, path)
    r.keys(r.doc, ["format_version", "human", "autonomous"], None)
    r.version()
    out = []
    for side in ("human", "autonomous"):
        table = r.table(r.doc, side)
        out.append({r.cap_id(k, side): r.typed(v, int, side, k) for k, v in table.items()})
    return out[0], out[1]


def load_performances(path: Union[str, Path]) -> tuple[dict, dict]:
    return parse_performances(_read_text(path), str(path))


# --- scenarios ----------------------------------------------------------------

@dataclass(frozen=True)
class Scenario:
    human: AgentProfile
    autonomous: AgentProfile
    team: TeamConfig
    steps: tuple[Step, ...]
    config: SimulationConfig


def parse_scenario(text: str, path: Optional[str] = None) -> Scenario:
    """Scenario files reference profile/team/task files relative to themselves."""
    r = _Reader(text, path)
    doc = r.doc
    r.keys(doc, ["format_version", "human", "autonomous", "team", "tasks", "actions", "simulation"], None)
    r.version()
    base = Path(path).parent if path else Path.cwd()
    human = load_profile(base / r.require(doc, "human", str, None))
    auto = load_profile(base / r.require(doc, "autonomous", str, None))
    team = load_team(base / doc["team"]) if "team" in doc else TeamConfig()
    if "tasks" in doc and "actions" in doc:
        r.fail("give either 'tasks' or inline [[actions]], not both", None, "tasks")
    if "tasks" in doc:
        steps = load_tasks(base / r.typed(doc["tasks"], str, None, "tasks"))
    else:
        steps = _parse_steps(r, doc.get("actions", []))

    sim = r.table(doc, "simulation")
    fields = ["seed", "max_rounds", "perception_noise", "stamina_drain_per_action", "stamina_recovery_per_break"]
    r.keys(sim, fields, "simulation")
    kwargs: dict[str, Any] = {}
    for key in ("seed", "max_rounds"):
        if key in sim:
            kwargs[key] = r.typed(sim[key], int, "simulation", key)
    for key in fields[2:]:
        if key in sim:
            kwargs[key] = _fraction(r, sim[key], "simulation", key)
    try:
        config = SimulationConfig(**kwargs)
    except ValueError as exc:
        r.fail(str(exc), "simulation")
    return Scenario(human, auto, team, tuple(steps), config)


def load_scenario(path: Union[str, Path]) -> Scenario:
    return parse_scenario(_read_text(path), str(path))


def serialize_scenario(
    scenario: Scenario,
    human: str = "human.toml",
    autonomous: str = "autonomous.toml",
    team: Optional[str] = "team.toml",
) -> str:
    """Scenario document with inline actions; profiles and team stay in the
    referenced files, which the caller writes alongside."""
    cfg = scenario.config
    doc: dict[str, Any] = {"format_version": FORMAT_VERSION, "human": human, "autonomous": autonomous}
    if team is not None:
        doc["team"] = team
    doc["simulation"] = {
        "seed": cfg.seed,
        "max_rounds": cfg.max_rounds,
        "perception_noise": _num(cfg.perception_noise),
        "stamina_drain_per_action": _num(cfg.stamina_drain_per_action),
        "stamina_recovery_per_break": _num(cfg.stamina_recovery_per_break),
    }
    doc["actions"] = _steps_doc(scenario.steps)
    return tomli_w.dumps(doc)


def save_scenario(scenario: Scenario, directory: Union[str, Path], name: str = "scenario.toml") -> Path:
    """Write the scenario and the profile/team files it references."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "human.toml").write_text(serialize_profile(scenario.human), encoding="utf-8")
    (directory / "autonomous.toml").write_text(serialize_profile(scenario.autonomous), encoding="utf-8")
    (directory / "team.toml").write_text(serialize_team(scenario.team), encoding="utf-8")
    path = directory / name
    path.write_text(serialize_scenario(scenario), encoding="utf-8")
    return path


# --- semantic validation ------------------------------------------------------

def validate_team(team: TeamConfig, taxonomy: Taxonomy) -> list[Violation]:
    out = []
    for cid in sorted(team.spec.kinds):
        if cid not in taxonomy:
            out.append(Violation(str(cid), "unknown capability"))
    for pair in team.pairs:
        for cid in (pair.degraded, pair.compensator):
            if cid not in taxonomy:
                out.append(Violation(str(cid), f"unknown capability in pair {pair}"))
    return out


def validate_steps(steps: Iterable[Step], taxonomy: Taxonomy, scale: QuantScale) -> list[Violation]:
    out = []
    for step in actions_only(steps):
        for cid, value in sorted(step.requirements.items()):
            if cid not in taxonomy:
                out.append(Violation(str(cid), f"unknown capability in action {step.action_id!r}"))
            if not scale.contains(value):
                out.append(
                    Violation(str(cid), f"value out of range in action {step.action_id!r}: {value} not in [0, {scale.q_max}]")
                )
    return out
