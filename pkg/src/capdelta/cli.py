"""Command-line interface.

Exit codes: 0 success, 1 validation violations, 2 parse or I/O failure,
3 teaming failure (control deficit, uncompensatable plan, dissonance).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .aggregation import AggregationKind
from .arbitration import run_sequence
from .compensation import CompensationStatus, compensate, outcome_to_dict, plan_report
from .core import BUILTIN_TAXONOMY, QuantScale, Violation, check_performance, validate_profile
from .crsolver import ControlDistribution, SelectionPolicy, solve_distribution
from .formats import (
    FORMAT_VERSION,
    FormatError,
    TeamConfig,
    actions_only,
    load_performances,
    load_profile,
    load_scenario,
    load_tasks,
    load_team,
    locate,
    validate_steps,
    validate_team,
)
from .render import render_cr_diagram
from .report import build_delta_report, render_plan_text, render_text

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_TEAMING = 3

POLICIES = [p.value for p in SelectionPolicy]
KINDS = [k.value for k in AggregationKind]


class _Invalid(Exception):
    def __init__(self, messages: list[str]):
        super().__init__("\n".join(messages))
        self.messages = messages


def _located(path: str, text: str, violations: list[Violation], section: Optional[str]) -> list[str]:
    out = []
    for v in violations:
        if v.capability is None:
            line = locate(text, "resources", "mental_stamina")
        else:
            line = locate(text, section, v.capability) or locate(text, None, v.capability)
        where = f"{path}:{line}" if line else path
        out.append(f"{where}: {v}")
    return out


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read file: {exc.strerror or exc}", path) from None


def _load_profile_checked(path: str):
    profile = load_profile(path)
    violations = validate_profile(profile, BUILTIN_TAXONOMY)
    return profile, _located(path, _read(path), violations, "capacities")


def _load_team_checked(path: Optional[str]):
    if path is None:
        return TeamConfig(), []
    team = load_team(path)
    return team, _located(path, _read(path), validate_team(team, BUILTIN_TAXONOMY), "aggregation")


def _load_tasks_checked(path: str, scale: QuantScale):
    steps = load_tasks(path)
    return steps, _located(path, _read(path), validate_steps(steps, BUILTIN_TAXONOMY, scale), None)


def _with_policy(team: TeamConfig, policy: Optional[str]) -> TeamConfig:
    if policy is None:
        return team
    return TeamConfig(team.spec, team.pairs, SelectionPolicy(policy))


def _load_team_inputs(args):
    """Profiles, team config and tasks, validated; raises _Invalid on violations."""
    problems: list[str] = []
    human, p = _load_profile_checked(args.human)
    problems += p
    auto, p = _load_profile_checked(args.auto)
    problems += p
    team, p = _load_team_checked(args.team)
    problems += p
    steps, p = _load_tasks_checked(args.tasks, team.spec.scale)
    problems += p
    if problems:
        raise _Invalid(problems)
    return human, auto, _with_policy(team, args.policy), steps


def _emit(data, fmt: str, text: str) -> None:
    if fmt == "machine":
        sys.stdout.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# --- commands -----------------------------------------------------------------

def cmd_validate(args) -> int:
    problems: list[str] = []
    for path in args.profiles:
        problems += _load_profile_checked(path)[1]
    team, p = _load_team_checked(args.team)
    problems += p
    if args.tasks:
        problems += _load_tasks_checked(args.tasks, team.spec.scale)[1]
    if problems:
        raise _Invalid(problems)
    print("ok")
    return EXIT_OK


def cmd_delta(args) -> int:
    human, auto, team, steps = _load_team_inputs(args)
    h_perf = a_perf = None
    if args.performances:
        h_perf, a_perf = load_performances(args.performances)
        problems = check_performance(h_perf, human) + check_performance(a_perf, auto)
        if problems:
            raise _Invalid([f"{args.performances}: {v}" for v in problems])
    report = build_delta_report(human, auto, actions_only(steps), team, h_perf, a_perf, jobs=args.jobs)
    if args.format == "machine":
        sys.stdout.write(report.dumps())
    else:
        sys.stdout.write(render_text(report))
    return EXIT_OK


def _grid_args(args) -> QuantScale:
    scale = QuantScale(args.q_max)
    problems = []
    for name in ("requirement", "cap_auto", "cap_human"):
        value = getattr(args, name)
        if not scale.contains(value):
            problems.append(f"--{name.replace('_', '-')} {value} outside [0, {scale.q_max}]")
    if problems:
        raise _Invalid(problems)
    return scale


def cmd_solve(args) -> int:
    scale = _grid_args(args)
    kind = AggregationKind(args.kind)
    policy = SelectionPolicy(args.policy or SelectionPolicy.MAX_HUMAN.value)
    outcome = solve_distribution(args.requirement, kind, args.cap_auto, args.cap_human, policy, scale.q_max)
    data = {"format_version": FORMAT_VERSION, "kind": "solve_outcome", "policy": policy.value, **outcome_to_dict(outcome)}
    if outcome.is_deficit:
        text = f"control deficit: best achievable {outcome.deficit.best_achievable} < requirement {args.requirement}"
    else:
        text = f"chosen {outcome.chosen} delta={outcome.delta} space={outcome.label.value}"
    _emit(data, args.format, text)
    return EXIT_TEAMING if outcome.is_deficit else EXIT_OK


_COMPENSATE_OK = (CompensationStatus.NO_OP_ALL_FULFILLED, CompensationStatus.COMPENSATED)


def cmd_compensate(args) -> int:
    human, auto, team, steps = _load_team_inputs(args)
    plans = [
        compensate(a, human, auto, team.spec, team.pairs, team.policy, BUILTIN_TAXONOMY) for a in actions_only(steps)
    ]
    reports = [plan_report(p) for p in plans]
    data = {"format_version": FORMAT_VERSION, "kind": "compensation_report", "plans": reports}
    _emit(data, args.format, "\n\n".join(render_plan_text(r) for r in reports) or "no actions")
    failed = any(
        p.status not in _COMPENSATE_OK or any(o.is_deficit for o in p.distributions.values()) for p in plans
    )
    return EXIT_TEAMING if failed else EXIT_OK


def cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario)
    problems = [f"{args.scenario}: {v}" for v in validate_profile(scenario.human) + validate_profile(scenario.autonomous)]
    problems += [f"{args.scenario}: {v}" for v in validate_team(scenario.team, BUILTIN_TAXONOMY)]
    problems += [f"{args.scenario}: {v}" for v in validate_steps(scenario.steps, BUILTIN_TAXONOMY, scenario.team.spec.scale)]
    if problems:
        raise _Invalid(problems)
    config = scenario.config
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    team = _with_policy(scenario.team, args.policy)
    result = run_sequence(scenario.human, scenario.autonomous, scenario.steps, team.spec, team.pairs, config, team.policy)
    if args.format == "machine":
        for record in result.records:
            sys.stdout.write(json.dumps(record, sort_keys=True) + "\n")
    else:
        for r in result.records:
            if r["kind"] == "break":
                print(f"[{r['index']}] break: stamina {float(Fraction(r['stamina'])):.4f}")
                continue
            line = f"[{r['index']}] {r['action_id']}: {r['status']} after {r['rounds']} round(s), stamina {float(Fraction(r['stamina'])):.4f}"
            if r["deficit"]:
                line += ", deficit"
            if r["compensation"]:
                line += f", compensation {r['compensation']['status']}"
            print(line + ("" if r["resolved"] else "  UNRESOLVED"))
    return EXIT_TEAMING if result.failures else EXIT_OK


def _point(text: str) -> ControlDistribution:
    try:
        a, h = (int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A,H got {text!r}") from None
    return ControlDistribution(a, h)


def cmd_diagram(args) -> int:
    scale = _grid_args(args)
    kind = AggregationKind(args.kind)
    chosen = args.chosen
    if chosen is None and not args.no_chosen:
        policy = SelectionPolicy(args.policy or SelectionPolicy.MAX_HUMAN.value)
        chosen = solve_distribution(args.requirement, kind, args.cap_auto, args.cap_human, policy, scale.q_max).chosen
    sys.stdout.write(render_cr_diagram(args.requirement, kind, args.cap_auto, args.cap_human, chosen, args.format))
    return EXIT_OK


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="capdelta", description="Capability deltas for human-autonomy teams.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--team", help="team config file (TOML)")
    common.add_argument("--policy", choices=POLICIES, help="distribution selection policy (default max-human)")
    common.add_argument("--format", choices=["text", "machine"], default="text")

    team_inputs = argparse.ArgumentParser(add_help=False)
    team_inputs.add_argument("--human", required=True, help="human profile file")
    team_inputs.add_argument("--auto", required=True, help="autonomous agent profile file")
    team_inputs.add_argument("--tasks", required=True, help="task file with the action sequence")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--requirement", "-r", type=int, required=True)
    grid.add_argument("--kind", choices=KINDS, default="non_summative")
    grid.add_argument("--cap-auto", type=int, required=True)
    grid.add_argument("--cap-human", type=int, required=True)
    grid.add_argument("--q-max", type=int, default=5)

    p = sub.add_parser("validate", parents=[common], help="check profile/team/task files")
    p.add_argument("profiles", nargs="*", help="profile files")
    p.add_argument("--tasks")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("delta", parents=[common, team_inputs], help="capability delta report")
    p.add_argument("--performances", help="performance file; defaults to capacities")
    p.add_argument("--jobs", type=int, default=1, help="evaluate actions concurrently")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("solve", parents=[common, grid], help="choose a control distribution")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("compensate", parents=[common, team_inputs], help="delta compensation plans")
    p.set_defaults(func=cmd_compensate)

    p = sub.add_parser("simulate", parents=[common], help="run an arbitration scenario")
    p.add_argument("scenario")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("diagram", parents=[grid], help="render a CR diagram")
    p.add_argument("--policy", choices=POLICIES)
    p.add_argument("--format", choices=["ascii", "svg"], default="ascii")
    p.add_argument("--chosen", type=_point, help="mark A,H instead of the solver's choice")
    p.add_argument("--no-chosen", action="store_true")
    p.set_defaults(func=cmd_diagram)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except _Invalid as exc:
        for message in exc.messages:
            print(f"invalid: {message}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
