"""Versioned instance/solution/plan/scenario documents and the results CSV.

Documents are canonical JSON (sorted keys, two-space indent, trailing
newline) so emitted files are diff-stable and byte-identical across runs.
Rationals serialize as "p/q" strings to avoid precision loss.  Parsers
reject unknown fields and report the path of the offending one.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .errors import InputValidationError
from .generate import AttributeRule, AttributeScenario, ScenarioAgent, ScenarioResource
from .instance import (
    AgentSpec,
    MultiRoundSolution,
    ResourceSpec,
    RestrictionEdge,
    RestrictionsGraph,
)

INSTANCE_VERSION = "mrm-instance/1"
SOLUTION_VERSION = "mrm-solution/1"
PLAN_VERSION = "mrm-plan/1"
SCENARIO_VERSION = "mrm-scenario/1"


def _canonical(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _require(doc: dict, path: str, required: set[str], optional: set[str] = frozenset()):
    if not isinstance(doc, dict):
        raise InputValidationError(f"{path}: expected an object")
    unknown = set(doc) - required - set(optional)
    if unknown:
        raise InputValidationError(f"{path}.{sorted(unknown)[0]}: unknown field")
    missing = required - set(doc)
    if missing:
        raise InputValidationError(f"{path}.{sorted(missing)[0]}: missing field")


def _fraction(value, path: str) -> Fraction:
    if isinstance(value, bool):
        raise InputValidationError(f"{path}: expected a rational, got a bool")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise InputValidationError(f"{path}: not a valid rational: {value!r}")
    raise InputValidationError(f"{path}: expected int or 'p/q' string")


def _int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputValidationError(f"{path}: expected an integer")
    return value


def _str(value, path: str) -> str:
    if not isinstance(value, str):
        raise InputValidationError(f"{path}: expected a string")
    return value


def write_instance(g: RestrictionsGraph) -> str:
    doc = {
        "version": INSTANCE_VERSION,
        "k": g.k,
        "agents": [
            {
                "id": a.id,
                "rho": a.rho,
                "allowed_rounds": sorted(a.allowed_rounds),
                "budget": str(a.budget),
                "labels": {lab: str(cost) for lab, cost in sorted(a.labels.items())},
            }
            for a in g.agents
        ],
        "resources": [
            {"id": r.id, "capacity": r.capacity} for r in g.resources
        ],
        "edges": [
            {
                "agent": e.agent,
                "resource": e.resource,
                "restrictions": sorted(e.restrictions),
            }
            for e in g.edges
        ],
    }
    return _canonical(doc)


def parse_instance(text: str) -> RestrictionsGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputValidationError(f"invalid JSON: {exc}")
    _require(doc, "$", {"version", "k", "agents", "resources", "edges"})
    if doc["version"] != INSTANCE_VERSION:
        raise InputValidationError(
            f"$.version: expected {INSTANCE_VERSION!r}, got {doc['version']!r}"
        )
    k = _int(doc["k"], "$.k")
    agents = []
    for i, entry in enumerate(doc["agents"]):
        path = f"$.agents[{i}]"
        _require(entry, path, {"id", "rho", "allowed_rounds"}, {"budget", "labels"})
        rounds = entry["allowed_rounds"]
        if not isinstance(rounds, list):
            raise InputValidationError(f"{path}.allowed_rounds: expected a list")
        labels = entry.get("labels", {})
        if not isinstance(labels, dict):
            raise InputValidationError(f"{path}.labels: expected an object")
        try:
            agents.append(
                AgentSpec(
                    id=_str(entry["id"], f"{path}.id"),
                    rho=_int(entry["rho"], f"{path}.rho"),
                    allowed_rounds=frozenset(
                        _int(t, f"{path}.allowed_rounds[{j}]")
                        for j, t in enumerate(rounds)
                    ),
                    budget=_fraction(entry.get("budget", 0), f"{path}.budget"),
                    labels={
                        _str(lab, f"{path}.labels"): _fraction(
                            cost, f"{path}.labels.{lab}"
                        )
                        for lab, cost in labels.items()
                    },
                )
            )
        except InputValidationError as exc:
            raise InputValidationError(f"{path}: {exc}") from None
    resources = []
    for j, entry in enumerate(doc["resources"]):
        path = f"$.resources[{j}]"
        _require(entry, path, {"id"}, {"capacity"})
        resources.append(
            ResourceSpec(
                id=_str(entry["id"], f"{path}.id"),
                capacity=_int(entry.get("capacity", 1), f"{path}.capacity"),
            )
        )
    edges = []
    for j, entry in enumerate(doc["edges"]):
        path = f"$.edges[{j}]"
        _require(entry, path, {"agent", "resource"}, {"restrictions"})
        restrictions = entry.get("restrictions", [])
        if not isinstance(restrictions, list):
            raise InputValidationError(f"{path}.restrictions: expected a list")
        edges.append(
            RestrictionEdge(
                agent=_str(entry["agent"], f"{path}.agent"),
                resource=_str(entry["resource"], f"{path}.resource"),
                restrictions=frozenset(
                    _str(lab, f"{path}.restrictions[{idx}]")
                    for idx, lab in enumerate(restrictions)
                ),
            )
        )
    try:
        return RestrictionsGraph(
            agents=tuple(agents), resources=tuple(resources), k=k,
            edges=tuple(edges),
        )
    except InputValidationError as exc:
        raise InputValidationError(f"$: {exc}") from None


def write_solution(s: MultiRoundSolution, extra: Optional[dict] = None) -> str:
    doc = {
        "version": SOLUTION_VERSION,
        "rounds": [sorted([a, r] for a, r in rnd) for rnd in s.rounds],
        "gamma": {aid: n for aid, n in sorted(s.gamma.items())},
    }
    if extra:
        doc.update(extra)
    return _canonical(doc)


def parse_solution(text: str) -> MultiRoundSolution:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputValidationError(f"invalid JSON: {exc}")
    _require(
        doc, "$", {"version", "rounds", "gamma"},
        {"objective", "value", "satisfied"},
    )
    if doc["version"] != SOLUTION_VERSION:
        raise InputValidationError(
            f"$.version: expected {SOLUTION_VERSION!r}, got {doc['version']!r}"
        )
    rounds = []
    for t, rnd in enumerate(doc["rounds"]):
        path = f"$.rounds[{t}]"
        if not isinstance(rnd, list):
            raise InputValidationError(f"{path}: expected a list")
        pairs = []
        for idx, pair in enumerate(rnd):
            if not (isinstance(pair, list) and len(pair) == 2):
                raise InputValidationError(
                    f"{path}[{idx}]: expected an [agent, resource] pair"
                )
            pairs.append((_str(pair[0], path), _str(pair[1], path)))
        rounds.append(pairs)
    gamma = doc["gamma"]
    if not isinstance(gamma, dict):
        raise InputValidationError("$.gamma: expected an object")
    solution = MultiRoundSolution.from_rounds(rounds, gamma.keys())
    for aid, n in gamma.items():
        if solution.gamma.get(aid, 0) != _int(n, f"$.gamma.{aid}"):
            raise InputValidationError(
                f"$.gamma.{aid}: stated {n}, rounds imply "
                f"{solution.gamma.get(aid, 0)}"
            )
    return solution


def write_plan(
    removals: Mapping[str, frozenset[str]],
    costs: Mapping[str, Fraction],
    satisfied: int,
    solution: MultiRoundSolution,
) -> str:
    doc = {
        "version": PLAN_VERSION,
        "removals": {aid: sorted(labels) for aid, labels in sorted(removals.items())},
        "costs": {aid: str(cost) for aid, cost in sorted(costs.items())},
        "satisfied": satisfied,
        "solution": json.loads(write_solution(solution)),
    }
    return _canonical(doc)


def parse_plan(text: str) -> tuple[dict[str, frozenset[str]], MultiRoundSolution, int]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputValidationError(f"invalid JSON: {exc}")
    _require(doc, "$", {"version", "removals", "costs", "satisfied", "solution"})
    if doc["version"] != PLAN_VERSION:
        raise InputValidationError(
            f"$.version: expected {PLAN_VERSION!r}, got {doc['version']!r}"
        )
    removals = {
        _str(aid, "$.removals"): frozenset(
            _str(lab, f"$.removals.{aid}") for lab in labels
        )
        for aid, labels in doc["removals"].items()
    }
    solution = parse_solution(_canonical(doc["solution"]))
    return removals, solution, _int(doc["satisfied"], "$.satisfied")


def parse_scenario(text: str) -> AttributeScenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputValidationError(f"invalid JSON: {exc}")
    _require(
        doc, "$", {"version", "k", "attributes", "resources", "agents"},
        {"round_prob"},
    )
    if doc["version"] != SCENARIO_VERSION:
        raise InputValidationError(
            f"$.version: expected {SCENARIO_VERSION!r}, got {doc['version']!r}"
        )
    rules = {}
    for name, entry in doc["attributes"].items():
        path = f"$.attributes.{name}"
        _require(entry, path, {"kind"}, {"step"})
        rules[name] = AttributeRule(
            kind=_str(entry["kind"], f"{path}.kind"),
            step=_fraction(entry.get("step", 1), f"{path}.step"),
        )
    resources = []
    for j, entry in enumerate(doc["resources"]):
        path = f"$.resources[{j}]"
        _require(entry, path, {"id", "values"}, {"capacity"})
        resources.append(
            ScenarioResource(
                id=_str(entry["id"], f"{path}.id"),
                values=dict(entry["values"]),
                capacity=_int(entry.get("capacity", 1), f"{path}.capacity"),
            )
        )
    agents = []
    for i, entry in enumerate(doc["agents"]):
        path = f"$.agents[{i}]"
        _require(entry, path, {"id", "rho", "prefs"}, {"budget", "allowed_rounds"})
        rounds = entry.get("allowed_rounds")
        agents.append(
            ScenarioAgent(
                id=_str(entry["id"], f"{path}.id"),
                rho=_int(entry["rho"], f"{path}.rho"),
                budget=_fraction(entry.get("budget", 0), f"{path}.budget"),
                prefs=dict(entry["prefs"]),
                allowed_rounds=(
                    frozenset(_int(t, f"{path}.allowed_rounds") for t in rounds)
                    if rounds is not None
                    else None
                ),
            )
        )
    return AttributeScenario(
        k=_int(doc["k"], "$.k"),
        rules=rules,
        resources=tuple(resources),
        agents=tuple(agents),
        round_prob=float(doc.get("round_prob", 0.5)),
    )


@dataclass(frozen=True)
class ResultRow:
    instance: str
    objective: str
    solver: str
    value: Fraction | int | str
    runtime_ms: int
    seed: int


CSV_HEADER = ("instance", "objective", "solver", "value", "runtime_ms", "seed")


def emit_results_csv(rows: Iterable[ResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in sorted(
        rows, key=lambda r: (r.instance, r.objective, r.solver, r.seed)
    ):
        writer.writerow(
            [row.instance, row.objective, row.solver, str(row.value),
             row.runtime_ms, row.seed]
        )
    return buf.getvalue()
