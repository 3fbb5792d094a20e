"""Integer-program emission for budgeted advice generation.

The model maximizes the number of satisfied agents over label removals
(w variables), induced compatibility edges (z), per-round assignments (a),
matched-round counters (eta) and satisfaction indicators (s).  No solver is
invoked here; the model is emitted as deterministic LP-format text.  Two
brute-force evaluators exist for verification at tiny scale.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Mapping

from .errors import CapExceededError, InputValidationError, InternalConsistencyError
from .instance import RestrictionsGraph


@dataclass(frozen=True)
class LinearConstraint:
    name: str
    terms: tuple[tuple[int, str], ...]
    sense: str  # "<=", ">=" or "="
    rhs: int


@dataclass(frozen=True)
class IlpModel:
    objective: tuple[tuple[int, str], ...]  # maximized
    constraints: tuple[LinearConstraint, ...]
    binaries: tuple[str, ...]
    generals: tuple[str, ...]
    bounds: Mapping[str, tuple[int, int]]

    def count(self, prefix: str) -> int:
        names = set(self.binaries) | set(self.generals)
        return sum(1 for v in names if v.startswith(prefix))


def _scaled(coeffs: list[tuple[Fraction, str]], rhs: Fraction):
    scale = lcm(*(c.denominator for c, _ in coeffs), rhs.denominator)
    return (
        tuple((int(c * scale), v) for c, v in coeffs),
        int(rhs * scale),
    )


def build_ilp(g: RestrictionsGraph) -> IlpModel:
    """Emit the satisfied-agents maximization model for a restrictions graph.

    z and a variables exist for every (agent, resource) pair; pairs without a
    restrictions-graph edge get an explicit z = 0 constraint instead of a
    synthetic unaffordable label cost.
    """
    agents = g.agents
    resources = g.resources
    k = g.k
    ai = {a.id: i for i, a in enumerate(agents, 1)}
    rj = {r.id: j for j, r in enumerate(resources, 1)}
    labels = {a.id: sorted(a.labels) for a in agents}
    li = {
        a.id: {lab: t for t, lab in enumerate(labels[a.id], 1)} for a in agents
    }
    edge_map = {(e.agent, e.resource): e for e in g.edges}

    binaries: list[str] = []
    generals: list[str] = []
    bounds: dict[str, tuple[int, int]] = {}
    cons: list[LinearConstraint] = []

    def w(aid: str, lab: str) -> str:
        return f"w_{ai[aid]}_{li[aid][lab]}"

    def z(aid: str, rid: str) -> str:
        return f"z_{ai[aid]}_{rj[rid]}"

    def a_(aid: str, rid: str, r: int) -> str:
        return f"a_{ai[aid]}_{rj[rid]}_{r}"

    for a in agents:
        for lab in labels[a.id]:
            binaries.append(w(a.id, lab))
    for a in agents:
        for r in resources:
            binaries.append(z(a.id, r.id))
    for a in agents:
        for r in resources:
            for t in range(1, k + 1):
                binaries.append(a_(a.id, r.id, t))
    for a in agents:
        generals.append(f"eta_{ai[a.id]}")
        bounds[f"eta_{ai[a.id]}"] = (0, k)
    for a in agents:
        binaries.append(f"s_{ai[a.id]}")

    for a in agents:
        if labels[a.id]:
            terms, rhs = _scaled(
                [(a.labels[lab], w(a.id, lab)) for lab in labels[a.id]],
                a.budget,
            )
            cons.append(LinearConstraint(f"budget_{ai[a.id]}", terms, "<=", rhs))

    for a in agents:
        for r in resources:
            edge = edge_map.get((a.id, r.id))
            zvar = z(a.id, r.id)
            if edge is None:
                cons.append(
                    LinearConstraint(
                        f"miss_{ai[a.id]}_{rj[r.id]}", ((1, zvar),), "=", 0
                    )
                )
            elif not edge.restrictions:
                cons.append(
                    LinearConstraint(
                        f"free_{ai[a.id]}_{rj[r.id]}", ((1, zvar),), "=", 1
                    )
                )
            else:
                gamma = sorted(edge.restrictions)
                for lab in gamma:
                    cons.append(
                        LinearConstraint(
                            f"lnkup_{ai[a.id]}_{rj[r.id]}_{li[a.id][lab]}",
                            ((1, zvar), (-1, w(a.id, lab))),
                            "<=",
                            0,
                        )
                    )
                cons.append(
                    LinearConstraint(
                        f"lnkdn_{ai[a.id]}_{rj[r.id]}",
                        tuple((1, w(a.id, lab)) for lab in gamma)
                        + ((-1, zvar),),
                        "<=",
                        len(gamma) - 1,
                    )
                )

    for a in agents:
        for r in resources:
            for t in range(1, k + 1):
                cons.append(
                    LinearConstraint(
                        f"use_{ai[a.id]}_{rj[r.id]}_{t}",
                        ((1, a_(a.id, r.id, t)), (-1, z(a.id, r.id))),
                        "<=",
                        0,
                    )
                )

    for a in agents:
        cons.append(
            LinearConstraint(
                f"rounds_{ai[a.id]}",
                tuple(
                    (1, a_(a.id, r.id, t))
                    for t in range(1, k + 1)
                    for r in resources
                )
                + ((-1, f"eta_{ai[a.id]}"),),
                "=",
                0,
            )
        )

    for a in agents:
        for t in range(1, k + 1):
            cons.append(
                LinearConstraint(
                    f"adeg_{ai[a.id]}_{t}",
                    tuple((1, a_(a.id, r.id, t)) for r in resources),
                    "<=",
                    1,
                )
            )

    for r in resources:
        for t in range(1, k + 1):
            cons.append(
                LinearConstraint(
                    f"rdeg_{rj[r.id]}_{t}",
                    tuple((1, a_(a.id, r.id, t)) for a in agents),
                    "<=",
                    r.capacity,
                )
            )

    for a in agents:
        for t in range(1, k + 1):
            if t not in a.allowed_rounds:
                for r in resources:
                    cons.append(
                        LinearConstraint(
                            f"kzero_{ai[a.id]}_{rj[r.id]}_{t}",
                            ((1, a_(a.id, r.id, t)),),
                            "=",
                            0,
                        )
                    )

    for a in agents:
        i = ai[a.id]
        cons.append(
            LinearConstraint(
                f"salo_{i}",
                ((1, f"eta_{i}"), (-k, f"s_{i}")),
                "<=",
                a.rho - 1,
            )
        )
        cons.append(
            LinearConstraint(
                f"sahi_{i}",
                ((k, f"s_{i}"), (-1, f"eta_{i}")),
                "<=",
                k - a.rho,
            )
        )

    objective = tuple((1, f"s_{ai[a.id]}") for a in agents)
    return IlpModel(
        objective=objective,
        constraints=tuple(cons),
        binaries=tuple(binaries),
        generals=tuple(generals),
        bounds=bounds,
    )


def _format_terms(terms: tuple[tuple[int, str], ...]) -> str:
    parts = []
    for c, v in terms:
        sign = "-" if c < 0 else "+"
        parts.append(f"{sign} {abs(c)} {v}")
    return " ".join(parts)


def emit_lp(m: IlpModel) -> str:
    """Deterministic LP-format text; byte-identical for identical models."""
    lines = ["Maximize"]
    lines.append(f" obj: {_format_terms(m.objective) if m.objective else '0'}")
    lines.append("Subject To")
    for c in m.constraints:
        op = {"<=": "<=", ">=": ">=", "=": "="}[c.sense]
        lines.append(f" {c.name}: {_format_terms(c.terms)} {op} {c.rhs}")
    lines.append("Bounds")
    for v in m.generals:
        lo, hi = m.bounds[v]
        lines.append(f" {lo} <= {v} <= {hi}")
    lines.append("Binaries")
    for v in m.binaries:
        lines.append(f" {v}")
    lines.append("Generals")
    for v in m.generals:
        lines.append(f" {v}")
    lines.append("End")
    return "\n".join(lines) + "\n"


def lp_counts(text: str) -> dict[str, int]:
    """Re-parse emitted LP text; used to round-trip variable/constraint counts."""
    section = None
    counts = {"constraints": 0, "binaries": 0, "generals": 0, "objective_terms": 0}
    for raw in text.splitlines():
        line = raw.strip()
        if line in ("Maximize", "Subject To", "Bounds", "Binaries", "Generals", "End"):
            section = line
            continue
        if not line:
            continue
        if section == "Maximize" and line.startswith("obj:"):
            body = line[len("obj:"):].strip()
            counts["objective_terms"] = 0 if body == "0" else body.count("+") + body.count("-")
        elif section == "Subject To":
            counts["constraints"] += 1
        elif section == "Binaries":
            counts["binaries"] += 1
        elif section == "Generals":
            counts["generals"] += 1
    return counts


def _check_assignment(m: IlpModel, values: Mapping[str, int]) -> bool:
    for c in m.constraints:
        total = sum(coef * values[v] for coef, v in c.terms)
        if c.sense == "<=" and not total <= c.rhs:
            return False
        if c.sense == ">=" and not total >= c.rhs:
            return False
        if c.sense == "=" and total != c.rhs:
            return False
    for v in m.generals:
        lo, hi = m.bounds[v]
        if not lo <= values[v] <= hi:
            return False
    return True


def enumerate_model_bruteforce(m: IlpModel, max_binaries: int = 22) -> int:
    """Literal optimum by trying every assignment of the binary variables.

    eta variables are derived from their defining equality rows.  Only
    sensible for micro models; guarded by ``max_binaries``.
    """
    if len(m.binaries) > max_binaries:
        raise CapExceededError(
            f"{len(m.binaries)} binaries exceed the generic enumeration cap"
        )
    eta_rows = {
        c.name: c for c in m.constraints if c.name.startswith("rounds_")
    }
    best = None
    for bits in itertools.product((0, 1), repeat=len(m.binaries)):
        values = dict(zip(m.binaries, bits))
        for name, row in eta_rows.items():
            total = sum(
                coef * values[v]
                for coef, v in row.terms
                if not v.startswith("eta_")
            )
            values[row.terms[-1][1]] = total
        for v in m.generals:
            values.setdefault(v, 0)
        if _check_assignment(m, values):
            score = sum(coef * values[v] for coef, v in m.objective)
            if best is None or score > best:
                best = score
    if best is None:
        raise InternalConsistencyError("model has no feasible assignment")
    return best


def bruteforce_optimum(g: RestrictionsGraph, cap: int = 5_000_000) -> int:
    """Exhaustively solve the model semantics layer by layer.

    Enumerates label-removal vectors within budget rows, propagates the
    forced z values, exhausts the round-assignment layer by backtracking,
    and finally re-verifies the winning assignment against every row of the
    emitted model.
    """
    model = build_ilp(g)
    agents = g.agents
    resources = g.resources
    k = g.k
    ai = {a.id: i for i, a in enumerate(agents, 1)}
    rj = {r.id: j for j, r in enumerate(resources, 1)}
    labels = {a.id: sorted(a.labels) for a in agents}
    edge_map = {(e.agent, e.resource): e for e in g.edges}
    steps = 0

    per_agent_removals: list[list[frozenset[str]]] = []
    for a in agents:
        options = []
        for size in range(len(labels[a.id]) + 1):
            for combo in itertools.combinations(labels[a.id], size):
                if sum((a.labels[l] for l in combo), Fraction(0)) <= a.budget:
                    options.append(frozenset(combo))
        per_agent_removals.append(options)

    cells = [
        (t, a.id) for t in range(1, k + 1) for a in agents if t in a.allowed_rounds
    ]
    cache: dict[frozenset, int] = {}

    def layer_best(allowed: frozenset[tuple[str, str]]) -> int:
        nonlocal steps
        key = allowed
        if key in cache:
            return cache[key]
        nbrs = {
            a.id: [r.id for r in resources if (a.id, r.id) in allowed]
            for a in agents
        }
        counts = {a.id: 0 for a in agents}
        load: dict[tuple[int, str], int] = {}
        best = 0

        def walk(i: int):
            nonlocal best, steps
            steps += 1
            if steps > cap:
                raise CapExceededError(f"ILP brute force exceeded {cap} steps")
            if i == len(cells):
                score = sum(1 for a in agents if counts[a.id] >= a.rho)
                best = max(best, score)
                return
            t, aid = cells[i]
            walk(i + 1)
            for rid in nbrs[aid]:
                if load.get((t, rid), 0) < g.resource(rid).capacity:
                    load[(t, rid)] = load.get((t, rid), 0) + 1
                    counts[aid] += 1
                    walk(i + 1)
                    counts[aid] -= 1
                    load[(t, rid)] -= 1

        walk(0)
        cache[key] = best
        return best

    best_overall = -1
    best_state = None
    for combo in itertools.product(*per_agent_removals):
        removed = {a.id: chosen for a, chosen in zip(agents, combo)}
        allowed = frozenset(
            (a.id, r.id)
            for a in agents
            for r in resources
            if (a.id, r.id) in edge_map
            and edge_map[(a.id, r.id)].restrictions <= removed[a.id]
        )
        score = layer_best(allowed)
        if score > best_overall:
            best_overall = score
            best_state = (removed, allowed)
        if best_overall == len(agents):
            break

    # Reconstruct one optimal full assignment and verify it against the model.
    removed, allowed = best_state
    values = {v: 0 for v in model.binaries}
    for v in model.generals:
        values[v] = 0
    for a in agents:
        for t_idx, lab in enumerate(labels[a.id], 1):
            values[f"w_{ai[a.id]}_{t_idx}"] = int(lab in removed[a.id])
    for a in agents:
        for r in resources:
            values[f"z_{ai[a.id]}_{rj[r.id]}"] = int((a.id, r.id) in allowed)
    assignment = _layer_witness(g, allowed, cells, best_overall)
    for (t, aid), rid in assignment.items():
        values[f"a_{ai[aid]}_{rj[rid]}_{t}"] = 1
    for a in agents:
        eta = sum(1 for (t, aid) in assignment if aid == a.id)
        values[f"eta_{ai[a.id]}"] = eta
        values[f"s_{ai[a.id]}"] = int(eta >= a.rho)
    if not _check_assignment(model, values):
        raise InternalConsistencyError(
            "reconstructed ILP assignment violates the emitted model"
        )
    score = sum(coef * values[v] for coef, v in model.objective)
    if score != best_overall:
        raise InternalConsistencyError("ILP witness objective mismatch")
    return best_overall


def _layer_witness(g, allowed, cells, target):
    """Recover one round assignment achieving ``target`` satisfied agents."""
    agents = g.agents
    nbrs = {
        a.id: [r.id for r in g.resources if (a.id, r.id) in allowed]
        for a in agents
    }
    counts = {a.id: 0 for a in agents}
    load: dict[tuple[int, str], int] = {}
    assign: dict[tuple[int, str], str] = {}

    def walk(i: int):
        if i == len(cells):
            score = sum(1 for a in agents if counts[a.id] >= a.rho)
            return dict(assign) if score >= target else None
        t, aid = cells[i]
        found = walk(i + 1)
        if found is not None:
            return found
        for rid in nbrs[aid]:
            if load.get((t, rid), 0) < g.resource(rid).capacity:
                load[(t, rid)] = load.get((t, rid), 0) + 1
                counts[aid] += 1
                assign[(t, aid)] = rid
                found = walk(i + 1)
                del assign[(t, aid)]
                counts[aid] -= 1
                load[(t, rid)] -= 1
                if found is not None:
                    return found
        return None

    result = walk(0)
    if result is None:
        raise InternalConsistencyError("failed to recover an ILP witness")
    return result
