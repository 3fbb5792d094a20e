"""Benefit-function construction and validation.

A profile stores the per-round increments delta(1..rho) as exact rationals;
accumulated totals mu(l) are prefix sums with mu(0) = 0.  A profile is valid
when the increments are non-negative (monotone totals), non-increasing
(diminishing returns) and at most 1.

Three families are provided: a unit-increment family whose optimum maximizes
the total number of assignments, a fairness family whose optimum maximizes
the minimum satisfaction ratio gamma_i/rho_i, and an all-or-nothing family
that pays 1 only on full satisfaction (intentionally invalid for rho >= 2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .errors import InputValidationError
from .instance import CompatibilityGraph


@dataclass(frozen=True)
class BenefitProfile:
    delta: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "delta", tuple(Fraction(d) for d in self.delta))

    @property
    def rho(self) -> int:
        return len(self.delta)

    def mu(self, ell: int) -> Fraction:
        if not 0 <= ell <= self.rho:
            raise InputValidationError(f"mu({ell}) outside 0..{self.rho}")
        return sum(self.delta[:ell], Fraction(0))


@dataclass(frozen=True)
class ValidityReport:
    """P1 holds by construction; each other flag records its first violation."""

    p1: bool
    p2: bool
    p3: bool
    p4: bool
    p2_first_violation: Optional[int] = None
    p3_first_violation: Optional[int] = None
    p4_first_violation: Optional[int] = None

    @property
    def valid(self) -> bool:
        return self.p1 and self.p2 and self.p3 and self.p4


def check_validity(p: BenefitProfile) -> ValidityReport:
    p2_bad = next((i for i, d in enumerate(p.delta, 1) if d < 0), None)
    p3_bad = next(
        (i for i in range(2, p.rho + 1) if p.delta[i - 1] > p.delta[i - 2]), None
    )
    p4_bad = next((i for i, d in enumerate(p.delta, 1) if d > 1), None)
    return ValidityReport(
        p1=True,
        p2=p2_bad is None,
        p3=p3_bad is None,
        p4=p4_bad is None,
        p2_first_violation=p2_bad,
        p3_first_violation=p3_bad,
        p4_first_violation=p4_bad,
    )


def utilitarian(rho: int) -> BenefitProfile:
    """Unit increment per matched round: mu(l) = l."""
    if rho < 0:
        raise InputValidationError("rho must be >= 0")
    return BenefitProfile(delta=tuple(Fraction(1) for _ in range(rho)))


def satisfied_agents(rho: int) -> BenefitProfile:
    """All-or-nothing: mu(l) = 0 below rho, mu(rho) = 1."""
    if rho < 1:
        raise InputValidationError("rho must be >= 1")
    return BenefitProfile(
        delta=tuple(Fraction(0) for _ in range(rho - 1)) + (Fraction(1),)
    )


def ratio_levels(k: int) -> tuple[Fraction, ...]:
    """All distinct values k1/k2 with 1 <= k1 <= k2 <= k, plus 0, descending.

    Values deduplicate as reduced fractions (2/4 and 1/2 coincide).
    """
    if k < 1:
        raise InputValidationError("k must be >= 1")
    values = {Fraction(0)}
    for k2 in range(1, k + 1):
        for k1 in range(1, k2 + 1):
            values.add(Fraction(k1, k2))
    return tuple(sorted(values, reverse=True))


def rawlsian(n: int, k: int, rho: int) -> BenefitProfile:
    """Fairness profile whose total-benefit optimum maximizes min gamma_i/rho_i.

    Each level q gets weight (nk)^pi(q) / (nk)^|F| where pi is the 1-based
    rank of q among all levels sorted descending; the increment for the l-th
    matched round is the weight of level (l-1)/rho.
    """
    if n < 1 or k < 1:
        raise InputValidationError("n and k must be >= 1")
    if not 1 <= rho <= k:
        raise InputValidationError(f"rho={rho} outside 1..k={k}")
    levels = ratio_levels(k)
    rank = {q: i for i, q in enumerate(levels, 1)}
    base = n * k
    scale = Fraction(1, base ** len(levels))

    def xi(q: Fraction) -> Fraction:
        return Fraction(base ** rank[q]) * scale

    return BenefitProfile(
        delta=tuple(xi(Fraction(ell - 1, rho)) for ell in range(1, rho + 1))
    )


def from_deltas(deltas: Iterable[Fraction]) -> BenefitProfile:
    """Explicit increment list (parsed from instance or CLI inputs)."""
    return BenefitProfile(delta=tuple(Fraction(d) for d in deltas))


def profiles_for(
    g: CompatibilityGraph, family: str
) -> Mapping[str, BenefitProfile]:
    """Per-agent profiles for a whole instance.

    For the fairness family, n counts the agents with rho >= 1 and k is the
    instance round count.
    """
    if family == "utilitarian":
        return {a.id: utilitarian(a.rho) for a in g.agents}
    if family == "rawlsian":
        n = sum(1 for a in g.agents if a.rho >= 1)
        return {
            a.id: rawlsian(max(n, 1), g.k, a.rho) if a.rho >= 1 else utilitarian(0)
            for a in g.agents
        }
    if family == "satisfied":
        return {
            a.id: satisfied_agents(a.rho) if a.rho >= 1 else utilitarian(0)
            for a in g.agents
        }
    raise InputValidationError(f"unknown benefit family {family!r}")
