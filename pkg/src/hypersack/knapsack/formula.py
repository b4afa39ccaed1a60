"""Disjunction-of-conjunctions formulas over knapsack subequations."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from ..semilinear import (
    SemilinearSet, congruence_set, extend_affine, intersect, link_set, oplus, project,
    restrict_positive, restrict_zero, union_all,
)
from .expression import ExponentExpression


@dataclass(frozen=True)
class Link:
    """``total = left + right + 1``."""

    total: str
    left: str
    right: str


@dataclass(frozen=True)
class Congruence:
    var: str
    residue: int
    modulus: int


@dataclass
class Conjunct:
    subequations: tuple[ExponentExpression, ...] = ()
    links: tuple[Link, ...] = ()
    congruences: tuple[Congruence, ...] = ()
    positivity: frozenset[str] = frozenset()
    existentials: frozenset[str] = frozenset()
    zeros: frozenset[str] = frozenset()
    case: str = ""

    def mentioned(self) -> set[str]:
        out = {x for E in self.subequations for x in E.variables}
        for ln in self.links:
            out |= {ln.total, ln.left, ln.right}
        out |= {c.var for c in self.congruences}
        return out | set(self.positivity) | set(self.zeros)


@dataclass
class SolutionFormula:
    variables: tuple[str, ...]
    disjuncts: list[Conjunct] = field(default_factory=list)

    def case_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for c in self.disjuncts:
            out[c.case] = out.get(c.case, 0) + 1
        return out


def constrain(S: SemilinearSet, T: SemilinearSet) -> SemilinearSet:
    """Intersection after padding both sides with unconstrained variables."""
    missing_s = [x for x in T.variables if x not in S.variables]
    missing_t = [x for x in S.variables if x not in T.variables]
    if missing_s:
        S = oplus(S, SemilinearSet.universe(missing_s))
    if missing_t:
        T = oplus(T, SemilinearSet.universe(missing_t))
    return intersect(S, T)


Solver = Callable[[ExponentExpression], SemilinearSet]


def eval_conjunct(C: Conjunct, variables: Iterable[str], solver: Solver) -> SemilinearSet:
    variables = tuple(variables)
    S = SemilinearSet.universe(())
    for E in sorted(C.subequations, key=lambda e: (e.depth, e.size)):
        T = solver(E)
        if T.is_empty():
            return SemilinearSet.empty(variables)
        S = oplus(S, T)
    for ln in C.links:
        if ln.total not in S.variables and ln.left in S.variables and ln.right in S.variables:
            S = extend_affine(S, ln.total, [ln.left, ln.right], 1)
        else:
            S = constrain(S, link_set(ln.total, ln.left, ln.right))
        if S.is_empty():
            return SemilinearSet.empty(variables)
    for cg in C.congruences:
        S = constrain(S, congruence_set(cg.var, cg.residue, cg.modulus))
    for x in sorted(C.zeros):
        S = restrict_zero(S, x) if x in S.variables else oplus(S, SemilinearSet.singleton({x: 0}))
    free = [x for x in variables if x not in S.variables]
    if free:
        S = oplus(S, SemilinearSet.universe(free))
    for x in sorted(C.positivity):
        S = restrict_positive(S, x)
    return project(S, variables)


def eval_formula(F: SolutionFormula, solver: Solver) -> SemilinearSet:
    """Union over disjuncts; existentials are projected away."""
    return union_all(F.variables, (eval_conjunct(C, F.variables, solver) for C in F.disjuncts))
