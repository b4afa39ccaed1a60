"""Ground truth by substitution and exhaustive search."""
from __future__ import annotations

import itertools
from typing import Mapping

from .groups import GroupSpec, word_problem
from .knapsack.expression import ExponentExpression

DEFAULT_CAP = 10**7


class BoxTooLarge(ValueError):
    pass


def verify(spec: GroupSpec, E: ExponentExpression, valuation: Mapping[str, int]) -> bool:
    """Does substituting ``valuation`` into ``E`` give the identity?"""
    missing = [x for x in E.variables if x not in valuation]
    if missing:
        raise KeyError(f"valuation lacks {missing}")
    return word_problem(spec, E.word(valuation))


def brute_solve(spec: GroupSpec, E: ExponentExpression, bound: int, cap: int = DEFAULT_CAP) -> list[dict[str, int]]:
    """All solutions with every exponent in ``[0, bound]``, in lexicographic order of sorted variables."""
    if bound < 0:
        raise ValueError("box bound must be >= 0")
    names = sorted(set(E.variables))
    if (bound + 1) ** len(names) > cap:
        raise BoxTooLarge(f"{(bound + 1) ** len(names)} valuations exceed the cap {cap}")
    out = []
    for values in itertools.product(range(bound + 1), repeat=len(names)):
        nu = dict(zip(names, values))
        if verify(spec, E, nu):
            out.append(nu)
    return out
