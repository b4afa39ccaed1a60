"""Minimal nonnegative solutions of linear Diophantine systems.

Completion procedure of Contejean and Devie.  Used by the semilinear layer
to intersect linear sets and to solve the linear equations coming from
direct products with Z.
"""
from __future__ import annotations

from typing import Sequence

Vector = tuple[int, ...]


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def _leq(u: Vector, v: Vector) -> bool:
    return all(a <= b for a, b in zip(u, v))


def minimal_solutions(
    columns: Sequence[Sequence[int]],
    rhs: Sequence[int] | None = None,
    max_steps: int = 200_000,
) -> tuple[list[Vector], list[Vector]]:
    """Solve ``sum_j x_j * columns[j] = rhs`` over the naturals.

    Returns ``(particular, homogeneous)``: the minimal solutions of the
    inhomogeneous system and the Hilbert basis of the homogeneous one, so
    that the full solution set is ``particular + N * homogeneous``.  With
    ``rhs`` omitted (or zero) ``particular`` is ``[0]``.
    """
    n = len(columns)
    dim = len(columns[0]) if n else (len(rhs) if rhs is not None else 0)
    rhs = tuple(rhs) if rhs is not None else (0,) * dim
    if n == 0:
        return ([()] if not any(rhs) else []), []

    # augmented system: x_0 .. x_{n-1}, t with column -rhs, t restricted to {0, 1}
    cols = [tuple(c) for c in columns] + [tuple(-r for r in rhs)]
    has_t = any(rhs)
    width = n + 1 if has_t else n
    cols = cols[:width]

    found: list[Vector] = []
    frontier: dict[Vector, Vector] = {}
    for j in range(width):
        e = tuple(1 if i == j else 0 for i in range(width))
        frontier[e] = cols[j]
    steps = 0
    while frontier:
        nxt: dict[Vector, Vector] = {}
        solved = [x for x, ax in frontier.items() if not any(ax)]
        for x in solved:
            if not any(_leq(b, x) for b in found):
                found.append(x)
        for x, ax in frontier.items():
            if not any(ax):
                continue
            for j in range(width):
                if has_t and j == n and x[n] >= 1:
                    continue
                if _dot(ax, cols[j]) >= 0:
                    continue
                y = x[:j] + (x[j] + 1,) + x[j + 1:]
                if y in nxt or any(_leq(b, y) for b in found):
                    continue
                nxt[y] = tuple(a + c for a, c in zip(ax, cols[j]))
                steps += 1
                if steps > max_steps:
                    raise RuntimeError("Diophantine completion exceeded its step budget")
        frontier = nxt

    if not has_t:
        return [(0,) * n], sorted(found)
    particular = sorted(x[:n] for x in found if x[n] == 1)
    homogeneous = sorted(x[:n] for x in found if x[n] == 0)
    return particular, homogeneous
