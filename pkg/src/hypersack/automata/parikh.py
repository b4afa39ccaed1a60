"""Counting automata and the semilinear sets of their accepted vectors.

An accepting run contributes the sum of its edge vectors.  Every run
splits into a short *base* run plus simple cycles hanging off states the
base visits, so the image is a union of ``base + N{cycles at visited states}``.
The search below enumerates base runs breadth-first while carrying the
cycle vectors unlocked so far, discarding any partial run whose future is
already covered by another one at the same state.
"""
from __future__ import annotations

import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Hashable, Sequence

from ..semilinear import LinearSet, SemilinearSet, in_monoid, simplify, sort_variables

log = logging.getLogger(__name__)

Vector = tuple[int, ...]


@dataclass
class ParikhNFA:
    states: list
    initial: Hashable
    finals: frozenset
    transitions: list[tuple[Hashable, Vector, Hashable]] = field(default_factory=list)
    dim: int = 2

    def __post_init__(self):
        self.finals = frozenset(self.finals)
        known = set(self.states)
        if len(known) != len(self.states):
            raise ValueError("duplicate state ids")
        for s, vec, t in self.transitions:
            if s not in known or t not in known:
                raise ValueError(f"transition {s!r} -> {t!r} uses an unknown state")
            if len(vec) != self.dim or min(vec, default=0) < 0:
                raise ValueError(f"bad count vector {vec!r}")
        if self.initial not in known or not self.finals <= known:
            raise ValueError("initial/final state unknown")


def _add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def trim(A: ParikhNFA) -> ParikhNFA:
    """Keep only states on some accepting run."""
    fwd, bwd = defaultdict(set), defaultdict(set)
    for s, _, t in A.transitions:
        fwd[s].add(t)
        bwd[t].add(s)

    def closure(start, adj):
        seen = set(start)
        stack = list(start)
        while stack:
            s = stack.pop()
            for t in adj[s]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return seen

    useful = closure([A.initial], fwd) & closure(A.finals, bwd)
    states = [s for s in A.states if s in useful]
    trans = [(s, v, t) for s, v, t in A.transitions if s in useful and t in useful]
    if A.initial not in useful:
        return ParikhNFA([A.initial], A.initial, frozenset(), [], A.dim)
    return ParikhNFA(states, A.initial, A.finals & useful, trans, A.dim)


def _minimal_generators(vectors) -> frozenset[Vector]:
    """Drop zero vectors and vectors generated by the others."""
    vs = sorted({v for v in vectors if any(v)}, key=lambda v: (sum(v), v))
    kept: list[Vector] = []
    for v in vs:
        if not in_monoid(v, tuple(kept)):
            kept.append(v)
    return frozenset(kept)


def cycle_vectors(A: ParikhNFA) -> dict[Hashable, frozenset[Vector]]:
    """Per state: generators of the vectors of closed walks through it of length at most |Q|."""
    out = defaultdict(list)
    for s, v, t in A.transitions:
        out[s].append((v, t))
    n = len(A.states)
    result = {}
    for s in A.states:
        found = set()
        layer = {(s, tuple([0] * A.dim))}
        seen = set(layer)
        for _ in range(n):
            nxt = set()
            for q, vec in layer:
                for v, t in out[q]:
                    w = _add(vec, v)
                    if t == s:
                        found.add(w)
                    key = (t, w)
                    if key not in seen:
                        seen.add(key)
                        nxt.add(key)
            layer = nxt
            if not layer:
                break
        result[s] = _minimal_generators(found)
    return result


def parikh_image(A: ParikhNFA, variables: Sequence[str] = ("x1", "x2"), max_layers: int | None = None) -> SemilinearSet:
    if len(variables) != A.dim:
        raise ValueError("one variable per coordinate required")
    A = trim(A)
    if not A.finals:
        return SemilinearSet.empty(variables)
    cyc = cycle_vectors(A)
    out = defaultdict(list)
    for s, v, t in A.transitions:
        out[s].append((v, t))

    zero = tuple([0] * A.dim)
    start = (A.initial, zero, cyc[A.initial])
    kept: dict[Hashable, list[tuple[Vector, frozenset]]] = defaultdict(list)

    def dominated(q, v, T) -> bool:
        for v2, T2 in kept[q]:
            if T <= T2 and all(a >= b for a, b in zip(v, v2)):
                diff = tuple(a - b for a, b in zip(v, v2))
                if in_monoid(diff, tuple(sorted(T2))):
                    return True
        return False

    kept[A.initial].append((zero, start[2]))
    layer = [start]
    layers = 0
    while layer:
        layers += 1
        if max_layers is not None and layers > max_layers:
            raise RuntimeError("Parikh search exceeded its layer budget")
        nxt = []
        for q, v, T in layer:
            for vec, t in out[q]:
                w = _add(v, vec)
                T2 = T | cyc[t] if not cyc[t] <= T else T
                if dominated(t, w, T2):
                    continue
                kept[t].append((w, T2))
                nxt.append((t, w, T2))
        layer = nxt

    vs = sort_variables(variables)
    perm = [list(variables).index(x) for x in vs]

    def place(v: Vector) -> Vector:
        return tuple(v[i] for i in perm)

    comps = []
    for f in A.finals:
        for v, T in kept[f]:
            comps.append(LinearSet(vs, place(v), tuple(place(p) for p in _minimal_generators(T))))
    S = simplify(SemilinearSet(vs, comps))
    log.debug("parikh image: %d states, %d search layers, magnitude %d", len(A.states), layers, S.magnitude)
    return S


def runs_in_box(A: ParikhNFA, bound: int) -> set[Vector]:
    """Vectors of accepting runs with every entry at most ``bound`` (exhaustive search)."""
    out = defaultdict(list)
    for s, v, t in A.transitions:
        out[s].append((v, t))
    start = (A.initial, tuple([0] * A.dim))
    seen = {start}
    stack = [start]
    while stack:
        q, v = stack.pop()
        for vec, t in out[q]:
            w = _add(v, vec)
            if max(w, default=0) <= bound and (t, w) not in seen:
                seen.add((t, w))
                stack.append((t, w))
    return {v for q, v in seen if q in A.finals}


def parikh_from_json(text: str) -> ParikhNFA:
    """``{states, initial, finals, transitions: [{from, vector, to}]}``; ``dim`` is optional."""
    data = json.loads(text)
    try:
        trans = [(t["from"], tuple(int(a) for a in t["vector"]), t["to"]) for t in data["transitions"]]
        dim = int(data.get("dim", len(trans[0][1]) if trans else 2))
        finals = data["finals"] if isinstance(data["finals"], list) else [data["finals"]]
        return ParikhNFA(list(data["states"]), data["initial"], frozenset(finals), trans, dim)
    except KeyError as exc:
        raise ValueError(f"counting automaton file lacks field {exc}") from None


def parikh_to_json(A: ParikhNFA) -> str:
    return json.dumps({
        "states": list(A.states), "initial": A.initial, "finals": sorted(A.finals, key=str), "dim": A.dim,
        "transitions": [{"from": s, "vector": list(v), "to": t} for s, v, t in A.transitions],
    }, indent=1)
