"""Word-labelled automata and identity membership for acyclic ones."""
from __future__ import annotations

import json
from collections import defaultdict, deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Hashable, Iterable, Sequence

from ..groups import FreeGroup, GroupSpec, Word

DEFAULT_STATE_CAP = 10**5


class NotAcyclic(ValueError):
    pass


class MembershipCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Transition:
    source: Hashable
    label: Word
    target: Hashable


@dataclass
class WordNFA:
    states: list
    initial: Hashable
    finals: frozenset
    transitions: list[Transition] = field(default_factory=list)

    def __post_init__(self):
        if len(set(self.states)) != len(self.states):
            raise ValueError("duplicate state ids")
        known = set(self.states)
        self.finals = frozenset(self.finals)
        self.transitions = [t if isinstance(t, Transition) else Transition(t[0], tuple(t[1]), t[2])
                            for t in self.transitions]
        bad = [s for s in [self.initial, *self.finals] if s not in known]
        bad += [s for t in self.transitions for s in (t.source, t.target) if s not in known]
        if bad:
            raise ValueError(f"unknown state {bad[0]!r}")

    def out_edges(self) -> dict:
        out = defaultdict(list)
        for i, t in enumerate(self.transitions):
            out[t.source].append(i)
        return out

    def check_alphabet(self, spec: GroupSpec):
        for t in self.transitions:
            spec.check_word(t.label)


def topological_order(A: WordNFA) -> list | None:
    """Kahn's algorithm; ``None`` when the state graph has a cycle."""
    indeg = {s: 0 for s in A.states}
    succ = defaultdict(list)
    for t in A.transitions:
        indeg[t.target] += 1
        succ[t.source].append(t.target)
    queue = deque(s for s in A.states if indeg[s] == 0)
    order = []
    while queue:
        s = queue.popleft()
        order.append(s)
        for q in succ[s]:
            indeg[q] -= 1
            if indeg[q] == 0:
                queue.append(q)
    return order if len(order) == len(A.states) else None


def is_acyclic(A: WordNFA) -> bool:
    return topological_order(A) is not None


@dataclass
class MembershipResult:
    accepted: bool
    witness: Word | None = None
    path: tuple[int, ...] = ()  # indices into A.transitions

    def __bool__(self):
        return self.accepted


# -- free groups: saturation ----------------------------------------------------

class _LetterGraph:
    """Label-split copy of an NFA: every edge carries at most one letter."""

    def __init__(self, A: WordNFA):
        states = list(A.states)
        edges = []  # (src, letter or 0, dst, original transition, first piece?)
        for idx, t in enumerate(A.transitions):
            if len(t.label) <= 1:
                edges.append((t.source, t.label[0] if t.label else 0, t.target, idx, True))
                continue
            prev = t.source
            for pos, x in enumerate(t.label):
                nxt = t.target if pos == len(t.label) - 1 else ("chain", idx, pos + 1)
                if pos < len(t.label) - 1:
                    states.append(nxt)
                edges.append((prev, x, nxt, idx, pos == 0))
                prev = nxt
        self.states = states
        self.edges = edges
        order = topological_order(WordNFA(states, A.initial, A.finals,
                                          [Transition(s, (x,) if x else (), d) for s, x, d, _, _ in edges]))
        if order is None:
            raise NotAcyclic("automaton has a cycle")
        self.order = order
        self.index = {s: i for i, s in enumerate(order)}
        self.out = defaultdict(list)  # state index -> [(letter, target index, edge id)]
        for e, (s, x, d, _, _) in enumerate(edges):
            self.out[self.index[s]].append((x, self.index[d], e))
        self._saturate()

    def _saturate(self):
        n = len(self.order)
        R = [0] * n
        # via[r][letter] = OR of R(s) over edges r -letter-> s
        via: list[dict[int, int]] = [dict() for _ in range(n)]
        has_out: dict[int, int] = defaultdict(int)
        for p in range(n - 1, -1, -1):
            acc = 1 << p
            for x, q, _ in self.out[p]:
                if x == 0:
                    acc |= R[q]
                    continue
                cand = R[q] & has_out[-x]
                while cand:
                    low = cand & -cand
                    r = low.bit_length() - 1
                    acc |= via[r][-x]
                    cand ^= low
            R[p] = acc
            for x, q, _ in self.out[p]:
                if x:
                    via[p][x] = via[p].get(x, 0) | R[q]
                    has_out[x] |= 1 << p
        self.R = R
        self.via = via

    def explain(self, p: int, target: int) -> list[int]:
        """Edge ids of a path from p to target whose label freely reduces to the empty word."""
        out: list[int] = []
        stack: list[tuple] = [("x", p, target)]
        R, via = self.R, self.via
        while stack:
            item = stack.pop()
            if item[0] == "e":
                out.append(item[1])
                continue
            _, p, target = item
            if p == target:
                continue
            bit = 1 << target
            for x, q, e in self.out[p]:
                if x == 0:
                    if R[q] & bit:
                        stack.append(("x", q, target))
                        stack.append(("e", e))
                        break
                    continue
                found = None
                cand = R[q]
                while cand and found is None:
                    low = cand & -cand
                    r = low.bit_length() - 1
                    cand ^= low
                    if via[r].get(-x, 0) & bit:
                        for y, s, e2 in self.out[r]:
                            if y == -x and R[s] & bit:
                                found = (r, s, e2)
                                break
                if found is not None:
                    r, s, e2 = found
                    # p -x-> q ~> r -x^-1-> s ~> target
                    stack.extend([("x", s, target), ("e", e2), ("x", q, r), ("e", e)])
                    break
            else:
                raise AssertionError("saturation table inconsistent")
        return out


def benois_saturate(A: WordNFA) -> WordNFA:
    """Split labels into letters and add an empty edge p -> s whenever s is reachable
    from p by a word that freely reduces to the empty word."""
    g = _LetterGraph(A)
    trans = {Transition(s, (x,) if x else (), d) for s, x, d, _, _ in g.edges}
    for p, bits in enumerate(g.R):
        bits &= ~(1 << p)
        while bits:
            low = bits & -bits
            trans.add(Transition(g.order[p], (), g.order[low.bit_length() - 1]))
            bits ^= low
    ordered = sorted(trans, key=lambda t: (g.index[t.source], g.index[t.target], t.label))
    return WordNFA(list(g.states), A.initial, A.finals, ordered)


def _free_membership(A: WordNFA) -> MembershipResult:
    g = _LetterGraph(A)
    start = g.index[A.initial]
    for f in sorted(A.finals, key=lambda s: g.index[s]):
        fi = g.index[f]
        if g.R[start] >> fi & 1:
            edges = g.explain(start, fi)
            path = tuple(g.edges[e][3] for e in edges if g.edges[e][4])
            word = tuple(x for t in path for x in A.transitions[t].label)
            return MembershipResult(True, word, path)
    return MembershipResult(False)


# -- other backends: element-set propagation -------------------------------------

def _dp_membership(spec: GroupSpec, A: WordNFA, cap: int | None) -> MembershipResult:
    order = topological_order(A)
    if order is None:
        raise NotAcyclic("automaton has a cycle")
    out = A.out_edges()
    reach: dict = {s: {} for s in A.states}
    reach[A.initial][spec.identity] = None
    for s in order:
        here = reach[s]
        if not here:
            continue
        for ti in out[s]:
            t = A.transitions[ti]
            there = reach[t.target]
            for e in here:
                f = spec.mul_word(e, t.label)
                if f not in there:
                    there[f] = (ti, e)
                    if cap is not None and len(there) > cap:
                        raise MembershipCapExceeded(f"more than {cap} elements reach state {t.target!r}")
    for f in sorted(A.finals, key=order.index):
        if spec.identity in reach[f]:
            path = []
            s, e = f, spec.identity
            while reach[s][e] is not None:
                ti, e = reach[s][e]
                path.append(ti)
                s = A.transitions[ti].source
            path.reverse()
            word = tuple(x for t in path for x in A.transitions[t].label)
            return MembershipResult(True, word, tuple(path))
    return MembershipResult(False)


def acyclic_membership(spec: GroupSpec, A: WordNFA, cap: int = DEFAULT_STATE_CAP) -> MembershipResult:
    """Does A accept a word equal to the identity?  Witness word and path included."""
    A.check_alphabet(spec)
    if isinstance(spec, FreeGroup):
        return _free_membership(A)
    if spec.kind == "finite":
        return _dp_membership(spec, A, None)
    return _dp_membership(spec, A, cap)


def accepted_words(A: WordNFA, limit: int = 10**6) -> Iterable[Word]:
    """All words along accepting paths of an acyclic automaton (with repetitions)."""
    out = A.out_edges()
    stack = [(A.initial, ())]
    count = 0
    while stack:
        s, w = stack.pop()
        if s in A.finals:
            count += 1
            if count > limit:
                raise RuntimeError("too many accepting paths")
            yield w
        for ti in out[s]:
            t = A.transitions[ti]
            stack.append((t.target, w + t.label))


# -- grid automaton ---------------------------------------------------------------

def grid_nfa(E, p: int) -> WordNFA:
    """Accepts ``u_1^{n_1} v_1 ... u_k^{n_k} v_k`` for ``0 <= n_i <= p``.

    ``E`` is any object with a ``factors`` sequence of ``(u, variable, v)``.
    """
    if p < 0:
        raise ValueError("bound must be nonnegative")
    k = len(E.factors)
    if k == 0:
        raise ValueError("grid automaton needs at least one power")
    states = [(i, j) for i in range(1, k + 2) for j in range(p + 1)]
    trans = []
    for i, (u, _, v) in enumerate(E.factors, start=1):
        for j in range(p):
            trans.append(Transition((i, j), tuple(u), (i, j + 1)))
            trans.append(Transition((i, j), (), (i, j + 1)))
        trans.append(Transition((i, p), tuple(v), (i + 1, 0)))
    return WordNFA(states, (1, 0), frozenset({(k + 1, 0)}), trans)


def grid_exponents(E, A: WordNFA, path: Sequence[int]) -> dict[str, int]:
    """Read the exponent choice off an accepting path of ``grid_nfa(E, p)``."""
    k = len(E.factors)
    width = 2 * (len(A.states) // (k + 1) - 1) + 1  # transitions per row
    counts = {var: 0 for _, var, _ in E.factors}
    for ti in path:
        row, off = divmod(ti, width)
        if off < width - 1 and off % 2 == 0:
            counts[E.factors[row][1]] += 1
    return counts


# -- JSON ------------------------------------------------------------------------

def _state_key(s) -> str | int:
    if isinstance(s, tuple):
        return ",".join(map(str, s))
    return s


def nfa_to_json(A: WordNFA, spec: GroupSpec) -> str:
    data = {
        "states": [_state_key(s) for s in A.states],
        "initial": _state_key(A.initial),
        "finals": sorted((_state_key(s) for s in A.finals), key=str),
        "transitions": [{"from": _state_key(t.source), "label": spec.format_word(t.label) if t.label else "",
                         "to": _state_key(t.target)} for t in A.transitions],
    }
    return json.dumps(data, indent=1)


def nfa_from_json(text: str, spec: GroupSpec) -> WordNFA:
    data = json.loads(text)
    try:
        finals = data["finals"]
        if not isinstance(finals, list):
            finals = [finals]
        trans = [Transition(t["from"], spec.parse_word(t.get("label", "") or ""), t["to"])
                 for t in data["transitions"]]
        return WordNFA(list(data["states"]), data["initial"], frozenset(finals), trans)
    except KeyError as exc:
        raise ValueError(f"NFA file lacks field {exc}") from None


def load_nfa(path: str | Path, spec: GroupSpec) -> WordNFA:
    return nfa_from_json(Path(path).read_text(), spec)
