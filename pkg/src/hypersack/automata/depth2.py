"""Counting automaton for ``v1 u1^x1 = u2^x2 v2``.

States ``(i, b, j)`` record the position ``i`` inside the current ``u1``
period on the top path, the position ``j`` inside the current ``u2`` period
on the bottom path, and the short element ``b`` joining the two.  Edges
emit ``(1, 0)`` when a ``u1`` period is completed and ``(0, 1)`` for ``u2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..groups import GroupSpec, HyperbolicConstants, Word, constants_for_word, inverse_word
from .parikh import ParikhNFA

Q0, QF = "q0", "qf"


def split_params(N1: int, N2: int, l1: int) -> tuple[int, int, int, int]:
    """``(p, r, s, t)`` with ``N1 = p*l1 + r`` and ``N2 = s*l1 - t``, ``0 <= r, t < l1``."""
    if l1 <= 0:
        raise ValueError("period length must be positive")
    return N1 // l1, N1 % l1, -(-N2 // l1), (-N2) % l1


@dataclass(frozen=True)
class Depth2Bounds:
    lam: int
    eps: int
    N1: int
    N2: int
    top_range: int  # largest length tried for the bottom prefix
    tail_range: int  # largest length tried for the bottom suffix


def depth2_bounds(C: HyperbolicConstants, l1: int, l2: int, m1: int, m2: int) -> Depth2Bounds:
    lam, eps = constants_for_word(C, max(l1, l2))
    d, k = C.delta, C.kappa
    N1 = lam * (m1 + 2 * d + k) + eps
    N2 = lam * (m2 + 2 * d + k) + eps
    return Depth2Bounds(lam, eps, N1, N2,
                        lam * (m1 + N1 + 2 * d + 2 * k) + eps,
                        lam * (m2 + N2 + 2 * d + 2 * k) + eps)


def _suffix_of_power(u: Word, n: int) -> Word:
    """Last ``n`` letters of ``u^ceil(n/|u|)``."""
    if n == 0:
        return ()
    reps = -(-n // len(u))
    return (u * reps)[len(u) * reps - n:]


def _ball_hits(spec: GroupSpec, target, ball, period: Word, upto: int):
    """Pairs ``(k, b)`` for prefixes ``y`` of ``period^inf`` of length ``k <= upto``
    with ``y^-1 target = b`` in ``ball``."""
    n = len(period)
    for r in range(min(n, upto + 1)):
        # y = period^q period[:r]; y = target b^-1  <=>  period^q = target b^-1 period[:r]^-1
        tail = spec.element(inverse_word(period[:r]))
        wanted: dict = {}
        for b in ball:
            wanted.setdefault(spec.mul(spec.mul(target, spec.inverse(b)), tail), []).append(b)
        for e, q in spec.power_hits(period, wanted, (upto - r) // n).items():
            for b in wanted[e]:
                yield q * n + r, b


def build_depth2_nfa(spec: GroupSpec, v1: Word, u1: Word, u2: Word, v2: Word,
                     C: HyperbolicConstants) -> ParikhNFA:
    if not u1 or not u2:
        raise ValueError("periods must be nonempty")
    for w in (v1, u1, u2, v2):
        if spec.length(spec.element(w)) != len(w):
            raise ValueError(f"word {spec.format_word(w)} is not geodesic")
    l1, l2, m1, m2 = len(u1), len(u2), len(v1), len(v2)
    bd = depth2_bounds(C, l1, l2, m1, m2)
    p, r, s, t = split_params(bd.N1, bd.N2, l1)

    ball = spec.ball_elements(C.gamma)
    in_ball = set(ball)
    letter = {x: spec.element((x,)) for x in set(u1) | set(u2) | {-x for x in u2}}

    states = [Q0, QF] + [(i, b, j) for i in range(l1) for b in ball for j in range(l2)]
    trans: set = set()

    # (1) entry: v1 u1^p u1[:r] = x' c with |x'| = k; scan x' along u2^inf
    # and look it up among top * b^-1 (b in the ball), pruning by length
    top = spec.element(v1 + u1 * p + u1[:r])
    for k, c in _ball_hits(spec, top, ball, u2, bd.top_range):
        trans.add((Q0, (p, k // l2), (r, c, k % l2)))

    # (2)-(5) ladder steps
    for i in range(l1):
        for b in ball:
            for j in range(l2):
                b1 = spec.mul(b, letter[u1[i]])
                if b1 in in_ball:
                    if i + 1 < l1:
                        trans.add(((i, b, j), (0, 0), (i + 1, b1, j)))
                    else:
                        trans.add(((i, b, j), (1, 0), (0, b1, j)))
                b2 = spec.mul(letter[-u2[j]], b)
                if b2 in in_ball:
                    if j + 1 < l2:
                        trans.add(((i, b, j), (0, 0), (i, b2, j + 1)))
                    else:
                        trans.add(((i, b, j), (0, 1), (i, b2, 0)))

    # (6) exit: d z = z' v2, z the last N2 letters of u1^s, |z'| = k.
    # y = z'^-1 grows to the right along (u2^-1)^inf and d = y^-1 v2 z^-1
    vz = spec.element(v2 + inverse_word(_suffix_of_power(u1, bd.N2)))
    for k, d in _ball_hits(spec, vz, ball, inverse_word(u2), bd.tail_range):
        trans.add(((t, d, (-k) % l2), (s, -(-k // l2)), QF))

    ordered = sorted(trans, key=repr)
    return ParikhNFA(states, Q0, frozenset({QF}), ordered, dim=2)
