"""Cutting a knapsack equation of depth k >= 3 into equations of smaller depth.

Read ``E = 1`` as a closed polygon whose sides alternate between powers
``u_i^{x_i}`` and words ``v_i``.  A short connecting word ``w`` between a
point of the second power and a point elsewhere splits the polygon in two
(or three) closed polygons with fewer power sides.  Every cut below is an exact identity in the group,
so each conjunct implies ``E = 1``; taking all cuts and all short ``w``
makes the union complete for the configured radius.

Notation in comments: ``u_i = u_i1 u_i2`` with ``|u_i1| < |u_i|``;
``v_i = v_i1 v_i2`` at any position; ``x = y + 1 + z`` splits a power
around one period.  Fresh exponents are ``<x>.y`` and ``<x>.z``.
"""
from __future__ import annotations

from ..groups import GroupSpec, Word, inverse_word
from .expression import KnapsackExpression
from .formula import Conjunct, Link, SolutionFormula


def fresh(x: str, tag: str) -> str:
    return f"{x}.{tag}"


class _Builder:
    def __init__(self, spec: GroupSpec, E: KnapsackExpression):
        self.spec = spec
        self.u = [f[0] for f in E.factors]
        self.x = [f[1] for f in E.factors]
        self.v = [f[2] for f in E.factors]
        self.k = len(E.factors)

    def red(self, w: Word) -> Word:
        return self.spec.to_word(self.spec.element(w))

    def expr(self, pieces) -> KnapsackExpression:
        """``pieces`` alternates words and ``(u, var)`` powers."""
        head: list[int] = []
        facs: list[list] = []
        for p in pieces:
            if isinstance(p, tuple) and len(p) == 2 and isinstance(p[1], str):
                facs.append([p[0], p[1], ()])
            elif facs:
                facs[-1][2] = facs[-1][2] + tuple(p)
            else:
                head.extend(p)
        E = KnapsackExpression.from_parts(tuple(head), [tuple(f) for f in facs])
        return KnapsackExpression(tuple((u, x, self.red(v)) for u, x, v in E.factors), self.red(E.constant))

    def power(self, i: int, var: str | None = None):
        """Power ``i`` (1-based), optionally under another exponent name."""
        return (self.u[i - 1], var or self.x[i - 1])

    def word(self, i: int) -> Word:
        return self.v[i - 1]

    def run(self, a: int, b: int) -> list:
        """``u_a^{xa} v_a ... u_b^{xb} v_b`` (inclusive; empty when a > b)."""
        out = []
        for i in range(a, b + 1):
            out += [self.power(i), self.word(i)]
        return out

    def usplits(self, i: int):
        u = self.u[i - 1]
        return [(u[:j], u[j:]) for j in range(len(u))]

    def vsplits(self, i: int):
        v = self.v[i - 1]
        return [(v[:j], v[j:]) for j in range(len(v) + 1)]


def split_polygon(spec: GroupSpec, E: KnapsackExpression, h: int) -> SolutionFormula:
    """All cuts through the second power, as a formula over ``E``'s variables."""
    B = _Builder(spec, E)
    k = B.k
    if k < 3:
        raise ValueError("polygon cuts need depth >= 3")
    inv = inverse_word
    ball_h = [spec.to_word(e) for e in spec.ball_elements(h)]
    ball_h1 = [spec.to_word(e) for e in spec.ball_elements(h + 1)]
    ball_2h1 = [spec.to_word(e) for e in spec.ball_elements(2 * h + 1)]
    x1, x2, x3 = B.x[0], B.x[1], B.x[2]
    y, z = fresh, fresh
    out: list[Conjunct] = []

    def add(case, subs, links, ex):
        out.append(Conjunct(tuple(subs), tuple(links), positivity=frozenset(), existentials=frozenset(ex), case=case))

    # mid-word: p on u_2^{x2} joined to q on v_i, 3 <= i <= k
    #   F = u_1^{x1} v_1 u_2^{y2} (u_21 w v_i2) u_{i+1}^{x(i+1)} ... v_k
    #   G = u_2^{z2} v_2 u_3^{x3} ... u_i^{xi} (v_i1 w^-1 u_22)
    for i in range(3, k + 1):
        for u21, u22 in B.usplits(2):
            for vi1, vi2 in B.vsplits(i):
                for w in ball_h:
                    F = B.expr(B.run(1, 1) + [B.power(2, y(x2, "y")), u21 + w + vi2] + B.run(i + 1, k))
                    G = B.expr([B.power(2, z(x2, "z")), B.word(2)] + B.run(3, i - 1) + [B.power(i), vi1 + inv(w) + u22])
                    add("mid-word", [F, G], [Link(x2, y(x2, "y"), z(x2, "z"))], [y(x2, "y"), z(x2, "z")])

    # mid-power: p on u_2^{x2} joined to a point of u_i^{xi}, 4 <= i <= k
    #   F = u_1^{x1} v_1 u_2^{y2} (u_21 w u_i2) u_i^{zi} v_i u_{i+1}^{x(i+1)} ... v_k
    #   G = u_2^{z2} v_2 u_3^{x3} ... v_{i-1} u_i^{yi} (u_i1 w^-1 u_22)
    for i in range(4, k + 1):
        xi = B.x[i - 1]
        for u21, u22 in B.usplits(2):
            for ui1, ui2 in B.usplits(i):
                for w in ball_h:
                    F = B.expr(B.run(1, 1) + [B.power(2, y(x2, "y")), u21 + w + ui2, B.power(i, z(xi, "z")), B.word(i)]
                               + B.run(i + 1, k))
                    G = B.expr([B.power(2, z(x2, "z")), B.word(2)] + B.run(3, i - 1)
                               + [B.power(i, y(xi, "y")), ui1 + inv(w) + u22])
                    add("mid-power", [F, G],
                        [Link(x2, y(x2, "y"), z(x2, "z")), Link(xi, y(xi, "y"), z(xi, "z"))],
                        [y(x2, "y"), z(x2, "z"), y(xi, "y"), z(xi, "z")])

    rest = B.run(3, k)  # u_3^{x3} v_3 ... u_k^{xk} v_k

    # end-word1: end of u_2^{x2} near q on v_1
    #   F = u_2^{x2} (w v_12),  G = u_1^{x1} (v_11 w^-1 v_2) u_3^{x3} ... v_k
    for v11, v12 in B.vsplits(1):
        for w in ball_h:
            F = B.expr([B.power(2), w + v12])
            G = B.expr([B.power(1), v11 + inv(w) + B.word(2)] + rest)
            add("end-word1", [F, G], [], [])

    # end-power1: end of u_2^{x2} near a point of u_1^{x1}
    #   F = u_1^{z1} v_1 u_2^{x2} (w u_12),  G = u_1^{y1} (u_11 w^-1 v_2) u_3^{x3} ... v_k
    for u11, u12 in B.usplits(1):
        for w in ball_h:
            F = B.expr([B.power(1, z(x1, "z")), B.word(1), B.power(2), w + u12])
            G = B.expr([B.power(1, y(x1, "y")), u11 + inv(w) + B.word(2)] + rest)
            add("end-power1", [F, G], [Link(x1, y(x1, "y"), z(x1, "z"))], [y(x1, "y"), z(x1, "z")])

    # word1-word2: q1 on v_1, q2 on v_2
    #   F = u_2^{x2} (v_21 w v_12),  G = u_1^{x1} (v_11 w^-1 v_22) u_3^{x3} ... v_k
    for v11, v12 in B.vsplits(1):
        for v21, v22 in B.vsplits(2):
            for w in ball_2h1:
                F = B.expr([B.power(2), v21 + w + v12])
                G = B.expr([B.power(1), v11 + inv(w) + v22] + rest)
                add("word1-word2", [F, G], [], [])

    # power1-word2: q1 on u_1^{x1}, q2 on v_2
    #   F = u_1^{z1} v_1 u_2^{x2} (v_21 w u_12),  G = u_1^{y1} (u_11 w^-1 v_22) u_3^{x3} ... v_k
    for u11, u12 in B.usplits(1):
        for v21, v22 in B.vsplits(2):
            for w in ball_2h1:
                F = B.expr([B.power(1, z(x1, "z")), B.word(1), B.power(2), v21 + w + u12])
                G = B.expr([B.power(1, y(x1, "y")), u11 + inv(w) + v22] + rest)
                add("power1-word2", [F, G], [Link(x1, y(x1, "y"), z(x1, "z"))], [y(x1, "y"), z(x1, "z")])

    # word1-power3: q1 on v_1, q2 on u_3^{x3} (power1-word2 mirrored)
    #   F = u_2^{x2} v_2 u_3^{y3} (u_31 w v_12)
    #   G = u_1^{x1} (v_11 w^-1 u_32) u_3^{z3} v_3 u_4^{x4} ... v_k
    for v11, v12 in B.vsplits(1):
        for u31, u32 in B.usplits(3):
            for w in ball_2h1:
                F = B.expr([B.power(2), B.word(2), B.power(3, y(x3, "y")), u31 + w + v12])
                G = B.expr([B.power(1), v11 + inv(w) + u32, B.power(3, z(x3, "z")), B.word(3)] + B.run(4, k))
                add("word1-power3", [F, G], [Link(x3, y(x3, "y"), z(x3, "z"))], [y(x3, "y"), z(x3, "z")])

    # power1-power3: p on u_2^{x2} near q1 on u_1^{x1} (w1) and q2 on u_3^{x3} (w2); the cut between
    # q1 and q2 is w = w1^-1 w2
    #   F = u_1^{z1} v_1 u_2^{y2} (u_21 w1 u_12)
    #   G = u_2^{z2} v_2 u_3^{y3} (u_31 w2^-1 u_22)
    #   H = u_3^{z3} v_3 u_4^{x4} ... v_k u_1^{y1} (u_11 w u_32)
    links = [Link(x, y(x, "y"), z(x, "z")) for x in (x1, x2, x3)]
    ex = [fresh(x, t) for x in (x1, x2, x3) for t in ("y", "z")]
    for w1 in ball_h:
        for w2 in ball_h1:
            w = B.red(inv(w1) + w2)
            for u11, u12 in B.usplits(1):
                for u21, u22 in B.usplits(2):
                    for u31, u32 in B.usplits(3):
                        F = B.expr([B.power(1, z(x1, "z")), B.word(1), B.power(2, y(x2, "y")), u21 + w1 + u12])
                        G = B.expr([B.power(2, z(x2, "z")), B.word(2), B.power(3, y(x3, "y")), u31 + inv(w2) + u22])
                        H = B.expr([B.power(3, z(x3, "z")), B.word(3)] + B.run(4, k)
                                   + [B.power(1, y(x1, "y")), u11 + w + u32])
                        add("power1-power3", [F, G, H], links, ex)

    for c in out:
        assert all(s.depth < k for s in c.subequations), c.case
    return SolutionFormula(tuple(E.variables), out)
