"""Rewriting knapsack expressions so every power is of infinite order with
quasigeodesic powers.

Torsion powers are replaced by each of their residues; the remaining powers
are conjugated into a cyclic rotation of their base (and, for long bases in
groups with ``delta > 0``, into a power whose iterates are geodesic).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..groups import INFINITE, GroupSpec, HyperbolicConstants, Word, inverse_word
from ..semilinear import SemilinearSet, congruence_set, oplus
from .expression import KnapsackExpression

TEST_EXPONENT = 8


class NormalizationError(RuntimeError):
    pass


def shortlex_expression(spec: GroupSpec, E: KnapsackExpression) -> KnapsackExpression:
    red = lambda w: spec.to_word(spec.element(w))  # noqa: E731
    return KnapsackExpression(tuple((red(u), x, red(v)) for u, x, v in E.factors), red(E.constant))


def reduce_torsion(spec: GroupSpec, E: KnapsackExpression) -> list[tuple[KnapsackExpression, SemilinearSet]]:
    """Branches ``(E_f, F_f)``: torsion powers fixed to a residue, ``F_f`` the matching congruences."""
    torsion = []
    for idx, (u, x, _) in enumerate(E.factors):
        o = spec.element_order(spec.element(u))
        if o != INFINITE:
            torsion.append((idx, x, int(o)))
    if not torsion:
        return [(E, SemilinearSet.universe(()))]
    out = []
    for residues in itertools.product(*(range(o) for _, _, o in torsion)):
        fixed = {idx: f for (idx, _, _), f in zip(torsion, residues)}
        head: list[int] = []
        facs: list[list] = []
        for idx, (u, x, v) in enumerate(E.factors):
            if idx in fixed:
                w = u * fixed[idx] + v
                if facs:
                    facs[-1][2] = facs[-1][2] + w
                else:
                    head.extend(w)
            else:
                facs.append([u, x, v])
        Ef = KnapsackExpression.from_parts(tuple(head) + E.constant, [tuple(f) for f in facs])
        Ff = SemilinearSet.universe(())
        for (_, x, o), f in zip(torsion, residues):
            Ff = oplus(Ff, congruence_set(x, f, o))
        out.append((Ef, Ff))
    return out


@dataclass(frozen=True)
class PowerNormalForm:
    prefix: Word  # u_1 u~^d c, before the new power
    base: Word  # new power word
    suffix: Word  # c^-1 u_1^-1, after the new power
    m: int
    c: Word
    rotated: Word  # u~


def _powers_geodesic(spec: GroupSpec, w: Word, upto: int) -> bool:
    e = spec.identity
    for n in range(1, upto + 1):
        e = spec.mul_word(e, w)
        if spec.length(e) != n * len(w):
            return False
    return True


def power_normal_forms(spec: GroupSpec, u: Word, C: HyperbolicConstants) -> tuple[int, Word, Word, Word, list[Word]]:
    """``(m, c, rotation u~, half u_1, [prefix for d in range(m)])`` for one base."""
    half = len(u) // 2
    u1, u2 = u[:half], u[half:]
    rot = spec.to_word(spec.element(u2 + u1))
    if len(rot) < 2 * C.L + 1:
        return 1, (), rot, u1, [u1]
    for c in spec.ball_elements(4 * C.delta):
        cw = spec.to_word(c)
        for m in range(1, C.K_EH + 1):
            w = spec.to_word(spec.element(inverse_word(cw) + rot * m + cw))
            if w and _powers_geodesic(spec, w, TEST_EXPONENT):
                return m, cw, rot, u1, [u1 + rot * d + cw for d in range(m)]
    raise NormalizationError(
        f"no conjugator in the {4 * C.delta}-ball and exponent <= {C.K_EH} make powers of "
        f"{spec.format_word(rot)} geodesic; check the configured constants")


def normalize_powers(spec: GroupSpec, E: KnapsackExpression, C: HyperbolicConstants):
    """Branches ``(E_d, m, d)`` with ``sol(E) = union of m * sol(E_d) + d``."""
    per_factor = []
    for u, x, v in E.factors:
        m, cw, rot, u1, prefixes = power_normal_forms(spec, u, C)
        base = rot if m == 1 and not cw else spec.to_word(spec.element(inverse_word(cw) + rot * m + cw))
        per_factor.append((x, m, base, prefixes, inverse_word(cw) + inverse_word(u1), v))
    m_map = {x: m for x, m, *_ in per_factor}
    out = []
    for ds in itertools.product(*(range(m) for _, m, *_ in per_factor)):
        head: list[int] = list(E.constant)
        facs: list[list] = []
        for (x, m, base, prefixes, suffix, v), d in zip(per_factor, ds):
            pre = prefixes[d]
            if facs:
                facs[-1][2] = facs[-1][2] + pre
            else:
                head.extend(pre)
            facs.append([base, x, suffix + v])
        Ed = KnapsackExpression.from_parts(tuple(head), [tuple(f) for f in facs])
        out.append((shortlex_expression(spec, Ed), dict(m_map), {x: d for (x, *_), d in zip(per_factor, ds)}))
    return out


@dataclass
class NormalizedPiece:
    expression: KnapsackExpression
    m: dict
    d: dict
    congruences: SemilinearSet


def quasigeodesify(spec: GroupSpec, E: KnapsackExpression, C: HyperbolicConstants) -> list[NormalizedPiece]:
    """``sol(E) = union of (m * sol(E_i) + d) (+) F_i`` over the returned pieces."""
    E = shortlex_expression(spec, E)
    out = []
    for Ef, Ff in reduce_torsion(spec, E):
        for Ed, m, d in normalize_powers(spec, Ef, C):
            out.append(NormalizedPiece(Ed, m, d, Ff))
    return out
