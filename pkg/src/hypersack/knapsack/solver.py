"""Solution sets of knapsack equations.

Pipeline for hyperbolic backends: normalize powers, then solve by depth --
a word check (depth 0), a bounded scan (depth 1), a ladder automaton plus a
finite table (depth 2), or cutting the polygon into smaller equations
(depth >= 3).  ``G x Z`` intersects the solution set of the ``G`` part with
the linear equation on the ``Z`` exponents.
"""
from __future__ import annotations

import logging
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..automata.depth2 import build_depth2_nfa, depth2_bounds
from ..automata.nfa import acyclic_membership, grid_exponents, grid_nfa
from ..automata.parikh import parikh_image
from ..groups import (
    DirectProductZ, FreeProduct, GroupSpec, HyperbolicConstants, UnsupportedGroup, Word,
    constants, constants_for_word, inverse_word,
)
from ..semilinear import (
    LinearSet, SemilinearSet, intersect, linear_equation_set, oplus, rename, scale_shift, simplify,
    union_all,
)
from .expression import ExponentExpression, KnapsackExpression, as_knapsack
from .formula import Conjunct, SolutionFormula, constrain, eval_conjunct, eval_formula
from .normalize import quasigeodesify
from .polygon import split_polygon

log = logging.getLogger(__name__)


class BoundRequired(ValueError):
    pass


def positivity_split(E: KnapsackExpression) -> SolutionFormula:
    """One disjunct per subset I of the powers: the others dropped (exponent 0), those in I positive."""
    k = E.depth
    out = []
    for mask in range(1 << k):
        keep = [E.factors[i][1] for i in range(k) if mask >> i & 1]
        zeros = frozenset(x for x in E.variables if x not in keep)
        out.append(Conjunct((E.drop_powers(keep),), positivity=frozenset(keep), zeros=zeros, case=f"I={mask:b}"))
    return SolutionFormula(tuple(E.variables), out)


def _positional(E: KnapsackExpression) -> tuple[KnapsackExpression, dict[str, str]]:
    names = {x: f"_{i}" for i, x in enumerate(E.variables)}
    return E.rename(names), {v: k for k, v in names.items()}


@dataclass
class Stats:
    depth1_calls: int = 0
    depth2_calls: int = 0
    cache_hits: int = 0
    max_recursion: int = 0
    cases: Counter = field(default_factory=Counter)
    timings: dict = field(default_factory=dict)


class HyperbolicSolver:
    """Solver for one hyperbolic backend; caches are per instance."""

    def __init__(self, spec: GroupSpec, C: HyperbolicConstants | None = None):
        self.spec = spec
        self.C = C if C is not None else constants(spec)
        self.stats = Stats()
        self._cache: dict = {}
        self._d2_cache: dict = {}

    # -- helpers ---------------------------------------------------------
    def red(self, w: Word) -> Word:
        return self.spec.to_word(self.spec.element(w))

    def is_trivial(self, w: Word) -> bool:
        return self.spec.is_identity(self.spec.element(w))

    # -- depth 1 -----------------------------------------------------------
    def solve_depth1(self, u: Word, v: Word, var: str = "x") -> SemilinearSet:
        """``{n : u^n v = 1}``; at most one ``n`` since ``u`` has infinite order."""
        self.stats.depth1_calls += 1
        spec = self.spec
        if not u:
            raise ValueError("depth-1 base must be nonempty")
        lam, eps = constants_for_word(self.C, len(u))
        vlen = spec.length(spec.element(v))
        bound = (lam * vlen + eps) // len(u)
        target = spec.element(inverse_word(v))
        e = spec.identity
        hits = []
        for n in range(bound + 1):
            if e == target:
                hits.append(n)
                break
            e = spec.mul_word(e, u)
        for n in hits:
            assert len(u) * n <= lam * vlen + eps
        return SemilinearSet.from_points((var,), [(n,) for n in hits])

    # -- depth 2 -----------------------------------------------------------
    def solve_depth2(self, v1: Word, u1: Word, u2: Word, v2: Word, vars=("x1", "x2")) -> SemilinearSet:
        """``{(n1, n2) : v1 u1^n1 = u2^n2 v2}`` over ``vars``."""
        spec = self.spec
        v1, u1, u2, v2 = self.red(v1), tuple(u1), tuple(u2), self.red(v2)
        key = (v1, u1, u2, v2)
        if key in self._d2_cache:
            self.stats.cache_hits += 1
            S = self._d2_cache[key]
        else:
            self.stats.depth2_calls += 1
            S = self._depth2(v1, u1, u2, v2)
            self._d2_cache[key] = S
        return rename(S, {"x1": vars[0], "x2": vars[1]})

    def _depth2(self, v1, u1, u2, v2) -> SemilinearSet:
        spec = self.spec
        l1, l2, m1, m2 = len(u1), len(u2), len(v1), len(v2)
        bd = depth2_bounds(self.C, l1, l2, m1, m2)
        # finite part: n1 < (N1 + N2) / l1
        n1_max = -(-(bd.N1 + bd.N2) // l1) - 1
        n2_max = -(-(bd.lam * (bd.N1 + bd.N2 + m1 + m2) + bd.eps) // l2) - 1
        # u2^n2 = v1 u1^n1 v2^-1: collect the right sides, then look them up among the powers of u2
        wanted: dict = {}
        acc = spec.accumulator(spec.element(v1))
        v2inv = spec.element(inverse_word(v2))
        for n1 in range(n1_max + 1):
            wanted.setdefault(spec.mul(acc.value(), v2inv), []).append(n1)
            acc.push(u1)
        points = [(n1, n2) for w, n2 in spec.power_hits(u2, wanted, n2_max).items() for n1 in wanted[w]]
        S1 = SemilinearSet.from_points(("x1", "x2"), points)
        A = build_depth2_nfa(spec, v1, u1, u2, v2, self.C)
        S2 = parikh_image(A, ("x1", "x2"))
        return simplify(union_all(("x1", "x2"), [S1, S2]))

    # -- recursion ---------------------------------------------------------
    def solve(self, E: ExponentExpression) -> SemilinearSet:
        """Full solution set of a knapsack expression over this backend."""
        E = as_knapsack(E)
        t0 = time.perf_counter()
        pieces = quasigeodesify(self.spec, E, self.C)
        t1 = time.perf_counter()
        parts = []
        for piece in pieces:
            S = self.solve_qg(piece.expression, 0)
            if S.is_empty():
                continue
            S = scale_shift(piece.m, S, piece.d)
            parts.append(oplus(S, piece.congruences))
        out = simplify(union_all(E.variables, parts)) if parts else SemilinearSet.empty(E.variables)
        self.stats.timings["normalize"] = self.stats.timings.get("normalize", 0) + t1 - t0
        self.stats.timings["solve"] = self.stats.timings.get("solve", 0) + time.perf_counter() - t1
        return out

    def solve_qg(self, E: KnapsackExpression, level: int) -> SemilinearSet:
        """Solve an expression whose powers all have geodesic-power bases of infinite order."""
        self.stats.max_recursion = max(self.stats.max_recursion, level)
        P, back = _positional(E)
        key = (P.factors, P.constant)
        if key in self._cache:
            self.stats.cache_hits += 1
            return rename(self._cache[key], back)
        S = self._solve_qg(P, level)
        self._cache[key] = S
        return rename(S, back)

    def _solve_qg(self, E: KnapsackExpression, level: int) -> SemilinearSet:
        k = E.depth
        if k == 0:
            return SemilinearSet.universe(()) if self.is_trivial(E.constant) else SemilinearSet.empty(())
        if k == 1:
            (u, x, v), = E.factors
            return self.solve_depth1(u, v, x)
        if k == 2:
            (u1, x, v1), (u2, y, v2) = E.factors
            # u1^x v1 u2^y v2 = 1  <=>  v1 u2^y = (u1^-1)^x v2^-1
            return self.solve_depth2(v1, u2, inverse_word(u1), inverse_word(v2), (y, x))
        F = positivity_split(E)

        def sub(Ei: KnapsackExpression) -> SemilinearSet:
            if Ei.depth < k:
                return self.solve_qg(Ei, level + 1)
            return self._solve_all_positive(Ei, level + 1)

        return simplify(eval_formula(F, sub))

    def _solve_all_positive(self, E: KnapsackExpression, level: int) -> SemilinearSet:
        # move a longest base to the second position, then cut along it
        k = E.depth
        j = max(range(k), key=lambda i: (len(E.factors[i][0]), -i))
        R = E.rotate((j - 1) % k)
        h = self.C.h(k)
        F = split_polygon(self.spec, R, h)
        self.stats.cases.update(F.case_counts())
        parts = []
        for conj in F.disjuncts:
            S = eval_conjunct(conj, F.variables, lambda Ei: self.solve_qg(Ei, level + 1))
            if not S.is_empty():
                parts.append(S)
        return simplify(union_all(E.variables, parts))


# -- group dispatch -------------------------------------------------------------

_solvers: dict = {}


def solver_for(spec: GroupSpec) -> HyperbolicSolver:
    key = (id(spec), spec)
    if key not in _solvers:
        _solvers[key] = HyperbolicSolver(spec)
    return _solvers[key]


def supports_solve(spec: GroupSpec) -> bool:
    if isinstance(spec, DirectProductZ):
        return supports_solve(spec.inner)
    return spec.hyperbolic


def z_projection(spec: DirectProductZ, E: KnapsackExpression):
    """``(E_G, coefficients, constant)``: the ``G`` part and the linear equation on ``Z`` exponents."""
    proj = spec.project_inner
    EG = KnapsackExpression(tuple((proj(u), x, proj(v)) for u, x, v in E.factors), proj(E.constant))
    coeffs = {x: spec.z_exponent(u) for u, x, _ in E.factors}
    const = sum(spec.z_exponent(v) for _, _, v in E.factors) + spec.z_exponent(E.constant)
    return EG, coeffs, const


def solve(spec: GroupSpec, E: ExponentExpression) -> SemilinearSet:
    E = as_knapsack(E)
    spec.check_word(E.word({x: 1 for x in E.variables}))
    if isinstance(spec, DirectProductZ):
        EG, coeffs, const = z_projection(spec, E)
        SG = solve(spec.inner, EG)
        if SG.is_empty():
            return SemilinearSet.empty(E.variables)
        lin = linear_equation_set(coeffs, const) if coeffs else (
            SemilinearSet.universe(()) if const == 0 else SemilinearSet.empty(()))
        return simplify(constrain(SG, lin))
    if not spec.hyperbolic:
        raise UnsupportedGroup(f"full solution sets are not available for {spec!r}; use decide with a bound")
    return solver_for(spec).solve(E)


def solve_depth1(spec: GroupSpec, u: Word, v: Word, var: str = "x") -> SemilinearSet:
    return solver_for(spec).solve_depth1(tuple(u), tuple(v), var)


def solve_depth2(spec: GroupSpec, v1: Word, u1: Word, u2: Word, v2: Word, vars=("x1", "x2")) -> SemilinearSet:
    return solver_for(spec).solve_depth2(tuple(v1), tuple(u1), tuple(u2), tuple(v2), tuple(vars))


# -- decision -------------------------------------------------------------------

@dataclass
class Decision:
    answer: bool
    witness: dict | None
    route: str
    bound: int | None = None
    magnitude: int | None = None
    solution: SemilinearSet | None = None


def decide(spec: GroupSpec, E: ExponentExpression, route: str = "auto", bound: int | None = None) -> Decision:
    """Is ``sol(E)`` nonempty?  Witnesses are always re-checked by substitution."""
    from ..oracle import verify

    E = as_knapsack(E)
    if route not in ("a", "b", "auto"):
        raise ValueError("route must be a, b or auto")
    if route == "auto":
        route = "a" if supports_solve(spec) else "b"
    if E.depth == 0:
        ok = verify(spec, E, {})
        return Decision(ok, {} if ok else None, route, bound)
    if route == "a":
        S = solve(spec, E)
        wit = S.smallest_offset()
        if wit is not None and not verify(spec, E, wit):
            raise AssertionError(f"solver produced a non-solution {wit}")
        return Decision(wit is not None, wit, "a", bound, S.magnitude, S)
    if bound is None:
        if supports_solve(spec):
            bound = solve(spec, E).magnitude + 1
        else:
            raise BoundRequired("bound required: pass an exponent bound for this group")
    A = grid_nfa(E, bound)
    res = acyclic_membership(spec, A)
    if not res.accepted:
        return Decision(False, None, "b", bound)
    wit = grid_exponents(E, A, res.path)
    if not verify(spec, E, wit):
        raise AssertionError(f"membership produced a non-solution {wit}")
    return Decision(True, wit, "b", bound)


# -- systems --------------------------------------------------------------------

def solve_system(spec: GroupSpec, exprs: Sequence[ExponentExpression]) -> tuple[bool, dict | None]:
    """Common solution of several exponent expressions (variables may repeat and be shared)."""
    sets = []
    equalities = []
    counter = Counter()
    for E in exprs:
        mapping_facs = []
        for u, x, v in E.factors:
            counter[x] += 1
            name = x if counter[x] == 1 else f"{x}#{counter[x]}"
            if name != x:
                equalities.append((x, name))
            mapping_facs.append((u, name, v))
        KE = KnapsackExpression(tuple(mapping_facs), E.constant)
        sets.append(solve(spec, KE))
    S = SemilinearSet.universe(())
    for T in sets:
        S = constrain(S, T)
        if S.is_empty():
            return False, None
    for x, y in equalities:
        S = constrain(S, linear_equation_set({x: 1, y: -1}, 0))
        if S.is_empty():
            return False, None
    wit = S.smallest_offset()
    return True, {x: n for x, n in wit.items() if "#" not in x}
