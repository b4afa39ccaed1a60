"""Semilinear subsets of N^X over named variables.

A :class:`LinearSet` is ``offset + N*p_1 + ... + N*p_n``; a
:class:`SemilinearSet` is a finite union of linear sets over the same
variables.  Vectors are tuples aligned with the (sorted) variable tuple;
valuations at the API boundary are plain ``{name: value}`` mappings.

Everything here is immutable and canonicalized on construction, so equal
constructions print identically.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .hilbert import minimal_solutions

Vector = tuple[int, ...]
Valuation = Mapping[str, int]


class VariableMismatch(ValueError):
    pass


def _natural_key(name: str):
    return [int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", name)]


def sort_variables(names: Iterable[str]) -> tuple[str, ...]:
    names = tuple(names)
    if len(set(names)) != len(names):
        raise VariableMismatch(f"duplicate variable in {names}")
    return tuple(sorted(names, key=_natural_key))


def _add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def _sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def _leq(u: Vector, v: Vector) -> bool:
    return all(a <= b for a, b in zip(u, v))


@lru_cache(maxsize=200_000)
def in_monoid(w: Vector, periods: tuple[Vector, ...]) -> bool:
    """Is ``w`` a natural combination of ``periods``?  Entries are all >= 0."""
    if not any(w):
        return True
    if not periods:
        return False
    if any(x < 0 for x in w):
        return False
    p, rest = periods[0], periods[1:]
    cur = w
    # each coefficient is bounded by max(w) since every period is nonzero and >= 0
    while True:
        if in_monoid(cur, rest):
            return True
        cur = _sub(cur, p)
        if any(x < 0 for x in cur):
            return False


def _canonical_periods(periods: Iterable[Vector]) -> tuple[Vector, ...]:
    return tuple(sorted({tuple(p) for p in periods if any(p)}))


@dataclass(frozen=True, order=True)
class LinearSet:
    variables: tuple[str, ...]
    offset: Vector
    periods: tuple[Vector, ...] = ()

    def __post_init__(self):
        d = len(self.variables)
        offset = tuple(int(x) for x in self.offset)
        periods = [tuple(int(x) for x in p) for p in self.periods]
        if len(offset) != d or any(len(p) != d for p in periods):
            raise VariableMismatch("vector length does not match the variables")
        if any(x < 0 for x in offset) or any(x < 0 for p in periods for x in p):
            raise ValueError("linear sets live in N^X; negative entry given")
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "periods", _canonical_periods(periods))

    @property
    def magnitude(self) -> int:
        return max(itertools.chain(self.offset, *self.periods), default=0)

    def contains(self, v: Vector) -> bool:
        w = _sub(v, self.offset)
        if any(x < 0 for x in w):
            return False
        return in_monoid(w, self.periods)

    def includes(self, other: LinearSet) -> bool:
        """Sufficient test for ``other`` being a subset of ``self``."""
        return self.contains(other.offset) and all(
            in_monoid(p, self.periods) for p in other.periods
        )

    def box_points(self, bound: int) -> set[Vector]:
        if any(x > bound for x in self.offset):
            return set()
        seen = {self.offset}
        stack = [(self.offset, 0)]
        periods = self.periods
        while stack:
            v, start = stack.pop()
            for i in range(start, len(periods)):
                w = _add(v, periods[i])
                if all(x <= bound for x in w) and w not in seen:
                    seen.add(w)
                    stack.append((w, i))
        return seen

    def format(self) -> str:
        head = format_vector(self.variables, self.offset)
        if not self.periods:
            return head + " |"
        return head + " | " + " ; ".join(format_vector(self.variables, p) for p in self.periods)


class SemilinearSet:
    """Finite union of linear sets with a fixed, sorted variable tuple."""

    __slots__ = ("variables", "components", "_hash")

    def __init__(self, variables: Iterable[str], components: Iterable[LinearSet] = ()):
        self.variables = sort_variables(variables)
        comps = set()
        for c in components:
            if c.variables != self.variables:
                raise VariableMismatch(f"component over {c.variables}, set over {self.variables}")
            comps.add(c)
        self.components: tuple[LinearSet, ...] = tuple(sorted(comps))
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def empty(cls, variables: Iterable[str]) -> SemilinearSet:
        return cls(variables)

    @classmethod
    def universe(cls, variables: Iterable[str]) -> SemilinearSet:
        vs = sort_variables(variables)
        d = len(vs)
        units = [tuple(1 if i == j else 0 for i in range(d)) for j in range(d)]
        return cls(vs, [LinearSet(vs, (0,) * d, tuple(units))])

    @classmethod
    def singleton(cls, valuation: Valuation) -> SemilinearSet:
        vs = sort_variables(valuation)
        return cls(vs, [LinearSet(vs, tuple(valuation[x] for x in vs))])

    @classmethod
    def linear(cls, offset: Valuation, periods: Sequence[Valuation] = ()) -> SemilinearSet:
        vs = sort_variables(offset)
        return cls(vs, [LinearSet(vs, _vec(vs, offset), tuple(_vec(vs, p) for p in periods))])

    @classmethod
    def from_points(cls, variables: Iterable[str], points: Iterable[Vector]) -> SemilinearSet:
        vs = sort_variables(variables)
        return cls(vs, [LinearSet(vs, tuple(p)) for p in points])

    # -- queries ----------------------------------------------------------
    def is_empty(self) -> bool:
        return not self.components

    @property
    def magnitude(self) -> int:
        return max((c.magnitude for c in self.components), default=0)

    def vector(self, valuation: Valuation) -> Vector:
        return _vec(self.variables, valuation)

    def valuation(self, v: Vector) -> dict[str, int]:
        return dict(zip(self.variables, v))

    def __contains__(self, valuation) -> bool:
        return member(self, valuation)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SemilinearSet)
            and self.variables == other.variables
            and self.components == other.components
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, self.components))
        return self._hash

    def __repr__(self):
        return f"SemilinearSet({self.variables}, {len(self.components)} components)"

    def __str__(self):
        return to_text(self)

    def smallest_offset(self) -> dict[str, int] | None:
        if not self.components:
            return None
        best = min((c.offset for c in self.components), key=lambda v: (sum(v), v))
        return self.valuation(best)


def _vec(variables: tuple[str, ...], valuation: Valuation) -> Vector:
    if set(valuation) != set(variables):
        raise VariableMismatch(f"valuation over {sorted(valuation)} for variables {variables}")
    return tuple(int(valuation[x]) for x in variables)


def _require_same(S: SemilinearSet, T: SemilinearSet):
    if S.variables != T.variables:
        raise VariableMismatch(f"{S.variables} vs {T.variables}")


# -- the operations -----------------------------------------------------------

def union(S: SemilinearSet, T: SemilinearSet) -> SemilinearSet:
    _require_same(S, T)
    return SemilinearSet(S.variables, S.components + T.components)


def union_all(variables: Iterable[str], sets: Iterable[SemilinearSet]) -> SemilinearSet:
    vs = sort_variables(variables)
    comps: list[LinearSet] = []
    for S in sets:
        if S.variables != vs:
            raise VariableMismatch(f"{S.variables} vs {vs}")
        comps.extend(S.components)
    return SemilinearSet(vs, comps)


def oplus(S: SemilinearSet, T: SemilinearSet) -> SemilinearSet:
    """Combine sets over disjoint variables: ``{s (+) t}``."""
    if set(S.variables) & set(T.variables):
        raise VariableMismatch(f"oplus needs disjoint variables: {S.variables} / {T.variables}")
    vs = sort_variables(S.variables + T.variables)
    pos_s = [vs.index(x) for x in S.variables]
    pos_t = [vs.index(x) for x in T.variables]
    d = len(vs)

    def lift(v: Vector, pos: list[int]) -> Vector:
        out = [0] * d
        for x, i in zip(v, pos):
            out[i] = x
        return tuple(out)

    comps = []
    for a in S.components:
        for b in T.components:
            offset = _add(lift(a.offset, pos_s), lift(b.offset, pos_t))
            periods = [lift(p, pos_s) for p in a.periods] + [lift(p, pos_t) for p in b.periods]
            comps.append(LinearSet(vs, offset, tuple(periods)))
    return SemilinearSet(vs, comps)


def scale_shift(m: Valuation, S: SemilinearSet, d: Valuation) -> SemilinearSet:
    """Pointwise ``m * s + d`` for every member ``s``; all entries of ``m`` >= 1."""
    mv, dv = _vec(S.variables, m), _vec(S.variables, d)
    if any(x < 1 for x in mv):
        raise ValueError("scale vector must be >= 1 everywhere")
    comps = []
    for c in S.components:
        offset = tuple(a * x + b for a, x, b in zip(mv, c.offset, dv))
        periods = tuple(tuple(a * x for a, x in zip(mv, p)) for p in c.periods)
        comps.append(LinearSet(S.variables, offset, periods))
    return SemilinearSet(S.variables, comps)


def project(S: SemilinearSet, keep: Iterable[str]) -> SemilinearSet:
    keep = set(keep)
    unknown = keep - set(S.variables)
    if unknown:
        raise VariableMismatch(f"unknown variables {sorted(unknown)}")
    vs = sort_variables(keep)
    idx = [S.variables.index(x) for x in vs]
    comps = [
        LinearSet(vs, tuple(c.offset[i] for i in idx), tuple(tuple(p[i] for i in idx) for p in c.periods))
        for c in S.components
    ]
    return SemilinearSet(vs, comps)


def rename(S: SemilinearSet, mapping: Mapping[str, str]) -> SemilinearSet:
    new_names = [mapping.get(x, x) for x in S.variables]
    vs = sort_variables(new_names)
    perm = [new_names.index(x) for x in vs]
    comps = [
        LinearSet(vs, tuple(c.offset[i] for i in perm), tuple(tuple(p[i] for i in perm) for p in c.periods))
        for c in S.components
    ]
    return SemilinearSet(vs, comps)


def _intersect_linear(a: LinearSet, b: LinearSet) -> list[LinearSet]:
    vs = a.variables
    if not a.periods:
        return [a] if b.contains(a.offset) else []
    if not b.periods:
        return [b] if a.contains(b.offset) else []
    # a.offset + P lam = b.offset + Q mu  <=>  P lam - Q mu = b.offset - a.offset
    d = len(vs)
    if d == 0:
        return [a]
    cols = list(a.periods) + [tuple(-x for x in q) for q in b.periods]
    rhs = _sub(b.offset, a.offset)
    particular, homogeneous = minimal_solutions(cols, rhs)
    if not particular:
        return []
    np_ = len(a.periods)

    def image(lam: Vector) -> Vector:
        out = (0,) * d
        for coeff, p in zip(lam[:np_], a.periods):
            if coeff:
                out = tuple(o + coeff * x for o, x in zip(out, p))
        return out

    periods = tuple(image(h) for h in homogeneous)
    return [LinearSet(vs, _add(a.offset, image(m)), periods) for m in particular]


def intersect(S: SemilinearSet, T: SemilinearSet) -> SemilinearSet:
    _require_same(S, T)
    comps = []
    for a in S.components:
        for b in T.components:
            comps.extend(_intersect_linear(a, b))
    return SemilinearSet(S.variables, comps)


def member(S: SemilinearSet, v) -> bool:
    vec = S.vector(v) if isinstance(v, Mapping) else tuple(v)
    return any(c.contains(vec) for c in S.components)


def magnitude(S: SemilinearSet) -> int:
    return S.magnitude


def enumerate_box(S: SemilinearSet, bound: int) -> set[Vector]:
    """All members with every coordinate ``<= bound``, as vectors over ``S.variables``."""
    if bound < 0:
        raise ValueError("box bound must be >= 0")
    out: set[Vector] = set()
    for c in S.components:
        out |= c.box_points(bound)
    return out


# -- derived constructions used by the solver ---------------------------------

def restrict_positive(S: SemilinearSet, var: str) -> SemilinearSet:
    """Members with ``var >= 1``."""
    i = S.variables.index(var)
    comps = []
    for c in S.components:
        if c.offset[i] >= 1:
            comps.append(c)
            continue
        for p in c.periods:
            if p[i] >= 1:
                comps.append(LinearSet(S.variables, _add(c.offset, p), c.periods))
    return SemilinearSet(S.variables, comps)


def restrict_zero(S: SemilinearSet, var: str) -> SemilinearSet:
    """Members with ``var == 0``."""
    i = S.variables.index(var)
    comps = [
        LinearSet(S.variables, c.offset, tuple(p for p in c.periods if p[i] == 0))
        for c in S.components
        if c.offset[i] == 0
    ]
    return SemilinearSet(S.variables, comps)


def extend_affine(S: SemilinearSet, new_var: str, parts: Sequence[str], constant: int) -> SemilinearSet:
    """Add coordinate ``new_var = sum(parts) + constant`` (``new_var`` must be fresh)."""
    if new_var in S.variables:
        raise VariableMismatch(f"{new_var} already present")
    idx = [S.variables.index(x) for x in parts]
    vs = sort_variables(S.variables + (new_var,))
    at = vs.index(new_var)

    def ext(v: Vector, c: int) -> Vector:
        val = sum(v[i] for i in idx) + c
        return v[:at] + (val,) + v[at:]

    comps = [LinearSet(vs, ext(c.offset, constant), tuple(ext(p, 0) for p in c.periods)) for c in S.components]
    return SemilinearSet(vs, comps)


def congruence_set(var: str, residue: int, modulus: int) -> SemilinearSet:
    """``{var = residue + modulus * n}`` with ``0 <= residue < modulus``."""
    if modulus < 1 or not 0 <= residue < modulus:
        raise ValueError("need 0 <= residue < modulus")
    return SemilinearSet.linear({var: residue}, [{var: modulus}])


def link_set(total: str, left: str, right: str) -> SemilinearSet:
    """``{total = left + right + 1}``."""
    return SemilinearSet.linear(
        {total: 1, left: 0, right: 0},
        [{total: 1, left: 1, right: 0}, {total: 1, left: 0, right: 1}],
    )


def linear_equation_set(coefficients: Mapping[str, int], constant: int) -> SemilinearSet:
    """Natural solutions of ``sum a_x * x + constant = 0``."""
    vs = sort_variables(coefficients)
    if not vs:
        return SemilinearSet.universe(()) if constant == 0 else SemilinearSet.empty(())
    cols = [(coefficients[x],) for x in vs]
    particular, homogeneous = minimal_solutions(cols, (-constant,))
    return SemilinearSet(vs, [LinearSet(vs, m, tuple(homogeneous)) for m in particular])


def _absorb(comps: set[LinearSet]) -> set[LinearSet]:
    """Merge ``q + N(P - {p})`` into ``q + p + NP``, giving ``q + NP``; exact, repeated to a fixpoint."""
    work = list(comps)
    while work:
        c = work.pop()
        if c not in comps:
            continue
        for p in c.periods:
            q = _sub(c.offset, p)
            if any(x < 0 for x in q):
                continue
            part = LinearSet(c.variables, q, tuple(r for r in c.periods if r != p))
            if part in comps:
                comps.discard(part)
                comps.discard(c)
                merged = LinearSet(c.variables, q, c.periods)
                comps.add(merged)
                work.append(merged)
                break
    return comps


def simplify(S: SemilinearSet) -> SemilinearSet:
    """Drop periods generated by the others and components contained in others.

    Same set of members; the magnitude may only go down.
    """
    reduced = []
    for c in S.components:
        periods = list(c.periods)
        i = 0
        while i < len(periods):
            others = tuple(periods[:i] + periods[i + 1:])
            if in_monoid(periods[i], others):
                periods.pop(i)
            else:
                i += 1
        reduced.append(LinearSet(S.variables, c.offset, tuple(periods)))
    reduced = sorted(_absorb(set(reduced)), key=lambda c: (-len(c.periods), c.magnitude, c))
    kept: list[LinearSet] = []
    for c in reduced:
        if not any(k.includes(c) for k in kept):
            kept.append(c)
    return SemilinearSet(S.variables, kept)


# -- text format --------------------------------------------------------------

def format_vector(variables: Sequence[str], v: Vector) -> str:
    if not variables:
        return "()"
    return ",".join(f"{x}={n}" for x, n in zip(variables, v))


def _parse_vector(variables: tuple[str, ...], text: str) -> Vector:
    text = text.strip()
    if text == "()":
        if variables:
            raise ValueError("empty vector for a nonempty variable set")
        return ()
    vals = {}
    for item in text.split(","):
        name, _, num = item.partition("=")
        vals[name.strip()] = int(num)
    return _vec(variables, vals)


def to_text(S: SemilinearSet) -> str:
    lines = ["variables: " + ",".join(S.variables)]
    lines.extend(c.format() for c in S.components)
    return "\n".join(lines) + "\n"


def from_text(text: str) -> SemilinearSet:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or not lines[0].startswith("variables:"):
        raise ValueError("semilinear text must start with a 'variables:' header")
    header = lines[0][len("variables:"):].strip()
    vs = sort_variables(x.strip() for x in header.split(",") if x.strip())
    comps = []
    for ln in lines[1:]:
        off, _, rest = ln.partition("|")
        periods = [_parse_vector(vs, p) for p in rest.split(";") if p.strip()]
        comps.append(LinearSet(vs, _parse_vector(vs, off), tuple(periods)))
    return SemilinearSet(vs, comps)
