"""Group backends: free groups, finite groups given by tables, G x Z and G * H.

Words are tuples of nonzero ints: letter ``i`` is generator ``i`` (1-based)
and ``-i`` its inverse.  The fixed order on the symmetric alphabet is
``g1 < g1^-1 < g2 < g2^-1 < ...``; for composite groups the generator list is
the concatenation of the factors' lists, so the order is too.

Every backend also exposes an *element* representation (hashable, canonical)
that the automata and solver code fold words into.
"""
from __future__ import annotations

import math
import re
import string
from collections import deque
from dataclasses import dataclass, replace
from functools import cached_property
from pathlib import Path
from typing import Hashable, Iterable, Sequence

import numpy as np

Word = tuple[int, ...]
INFINITE = math.inf
DEFAULT_BALL_CAP = 10**6


class AlphabetError(ValueError):
    pass


class BallCapExceeded(RuntimeError):
    pass


class UnsupportedGroup(ValueError):
    pass


def inverse_word(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def letter_key(letter: int) -> int:
    return 2 * (abs(letter) - 1) + (letter < 0)


def shortlex_key(w: Sequence[int]):
    return (len(w), tuple(letter_key(x) for x in w))


class GroupSpec:
    """Base class of the group term tree."""

    kind = "abstract"
    generators: tuple[str, ...] = ()

    # -- alphabet ----------------------------------------------------------
    @cached_property
    def letters(self) -> tuple[int, ...]:
        n = len(self.generators)
        return tuple(sorted([i for i in range(1, n + 1)] + [-i for i in range(1, n + 1)], key=letter_key))

    def check_word(self, w: Sequence[int]) -> Word:
        n = len(self.generators)
        for x in w:
            if not isinstance(x, (int, np.integer)) or x == 0 or abs(x) > n:
                raise AlphabetError(f"letter {x!r} is not in the alphabet of {self}")
        return tuple(int(x) for x in w)

    def letter_name(self, x: int) -> str:
        name = self.generators[abs(x) - 1]
        return name if x > 0 else name + "^-1"

    def format_word(self, w: Sequence[int]) -> str:
        return " ".join(self.letter_name(x) for x in w) if w else "1"

    def generator_index(self, name: str) -> int:
        try:
            return self.generators.index(name) + 1
        except ValueError:
            raise AlphabetError(f"unknown generator {name!r} for {self}") from None

    def parse_word(self, text: str) -> Word:
        out: list[int] = []
        for tok in text.split():
            if tok in ("1", "e", "ε"):
                continue
            m = re.fullmatch(r"([A-Za-z_][\w.]*)(?:\^(-?\d+))?", tok)
            if not m:
                raise AlphabetError(f"cannot parse letter {tok!r}")
            g = self.generator_index(m.group(1))
            e = int(m.group(2) or 1)
            out.extend([g if e > 0 else -g] * abs(e))
        return tuple(out)

    # -- elements (overridden) ---------------------------------------------
    @property
    def identity(self) -> Hashable:
        raise NotImplementedError

    def mul_letter(self, e, x: int):
        raise NotImplementedError

    def to_word(self, e) -> Word:
        """Shortlex representative of an element."""
        raise NotImplementedError

    def length(self, e) -> int:
        return len(self.to_word(e))

    def mul_word(self, e, w: Iterable[int]):
        for x in w:
            e = self.mul_letter(e, x)
        return e

    def mul(self, e, f):
        return self.mul_word(e, self.to_word(f))

    def inverse(self, e):
        return self.element(inverse_word(self.to_word(e)))

    def element(self, w: Iterable[int]):
        return self.mul_word(self.identity, w)

    def is_identity(self, e) -> bool:
        return e == self.identity

    def element_order(self, e, cap: int = 10_000):
        raise NotImplementedError

    def accumulator(self, start=None) -> Accumulator:
        return Accumulator(self, self.identity if start is None else start)

    def power_hits(self, u: Word, targets: Iterable, upto: int) -> dict:
        """``{t: n}`` with ``n <= upto`` least such that ``u^n = t``, for those targets that are hit."""
        todo = set(targets)
        lengths = {self.length(t) for t in todo}
        out = {}
        acc = self.accumulator()
        for n in range(upto + 1):
            if not todo:
                break
            if acc.length() in lengths:
                v = acc.value()
                if v in todo:
                    out[v] = n
                    todo.discard(v)
            acc.push(u)
        return out

    # -- geometry ------------------------------------------------------------
    @property
    def hyperbolic(self) -> bool:
        return False

    def delta(self) -> int:
        raise UnsupportedGroup(f"{self} is not handled as a hyperbolic backend")

    def ball_elements(self, r: int, cap: int = DEFAULT_BALL_CAP) -> list:
        """Elements within distance r, in shortlex order of their representatives."""
        frontier = [self.identity]
        seen = {self.identity}
        out = [self.identity]
        for _ in range(r):
            nxt = []
            for e in frontier:
                for x in self.letters:
                    f = self.mul_letter(e, x)
                    if f not in seen:
                        seen.add(f)
                        nxt.append(f)
                        if len(seen) > cap:
                            raise BallCapExceeded(f"ball of radius {r} exceeds {cap} elements")
            if not nxt:
                break
            out.extend(nxt)
            frontier = nxt
        return sorted(out, key=lambda e: shortlex_key(self.to_word(e)))


class Accumulator:
    """Running product ``start * w_1 * w_2 ...`` with cheap length queries."""

    def __init__(self, spec: GroupSpec, start):
        self.spec = spec
        self.e = start

    def push(self, w: Iterable[int]):
        self.e = self.spec.mul_word(self.e, w)

    def length(self) -> int:
        return self.spec.length(self.e)

    def value(self):
        return self.e


class _FreeAccumulator(Accumulator):
    def __init__(self, spec, start):
        self.spec = spec
        self.stack = list(start)

    def push(self, w):
        s = self.stack
        for x in w:
            if s and s[-1] == -x:
                s.pop()
            else:
                s.append(x)

    def length(self):
        return len(self.stack)

    def value(self):
        return tuple(self.stack)


class _FreeProductAccumulator(Accumulator):
    def __init__(self, spec, start):
        self.spec = spec
        self.syl = list(start)
        self.total = spec.length(start)

    def push(self, w):
        spec, syl = self.spec, self.syl
        for x in w:
            side, y = spec.split_letter(x)
            G = spec.factor(side)
            before = G.length(syl[-1][1]) if syl and syl[-1][0] == side else 0
            spec._push(syl, side, G.mul_letter(G.identity, y))
            after = G.length(syl[-1][1]) if syl and syl[-1][0] == side else 0
            self.total += after - before

    def length(self):
        return self.total

    def value(self):
        return tuple(self.syl)


# ---------------------------------------------------------------------------

class FreeGroup(GroupSpec):
    kind = "free"

    def __init__(self, rank: int, names: Sequence[str] | None = None):
        if rank < 1:
            raise ValueError("free group rank must be >= 1")
        self.rank = rank
        if names is None:
            names = string.ascii_lowercase[:rank] if rank <= 26 else [f"g{i}" for i in range(1, rank + 1)]
        self.generators = tuple(names)

    def __repr__(self):
        return "Z" if self.rank == 1 else f"F{self.rank}"

    def __eq__(self, other):
        return isinstance(other, FreeGroup) and other.generators == self.generators

    def __hash__(self):
        return hash(("free", self.generators))

    identity = ()

    def mul_letter(self, e, x):
        if e and e[-1] == -x:
            return e[:-1]
        return e + (x,)

    def mul_word(self, e, w):
        s = list(e)
        for x in w:
            if s and s[-1] == -x:
                s.pop()
            else:
                s.append(x)
        return tuple(s)

    def mul(self, e, f):
        # both reduced: cancellation only happens at the junction
        i, n = 0, min(len(e), len(f))
        while i < n and e[-1 - i] == -f[i]:
            i += 1
        return e[:len(e) - i] + f[i:]

    def inverse(self, e):
        return inverse_word(e)

    def to_word(self, e):
        return e

    def length(self, e):
        return len(e)

    def element_order(self, e, cap=10_000):
        return 1 if not e else INFINITE

    def accumulator(self, start=None):
        return _FreeAccumulator(self, () if start is None else start)

    def power_hits(self, u, targets, upto):
        # u = c w c^-1 with w cyclically reduced; then u^n reduces to c w^n c^-1 verbatim
        u = self.element(u)
        i = 0
        while len(u) - 2 * i > 1 and u[i] == -u[-1 - i]:
            i += 1
        c, w = u[:i], u[i:len(u) - i]
        out = {}
        for t in targets:
            if not t:
                out[t] = 0
                continue
            if not w:
                continue
            rest = len(t) - 2 * len(c)
            if rest <= 0 or rest % len(w):
                continue
            n = rest // len(w)
            if n <= upto and t == c + w * n + inverse_word(c):
                out[t] = n
        return out

    @property
    def hyperbolic(self):
        return True

    def delta(self):
        return 0

    def ball_elements(self, r, cap=DEFAULT_BALL_CAP):
        size = 1 + sum(2 * self.rank * (2 * self.rank - 1) ** (i - 1) for i in range(1, r + 1))
        if size > cap:
            raise BallCapExceeded(f"ball of radius {r} has {size} > {cap} elements")
        out = [()]
        layer = [()]
        for _ in range(r):
            layer = [w + (x,) for w in layer for x in self.letters if not (w and w[-1] == -x)]
            out.extend(layer)
        return sorted(out, key=shortlex_key)


class FiniteGroup(GroupSpec):
    """Finite group from a multiplication table; every non-identity element is a generator."""

    kind = "finite"

    def __init__(self, table, names: Sequence[str], identity: int = 0, inverses: Sequence[int] | None = None,
                 source: str | None = None):
        T = np.asarray(table, dtype=np.int64)
        n = len(names)
        if T.shape != (n, n):
            raise ValueError(f"table shape {T.shape} does not match {n} element names")
        if T.min() < 0 or T.max() >= n:
            raise ValueError("table entry out of range")
        ar = np.arange(n)
        if not (np.array_equal(T[identity, :], ar) and np.array_equal(T[:, identity], ar)):
            raise ValueError(f"element {names[identity]!r} is not an identity")
        if not np.array_equal(T[T], T[:, T]):
            raise ValueError("multiplication table is not associative")
        inv = np.full(n, -1)
        for i in range(n):
            hits = np.nonzero(T[i, :] == identity)[0]
            if len(hits) != 1 or T[hits[0], i] != identity:
                raise ValueError(f"element {names[i]!r} has no two-sided inverse")
            inv[i] = hits[0]
        if inverses is not None and list(inverses) != inv.tolist():
            raise ValueError("inverse map does not match the table")
        self.table = T
        self.names = tuple(names)
        self.identity_index = identity
        self.inverse_map = tuple(int(i) for i in inv)
        self.gens = tuple(i for i in range(n) if i != identity)
        self.generators = tuple(self.names[i] for i in self.gens)
        self.source = source
        self._mul = [list(map(int, row)) for row in T]

    def __repr__(self):
        return f"finite:{self.source}" if self.source else f"Finite({len(self.names)})"

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and np.array_equal(self.table, other.table) and self.names == other.names

    def __hash__(self):
        return hash(("finite", self.names))

    @classmethod
    def from_file(cls, path: str | Path) -> FiniteGroup:
        """Rows of comma-separated element symbols; the identity row and column come first."""
        path = Path(path)
        rows = []
        for line in path.read_text().splitlines():
            line = line.strip()
            if line and not line.startswith("#"):
                rows.append([s.strip() for s in line.split(",")])
        names = [r[0] for r in rows]
        if rows and rows[0] != names:
            raise ValueError(f"{path}: first row must be the identity row, matching the first column")
        index = {s: i for i, s in enumerate(names)}
        try:
            table = [[index[s] for s in r] for r in rows]
        except KeyError as exc:
            raise ValueError(f"{path}: unknown symbol {exc}") from None
        return cls(table, names, 0, source=str(path.name))

    @classmethod
    def cyclic(cls, n: int, name: str = "a") -> FiniteGroup:
        names = ["e"] + [name if k == 1 else f"{name}{k}" for k in range(1, n)]
        table = [[(i + j) % n for j in range(n)] for i in range(n)]
        return cls(table, names, 0, source=f"Z{n}")

    @property
    def identity(self):
        return self.identity_index

    def letter_element(self, x: int) -> int:
        g = self.gens[abs(x) - 1]
        return g if x > 0 else self.inverse_map[g]

    def mul_letter(self, e, x):
        return self._mul[e][self.letter_element(x)]

    def mul(self, e, f):
        return self._mul[e][f]

    def inverse(self, e):
        return self.inverse_map[e]

    @cached_property
    def _bfs(self):
        """Shortlex representative of every element, layer by layer."""
        reps = {self.identity_index: ()}
        layer = [self.identity_index]
        while layer:
            nxt = []
            for g in layer:  # layer is in shortlex order of representatives
                for x in self.letters:
                    h = self._mul[g][self.letter_element(x)]
                    if h not in reps:
                        reps[h] = reps[g] + (x,)
                        nxt.append(h)
            layer = nxt
        return reps

    def to_word(self, e):
        return self._bfs[e]

    def length(self, e):
        return len(self._bfs[e])

    def element_order(self, e, cap=10_000):
        f, n = e, 1
        while f != self.identity_index:
            f = self._mul[f][e]
            n += 1
        return n

    @property
    def hyperbolic(self):
        return True

    def delta(self):
        # every geodesic triangle is diameter-slim
        return max(len(w) for w in self._bfs.values())


class DirectProductZ(GroupSpec):
    """``G x Z``; the Z generator is appended after the inner generators."""

    kind = "direct_z"

    def __init__(self, inner: GroupSpec, name: str | None = None):
        self.inner = inner
        if name is None:
            name = "t"
            k = 2
            while name in inner.generators:
                name = f"t{k}"
                k += 1
        self.generators = inner.generators + (name,)
        self.t = len(self.generators)

    def __repr__(self):
        return f"({self.inner!r}) x Z"

    def __eq__(self, other):
        return isinstance(other, DirectProductZ) and other.inner == self.inner and other.generators == self.generators

    def __hash__(self):
        return hash(("direct_z", self.inner))

    @property
    def identity(self):
        return (self.inner.identity, 0)

    def mul_letter(self, e, x):
        g, z = e
        if abs(x) == self.t:
            return (g, z + (1 if x > 0 else -1))
        return (self.inner.mul_letter(g, x), z)

    def mul_word(self, e, w):
        g, z = e
        inner = []
        for x in w:
            if abs(x) == self.t:
                z += 1 if x > 0 else -1
            else:
                inner.append(x)
        return (self.inner.mul_word(g, inner), z)

    def mul(self, e, f):
        return (self.inner.mul(e[0], f[0]), e[1] + f[1])

    def inverse(self, e):
        return (self.inner.inverse(e[0]), -e[1])

    def to_word(self, e):
        g, z = e
        t = self.t if z >= 0 else -self.t
        return self.inner.to_word(g) + (t,) * abs(z)

    def length(self, e):
        return self.inner.length(e[0]) + abs(e[1])

    def element_order(self, e, cap=10_000):
        if e[1] != 0:
            return INFINITE
        return self.inner.element_order(e[0], cap)

    def project_inner(self, w: Sequence[int]) -> Word:
        return tuple(x for x in w if abs(x) != self.t)

    def z_exponent(self, w: Sequence[int]) -> int:
        return sum((1 if x > 0 else -1) for x in w if abs(x) == self.t)


class FreeProduct(GroupSpec):
    """``G * H``; generators are tagged ``left.`` / ``right.``."""

    kind = "free_product"

    def __init__(self, left: GroupSpec, right: GroupSpec):
        self.left, self.right = left, right
        self.n_left = len(left.generators)
        self.generators = tuple("left." + g for g in left.generators) + tuple("right." + g for g in right.generators)

    def __repr__(self):
        return f"({self.left!r}) * ({self.right!r})"

    def __eq__(self, other):
        return isinstance(other, FreeProduct) and other.left == self.left and other.right == self.right

    def __hash__(self):
        return hash(("free_product", self.left, self.right))

    def factor(self, side: int) -> GroupSpec:
        return self.left if side == 0 else self.right

    def split_letter(self, x: int) -> tuple[int, int]:
        a = abs(x)
        s = 1 if x > 0 else -1
        if a <= self.n_left:
            return 0, x
        return 1, s * (a - self.n_left)

    def join_letter(self, side: int, x: int) -> int:
        if side == 0:
            return x
        return x + self.n_left if x > 0 else x - self.n_left

    identity = ()

    def _push(self, syl: list, side: int, f):
        """Multiply the syllable stack on the right by factor element ``f``."""
        G = self.factor(side)
        if G.is_identity(f):
            return
        if syl and syl[-1][0] == side:
            g = G.mul(syl[-1][1], f)
            if G.is_identity(g):
                syl.pop()
            else:
                syl[-1] = (side, g)
        else:
            syl.append((side, f))

    def mul_letter(self, e, x):
        return self.mul_word(e, (x,))

    def accumulator(self, start=None):
        return _FreeProductAccumulator(self, () if start is None else start)

    def power_hits(self, u, targets, upto):
        # u = c w c^-1 with w cyclically reduced (first and last syllables in
        # different factors, or a single syllable); compare c^-1 t c with w^n
        syl = list(self.element(u))
        c: list = []
        while len(syl) >= 2 and syl[0][0] == syl[-1][0]:
            side, g = syl[0]
            G = self.factor(side)
            c.append(syl[0])
            last = G.mul(syl[-1][1], g)
            syl = syl[1:-1]
            if not G.is_identity(last):
                self._push(syl, side, last)
                break
        c, w = tuple(c), tuple(syl)
        cinv = self.inverse(c)
        out = {}
        if len(w) == 1:
            side, g = w[0]
            G = self.factor(side)
            inner = {}
            for t in targets:
                t2 = self.mul(self.mul(cinv, t), c)
                if not t2:
                    out[t] = 0
                elif len(t2) == 1 and t2[0][0] == side:
                    inner.setdefault(t2[0][1], []).append(t)
            for g2, n in G.power_hits(G.to_word(g), inner, upto).items():
                for t in inner[g2]:
                    out[t] = n
            return out
        for t in targets:
            t2 = self.mul(self.mul(cinv, t), c)
            if not t2:
                out[t] = 0
            elif w and len(t2) % len(w) == 0 and len(t2) // len(w) <= upto and t2 == w * (len(t2) // len(w)):
                out[t] = len(t2) // len(w)
        return out

    def mul_word(self, e, w):
        syl = list(e)
        for x in w:
            side, y = self.split_letter(x)
            G = self.factor(side)
            self._push(syl, side, G.mul_letter(G.identity, y))
        return tuple(syl)

    def mul(self, e, f):
        # both in normal form: only the junction can merge or cancel
        syl = list(e)
        for i, (side, g) in enumerate(f):
            if not syl or syl[-1][0] != side:
                syl.extend(f[i:])
                break
            G = self.factor(side)
            h = G.mul(syl[-1][1], g)
            if G.is_identity(h):
                syl.pop()
                continue
            syl[-1] = (side, h)
            syl.extend(f[i + 1:])
            break
        return tuple(syl)

    def inverse(self, e):
        return tuple((side, self.factor(side).inverse(g)) for side, g in reversed(e))

    def to_word(self, e):
        out: list[int] = []
        for side, g in e:
            out.extend(self.join_letter(side, x) for x in self.factor(side).to_word(g))
        return tuple(out)

    def length(self, e):
        return sum(self.factor(side).length(g) for side, g in e)

    def element_order(self, e, cap=10_000):
        syl = list(e)
        steps = 0
        while len(syl) >= 2 and syl[0][0] == syl[-1][0]:
            side = syl[0][0]
            G = self.factor(side)
            g = G.mul(syl[-1][1], syl[0][1])
            syl = syl[1:-1]
            if not G.is_identity(g):
                syl.append((side, g))
            steps += 1
            if steps > cap:
                raise RuntimeError("cyclic reduction did not terminate; backend bug")
        if not syl:
            return 1
        if len(syl) == 1:
            side, g = syl[0]
            return self.factor(side).element_order(g, cap)
        return INFINITE

    @property
    def hyperbolic(self):
        return self.left.hyperbolic and self.right.hyperbolic

    def delta(self):
        if not self.hyperbolic:
            raise UnsupportedGroup(f"{self} has a non-hyperbolic factor")
        # the Cayley graph is a tree of copies of the factors' graphs
        return max(self.left.delta(), self.right.delta())


# -- spec-level operations ------------------------------------------------------

def word_problem(spec: GroupSpec, w: Sequence[int]) -> bool:
    w = spec.check_word(w)
    return spec.is_identity(spec.element(w))


def shortlex_reduce(spec: GroupSpec, w: Sequence[int]) -> Word:
    w = spec.check_word(w)
    return spec.to_word(spec.element(w))


def geodesic_length(spec: GroupSpec, w: Sequence[int]) -> int:
    return spec.length(spec.element(spec.check_word(w)))


def order_of(spec: GroupSpec, w: Sequence[int], cap: int = 10_000):
    """Least ``n >= 1`` with ``w^n = 1``, or ``math.inf``."""
    return spec.element_order(spec.element(spec.check_word(w)), cap)


def ball(spec: GroupSpec, r: int, cap: int = DEFAULT_BALL_CAP) -> list[Word]:
    """Shortlex representatives of all elements at distance at most ``r``."""
    return [spec.to_word(e) for e in spec.ball_elements(r, cap)]


def is_local_quasigeodesic(spec: GroupSpec, w: Sequence[int], lam: float, eps: float, zeta=INFINITE) -> bool:
    w = spec.check_word(w)
    n = len(w)
    for a in range(n):
        e = spec.identity
        for b in range(a + 1, n + 1):
            if b - a > zeta:
                break
            e = spec.mul_letter(e, w[b - 1])
            if b - a > lam * spec.length(e) + eps:
                return False
    return True


def is_geodesic(spec: GroupSpec, w: Sequence[int]) -> bool:
    return geodesic_length(spec, w) == len(w)


# -- constants --------------------------------------------------------------------

@dataclass(frozen=True)
class HyperbolicConstants:
    delta: int
    N: int
    lambda_: int
    epsilon: int
    L: int
    K_EH: int
    kappa: int
    gamma: int
    xi: int
    h_override: int | None = None

    def h(self, depth: int) -> int:
        """Neighbourhood radius used when cutting a 2k-gon with ``k = depth``."""
        if self.h_override is not None:
            return self.h_override
        return self.xi + math.ceil(self.xi * math.log2(2 * depth))

    def for_word(self, g_len: int) -> tuple[int, int]:
        return constants_for_word(self, g_len)


def constants_for_word(C: HyperbolicConstants, g_len: int) -> tuple[int, int]:
    """Quasigeodesicity constants of ``u^n`` for a geodesic ``u`` of length ``g_len`` and infinite order."""
    lam = C.N * g_len
    eps = 2 * C.N**2 * g_len**2 + 2 * C.N * g_len
    return lam, eps


def constants(spec: GroupSpec, overrides: dict | None = None) -> HyperbolicConstants:
    from .config import backend_settings

    if not spec.hyperbolic or isinstance(spec, DirectProductZ):
        raise UnsupportedGroup(f"{spec!r} is composite; no geometric constants")
    d = spec.delta()
    N = len(spec.ball_elements(2 * d))
    K = len(spec.ball_elements(4 * d)) ** 2
    L = 34 * d + 2
    lam = N * (2 * L + 1)
    eps = 2 * N**2 * (2 * L + 1) ** 2 + 2 * N * (2 * L + 1)
    cfg = backend_settings(spec.kind)
    if overrides:
        cfg.update(overrides)
    kappa = int(cfg["kappa"])
    gamma = max(int(cfg["gamma"]), 2 * d + 2 * kappa)
    return HyperbolicConstants(d, N, lam, eps, L, K, kappa, gamma, int(cfg["xi"]), cfg.get("h"))


# -- group spec text format ---------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\()|(\))|(\*)|(x)(?![\w:])|(F\d+)|(Z)(?![\w:])|finite:([^\s()]+))")


def parse_group(text: str, base_dir: str | Path | None = None) -> GroupSpec:
    """Parse ``F2``, ``Z``, ``finite:<file>``, ``(S) x Z`` and ``(S) * (T)``."""
    base = Path(base_dir) if base_dir is not None else Path.cwd()
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad group spec at position {pos}: {text[pos:]!r}")
        kind = m.lastindex
        toks.append((kind, m.group(kind), pos))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1

    i = 0

    def atom():
        nonlocal i
        if i >= len(toks):
            raise ValueError("unexpected end of group spec")
        kind, val, p = toks[i]
        i += 1
        if kind == 1:
            g = expr()
            if i >= len(toks) or toks[i][0] != 2:
                raise ValueError(f"missing ')' for '(' at position {p}")
            i += 1
            return g
        if kind == 5:
            return FreeGroup(int(val[1:]))
        if kind == 6:
            return FreeGroup(1)
        if kind == 7:
            path = Path(val)
            return FiniteGroup.from_file(path if path.is_absolute() else base / path)
        raise ValueError(f"unexpected {val!r} at position {p}")

    def expr():
        nonlocal i
        g = atom()
        while i < len(toks) and toks[i][0] in (3, 4):
            kind, _, p = toks[i]
            i += 1
            if kind == 4:
                if i >= len(toks) or toks[i][0] != 6:
                    raise ValueError(f"'x' must be followed by Z (position {p})")
                i += 1
                g = DirectProductZ(g)
            else:
                g = FreeProduct(g, atom())
        return g

    g = expr()
    if i != len(toks):
        raise ValueError(f"trailing input in group spec at position {toks[i][2]}")
    return g
