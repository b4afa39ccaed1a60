"""Exponent expressions ``u_1^{x_1} v_1 ... u_k^{x_k} v_k`` and their text syntax."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from ..groups import GroupSpec, Word, inverse_word

Factor = tuple[Word, str, Word]


class ExpressionSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class RepeatedVariable(ValueError):
    pass


@dataclass(frozen=True)
class ExponentExpression:
    """Powers ``(u, x, v)`` read left to right.

    ``constant`` is only used by expressions without powers; with at least
    one power any leading constant is rotated onto the last ``v``, which
    does not change whether the product is trivial.
    """

    factors: tuple[Factor, ...]
    constant: Word = ()

    def __post_init__(self):
        facs = tuple((tuple(u), str(x), tuple(v)) for u, x, v in self.factors)
        object.__setattr__(self, "factors", facs)
        object.__setattr__(self, "constant", tuple(self.constant))
        if facs and self.constant:
            raise ValueError("constant part is only allowed without powers; use from_parts")

    @classmethod
    def from_parts(cls, head: Sequence[int], factors: Iterable[Factor]):
        facs = [(tuple(u), x, tuple(v)) for u, x, v in factors]
        head = tuple(head)
        if not facs:
            return cls((), head)
        u, x, v = facs[-1]
        facs[-1] = (u, x, v + head)
        return cls(tuple(facs))

    @property
    def depth(self) -> int:
        return len(self.factors)

    @property
    def size(self) -> int:
        return sum(len(u) + len(v) for u, _, v in self.factors) + len(self.constant)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(x for _, x, _ in self.factors)

    @property
    def is_knapsack(self) -> bool:
        return len(set(self.variables)) == len(self.variables)

    def word(self, valuation: Mapping[str, int]) -> Word:
        out: list[int] = []
        for u, x, v in self.factors:
            if x not in valuation:
                raise KeyError(f"no value for variable {x}")
            n = valuation[x]
            if n < 0:
                raise ValueError(f"negative value for {x}")
            out.extend(u * n)
            out.extend(v)
        out.extend(self.constant)
        return tuple(out)

    def rotate(self, start: int):
        """Cyclic rotation beginning at power ``start`` (0-based)."""
        facs = self.factors[start:] + self.factors[:start]
        return type(self)(facs, self.constant)

    def formal_inverse(self):
        """``v_k^-1 (u_k^-1)^x_k ... v_1^-1 (u_1^-1)^x_1`` in normal form."""
        if not self.factors:
            return type(self)((), inverse_word(self.constant))
        k = len(self.factors)
        head = inverse_word(self.factors[-1][2])
        facs = []
        for i in range(k - 1, -1, -1):
            u, x, _ = self.factors[i]
            nxt = inverse_word(self.factors[i - 1][2]) if i > 0 else ()
            facs.append((inverse_word(u), x, nxt))
        return type(self).from_parts(head, facs)

    def rename(self, mapping: Mapping[str, str]):
        return type(self)(tuple((u, mapping.get(x, x), v) for u, x, v in self.factors), self.constant)

    def drop_powers(self, keep: Iterable[str]):
        """Remove every power whose variable is not in ``keep`` (its exponent set to 0)."""
        keep = set(keep)
        head: list[int] = []
        facs: list[list] = []
        for u, x, v in self.factors:
            if x in keep:
                facs.append([u, x, v])
            elif facs:
                facs[-1][2] = facs[-1][2] + v
            else:
                head.extend(v)
        return type(self).from_parts(tuple(head) + self.constant, [tuple(f) for f in facs])

    def format(self, spec: GroupSpec | None = None) -> str:
        def word(w):
            if spec is None:
                return " ".join(map(str, w))
            return spec.format_word(w) if w else ""

        parts = []
        for u, x, v in self.factors:
            uu = word(u)
            parts.append(f"[{uu}]^{x}" if len(u) != 1 or u[0] < 0 else f"{uu}^{x}")
            if v:
                parts.append(word(v))
        if self.constant:
            parts.append(word(self.constant))
        return " ".join(parts) if parts else "1"


class KnapsackExpression(ExponentExpression):
    """Exponent expression with pairwise distinct variables."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_knapsack:
            seen = set()
            dup = next(x for x in self.variables if x in seen or seen.add(x))
            raise RepeatedVariable(f"variable {dup!r} occurs more than once")


# -- parser -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<lb>\[)|(?P<rb>\])|(?P<caret>\^)|(?P<neg>-)(?=[A-Za-z_])|(?P<int>-?\d+)|(?P<name>[A-Za-z_][\w.]*))")


def _tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExpressionSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        toks.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


def parse_expression(text: str, spec: GroupSpec, allow_repeats: bool = False) -> ExponentExpression:
    """Parse ``a^x b a^y [a^-1 b^-1]^z c^2``.

    Generators are identifiers of ``spec``; ``^name`` makes a variable power
    (``^-name`` one of the inverse word),
    ``^n`` an integer power folded into the constants; ``[...]`` groups a word.
    """
    toks = _tokenize(text)
    i = 0

    def peek():
        return toks[i]

    def take(kind):
        nonlocal i
        tok = toks[i]
        if tok[0] != kind:
            what = tok[1] or "end of input"
            raise ExpressionSyntaxError(f"expected {kind}, found {what!r}", tok[2])
        i += 1
        return tok

    def atom() -> Word:
        kind, val, pos = peek()
        if kind == "lb":
            take("lb")
            w = word_until_rb()
            take("rb")
            return w
        if kind == "name":
            take("name")
            if val == "1":
                return ()
            try:
                return (spec.generator_index(val),)
            except ValueError:
                raise ExpressionSyntaxError(f"unknown generator {val!r}", pos) from None
        raise ExpressionSyntaxError(f"unexpected {val or 'end of input'!r}", pos)

    def int_power(w: Word, n: int) -> Word:
        return w * n if n >= 0 else inverse_word(w) * (-n)

    def word_until_rb() -> Word:
        out: list[int] = []
        while peek()[0] not in ("rb", "end"):
            if peek()[0] == "int" and peek()[1] == "1":
                take("int")
                continue
            w = atom()
            if peek()[0] == "caret":
                take("caret")
                kind, val, pos = peek()
                if kind != "int":
                    raise ExpressionSyntaxError("variables are not allowed inside brackets", pos)
                take("int")
                w = int_power(w, int(val))
            out.extend(w)
        return tuple(out)

    head: list[int] = []
    factors: list[list] = []

    def emit_const(w: Word):
        if factors:
            factors[-1][2] = factors[-1][2] + tuple(w)
        else:
            head.extend(w)

    while peek()[0] != "end":
        if peek()[0] == "int" and peek()[1] == "1":
            take("int")
            continue
        w = atom()
        if peek()[0] == "caret":
            take("caret")
            kind, val, pos = peek()
            if kind == "int":
                take("int")
                emit_const(int_power(w, int(val)))
            elif kind in ("name", "neg"):
                if kind == "neg":
                    take("neg")
                    w = inverse_word(w)
                    kind, val, pos = peek()
                take("name")
                if "." in val:
                    raise ExpressionSyntaxError(f"bad variable name {val!r}", pos)
                factors.append([w, val, ()])
            else:
                raise ExpressionSyntaxError("expected exponent after '^'", pos)
        else:
            emit_const(w)

    expr = ExponentExpression.from_parts(tuple(head), [tuple(f) for f in factors])
    if allow_repeats:
        return expr
    if not expr.is_knapsack:
        seen: set[str] = set()
        for _, x, _ in expr.factors:
            if x in seen:
                pos = next(p for k, v, p in reversed(toks) if k == "name" and v == x)
                raise ExpressionSyntaxError(f"variable {x!r} repeated", pos)
            seen.add(x)
    return KnapsackExpression(expr.factors, expr.constant)


def as_knapsack(E: ExponentExpression) -> KnapsackExpression:
    return E if isinstance(E, KnapsackExpression) else KnapsackExpression(E.factors, E.constant)
