"""Benchmark corpus: reading, writing and seeded generation.

A corpus file holds one instance per line, ``<groupspec> | <expression>``.
Blank lines and ``#`` comments are ignored.  ``finite:`` tables are looked
up next to the corpus file.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterator

from .groups import GroupSpec, parse_group
from .knapsack.expression import KnapsackExpression, parse_expression

GROUPS = {
    "Z": "Z",
    "F2": "F2",
    "Z2": "finite:z2.tbl",
    "Dinf": "(finite:z2.tbl) * (finite:z2.tbl)",
    "F2xZ": "(F2) x Z",
}

MAX_DEPTH = 4
MAX_SIZE = 14


@dataclass
class Instance:
    name: str
    group_text: str
    expr_text: str
    base_dir: Path

    def group(self) -> GroupSpec:
        return parse_group(self.group_text, self.base_dir)

    def expression(self, spec: GroupSpec | None = None) -> KnapsackExpression:
        return parse_expression(self.expr_text, spec or self.group())


def shipped_corpus_dir() -> Path:
    return Path(str(resources.files("hypersack") / "data" / "corpus"))


def read_corpus(path: str | Path) -> list[Instance]:
    """Instances from a file or from every ``*.txt`` in a directory."""
    path = Path(path)
    files = sorted(path.glob("*.txt")) if path.is_dir() else [path]
    out = []
    for f in files:
        for lineno, line in enumerate(f.read_text().splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "|" not in line:
                raise ValueError(f"{f}:{lineno}: expected '<group> | <expression>'")
            g, e = (s.strip() for s in line.split("|", 1))
            out.append(Instance(f"{f.stem}:{lineno}", g, e, f.parent))
    return out


def _random_word(rng: random.Random, spec: GroupSpec, n: int) -> tuple[int, ...]:
    return tuple(rng.choice(spec.letters) for _ in range(n))


def random_instances(seed: int, count: int, group_names=None) -> Iterator[tuple[str, str]]:
    """``(group text, expression text)`` pairs; about half carry a planted solution."""
    rng = random.Random(seed)
    names = list(group_names or GROUPS)
    made = 0
    while made < count:
        gname = names[made % len(names)]
        spec = parse_group(GROUPS[gname], shipped_corpus_dir())
        k = rng.randint(1, MAX_DEPTH)
        facs = [(_random_word(rng, spec, rng.randint(1, 3)), f"x{i + 1}", _random_word(rng, spec, rng.randint(0, 2)))
                for i in range(k)]
        E = KnapsackExpression(tuple(facs))
        if rng.random() < 0.5:
            nu = {x: rng.randint(0, 4) for x in E.variables}
            fix = spec.to_word(spec.inverse(spec.element(E.word(nu))))
            u, x, v = facs[-1]
            E = KnapsackExpression(tuple(facs[:-1]) + ((u, x, v + fix),))
        if E.size > MAX_SIZE:
            continue
        made += 1
        yield GROUPS[gname], E.format(spec)


def write_corpus(path: str | Path, pairs) -> None:
    lines = [f"{g} | {e}" for g, e in pairs]
    Path(path).write_text("\n".join(lines) + "\n")
