import itertools

import pytest

from hypersack.groups import word_problem
from hypersack.knapsack import parse_expression, solve
from hypersack.oracle import BoxTooLarge, brute_solve, verify
from hypersack.semilinear import enumerate_box


def test_verify_examples(Z):
    E = parse_expression("a^x a^-2", Z)
    assert verify(Z, E, {"x": 2})
    assert not verify(Z, E, {"x": 1})
    with pytest.raises(KeyError):
        verify(Z, E, {})


def test_brute_solve_examples(Z, F2):
    assert brute_solve(Z, parse_expression("a^x a^-2", Z), 5) == [{"x": 2}]
    sols = brute_solve(F2, parse_expression("a^x b^y [a^-1]^z [b^-1]^w", F2), 3)
    assert len(sols) == 7
    assert {(s["x"], s["y"], s["z"], s["w"]) for s in sols} == (
        {(n, 0, n, 0) for n in range(4)} | {(0, n, 0, n) for n in range(4)})
    assert len(brute_solve(Z, parse_expression("a^x1 a^x2 a^x3 a^-3", Z), 3)) == 10


def test_brute_solve_is_lexicographic(Z):
    sols = brute_solve(Z, parse_expression("a^x a^y a^-3", Z), 3)
    keys = [(s["x"], s["y"]) for s in sols]
    assert keys == sorted(keys) == [(0, 3), (1, 2), (2, 1), (3, 0)]


def test_brute_solve_is_definitional(Dinf):
    E = parse_expression("[left.a right.a]^x left.a [right.a]^y", Dinf)
    got = {(s["x"], s["y"]) for s in brute_solve(Dinf, E, 5)}
    truth = {(x, y) for x, y in itertools.product(range(6), repeat=2) if word_problem(Dinf, E.word({"x": x, "y": y}))}
    assert got == truth


def test_cap_and_bound(F2):
    E = parse_expression("a^x b^y a^z b^w", F2)
    with pytest.raises(BoxTooLarge):
        brute_solve(F2, E, 20, cap=1000)
    with pytest.raises(ValueError):
        brute_solve(F2, E, -1)


def test_oracle_agrees_with_solve_membership(F2):
    E = parse_expression("a^x [b a]^y [a^-1]^z b^-1", F2)
    S = solve(F2, E)
    pts = enumerate_box(S, 6)
    for v in itertools.product(range(7), repeat=3):
        nu = dict(zip(S.variables, v))
        assert verify(F2, E, nu) == (v in pts)
