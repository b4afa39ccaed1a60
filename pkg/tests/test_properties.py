"""Property tests: every operation checked pointwise against its definition."""
import itertools

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from hypersack.groups import inverse_word, shortlex_reduce, word_problem
from hypersack.knapsack import KnapsackExpression, solve
from hypersack.oracle import brute_solve, verify
from hypersack.semilinear import (
    LinearSet, SemilinearSet, enumerate_box, intersect, member, oplus, project, scale_shift, simplify,
    union,
)

from conftest import group

FAST = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
SLOW = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
B = 5


def vectors(d, top=3):
    return st.tuples(*[st.integers(0, top)] * d)


@st.composite
def semilinear(draw, variables=("x", "y")):
    d = len(variables)
    comps = draw(st.lists(
        st.builds(lambda o, ps: LinearSet(tuple(variables), o, tuple(ps)), vectors(d), st.lists(vectors(d), max_size=2)),
        max_size=3))
    return SemilinearSet(variables, comps)


def pts(S, bound=B):
    return enumerate_box(S, bound)


def full_box(d, bound=B):
    return set(itertools.product(range(bound + 1), repeat=d))


@FAST
@given(semilinear(), semilinear())
def test_union_exact(S, T):
    assert pts(union(S, T)) == pts(S) | pts(T)


@FAST
@given(semilinear(), semilinear())
def test_intersect_exact(S, T):
    assert pts(intersect(S, T)) == pts(S) & pts(T)


@FAST
@given(semilinear(("x",)), semilinear(("y", "z")))
def test_oplus_exact(S, T):
    expected = {a + b for a in pts(S) for b in pts(T)}
    assert pts(oplus(S, T)) == expected


@FAST
@given(semilinear(("x", "y", "z")))
def test_project_exact(S):
    # a projected point may come from a preimage outside the box; check in a larger box
    inner = pts(project(S, ("x", "z")), 3)
    outer = {(a, c) for a, _, c in pts(S, 3 + 3 * 3 * 3)}
    assert inner == {v for v in outer if max(v) <= 3}


@FAST
@given(semilinear(), st.tuples(st.integers(1, 3), st.integers(1, 3)), st.tuples(st.integers(0, 3), st.integers(0, 3)))
def test_scale_shift_exact(S, m, d):
    R = scale_shift(dict(zip(S.variables, m)), S, dict(zip(S.variables, d)))
    want = {(m[0] * a + d[0], m[1] * b + d[1]) for a, b in pts(S, 12)}
    assert pts(R, 12) == {v for v in want if max(v) <= 12}


@FAST
@given(semilinear())
def test_simplify_keeps_members(S):
    T = simplify(S)
    assert pts(T, 8) == pts(S, 8)
    assert T.magnitude <= S.magnitude


@FAST
@given(semilinear())
def test_member_agrees_with_box(S):
    inside = pts(S)
    for v in full_box(2):
        assert member(S, v) == (v in inside)


def words(spec, max_size=8):
    return st.lists(st.sampled_from(spec.letters), max_size=max_size).map(tuple)


GROUPS = {name: group(name) for name in ("F2", "Dinf", "Z2", "F2xZ")}


@FAST
@given(st.sampled_from(sorted(GROUPS)), st.data())
def test_shortlex_idempotent_and_equivalent(name, data):
    spec = GROUPS[name]
    w = data.draw(words(spec))
    s = shortlex_reduce(spec, w)
    assert shortlex_reduce(spec, s) == s
    assert len(s) <= len(w)
    assert word_problem(spec, w + inverse_word(s))


@FAST
@given(st.sampled_from(sorted(GROUPS)), st.data())
def test_word_problem_of_inverse_products(name, data):
    spec = GROUPS[name]
    w = data.draw(words(spec))
    assert word_problem(spec, w + inverse_word(w))
    assert word_problem(spec, w) == word_problem(spec, inverse_word(w))


@st.composite
def expressions(draw, spec, max_depth=3):
    k = draw(st.integers(1, max_depth))
    facs = []
    for i in range(k):
        u = draw(st.lists(st.sampled_from(spec.letters), min_size=1, max_size=2).map(tuple))
        v = draw(words(spec, 2))
        facs.append((u, f"x{i}", v))
    return KnapsackExpression(tuple(facs))


@SLOW
@given(st.sampled_from(["F2", "Dinf", "F2xZ"]), st.data())
def test_solve_sound_and_complete(name, data):
    spec = GROUPS[name]
    E = data.draw(expressions(spec))
    S = solve(spec, E)
    got = pts(S, 4)
    for v in got:
        assert verify(spec, E, dict(zip(S.variables, v)))
    truth = {tuple(nu[x] for x in S.variables) for nu in brute_solve(spec, E, 4)}
    assert got == truth
