import itertools
import json
import random
import time

import pytest

from hypersack.automata.depth2 import build_depth2_nfa, depth2_bounds, split_params
from hypersack.automata.nfa import (
    NotAcyclic, Transition, WordNFA, acyclic_membership, accepted_words, benois_saturate, grid_exponents,
    grid_nfa, is_acyclic, load_nfa, nfa_from_json, nfa_to_json,
)
from hypersack.automata.parikh import (
    ParikhNFA, parikh_from_json, parikh_image, parikh_to_json, runs_in_box, trim,
)
from hypersack.groups import constants, word_problem
from hypersack.knapsack.expression import parse_expression
from hypersack.knapsack.solver import solve_depth2
from hypersack.oracle import brute_solve
from hypersack.semilinear import enumerate_box

from conftest import group


def chain(spec, words):
    """Automaton accepting exactly the listed words (one branch each)."""
    states = ["s", "f"]
    trans = []
    for i, w in enumerate(words):
        prev = "s"
        for j, x in enumerate(w):
            q = f"b{i}_{j}"
            states.append(q)
            trans.append(Transition(prev, (x,), q))
            prev = q
        trans.append(Transition(prev, (), "f"))
    return WordNFA(states, "s", {"f"}, trans)


def random_acyclic(rng, spec, n_states, n_edges, max_label=2):
    states = list(range(n_states))
    trans = []
    for _ in range(n_edges):
        a, b = sorted(rng.sample(states, 2))
        label = tuple(rng.choice(spec.letters) for _ in range(rng.randint(0, max_label)))
        trans.append(Transition(a, label, b))
    finals = {n_states - 1} | {s for s in states if rng.random() < 0.15}
    return WordNFA(states, 0, finals, trans)


def enumeration_says(spec, A):
    return any(word_problem(spec, w) for w in accepted_words(A))


# -- acyclicity ------------------------------------------------------------------------

def test_is_acyclic_examples():
    assert is_acyclic(WordNFA([0], 0, {0}, []))
    assert not is_acyclic(WordNFA([0], 0, {0}, [Transition(0, (1,), 0)]))


def test_grid_is_acyclic(F2, rng):
    for _ in range(100):
        k = rng.randint(1, 4)
        text = " ".join(f"{rng.choice('ab')}^x{i}" for i in range(k))
        E = parse_expression(text, F2)
        assert is_acyclic(grid_nfa(E, rng.randint(0, 5)))


def test_cyclic_input_rejected(F2, Dinf):
    A = WordNFA([0, 1], 0, {1}, [Transition(0, (1,), 1), Transition(1, (-1,), 0)])
    for spec in (F2, Dinf):
        with pytest.raises(NotAcyclic):
            acyclic_membership(spec, A)


# -- membership -----------------------------------------------------------------------

def test_membership_examples(F2):
    A = chain(F2, [F2.parse_word("a a^-1")])
    res = acyclic_membership(F2, A)
    assert res.accepted and res.witness == F2.parse_word("a a^-1")
    assert not acyclic_membership(F2, chain(F2, [F2.parse_word("a b")])).accepted


def test_membership_family(F2):
    # a^i b^j a^-2 b^-3 is a nonempty reduced word for every i, j: no identity word
    words = [F2.parse_word(f"a^{i} b^{j} a^-2 b^-3") for i in range(5) for j in range(5)]
    assert not any(word_problem(F2, w) for w in words)
    assert not acyclic_membership(F2, chain(F2, words)).accepted
    nested = [F2.parse_word(f"a^{i} b^{j} b^-3 a^-2") for i in range(5) for j in range(5)]
    res = acyclic_membership(F2, chain(F2, nested))
    assert res.accepted
    assert res.witness == F2.parse_word("a^2 b^3 b^-3 a^-2")


@pytest.mark.parametrize("name", ["F2", "Dinf", "ZxZ", "Z2"])
def test_membership_matches_enumeration(name):
    spec = group(name)
    rng = random.Random(hash(name) % 1000)
    for _ in range(100):
        A = random_acyclic(rng, spec, rng.randint(2, 12), rng.randint(1, 18))
        res = acyclic_membership(spec, A)
        assert res.accepted == enumeration_says(spec, A)
        if res.accepted:
            assert word_problem(spec, res.witness)
            # the path is an accepting path spelling the witness
            s = A.initial
            for ti in res.path:
                assert A.transitions[ti].source == s
                s = A.transitions[ti].target
            assert s in A.finals
            assert tuple(x for ti in res.path for x in A.transitions[ti].label) == res.witness


def test_membership_cap(Dinf):
    from hypersack.automata.nfa import MembershipCapExceeded
    E = parse_expression("left.a^x right.a^y left.a^z right.a^w", Dinf)
    with pytest.raises(MembershipCapExceeded):
        acyclic_membership(Dinf, grid_nfa(E, 6), cap=2)


# -- saturation -------------------------------------------------------------------------

def test_saturation_adds_cancelling_edge(F2):
    A = WordNFA(["q0", "q1", "q2"], "q0", {"q2"}, [Transition("q0", (1,), "q1"), Transition("q1", (-1,), "q2")])
    S = benois_saturate(A)
    assert Transition("q0", (), "q2") in S.transitions


def test_saturation_is_fixpoint(F2, rng):
    for _ in range(30):
        A = random_acyclic(rng, F2, rng.randint(2, 10), rng.randint(1, 14))
        S = benois_saturate(A)
        assert set(benois_saturate(S).transitions) == set(S.transitions)


def test_saturation_preserves_identity_membership(F2):
    rng = random.Random(44)
    for _ in range(100):
        A = random_acyclic(rng, F2, rng.randint(2, 30), rng.randint(1, 40), max_label=1)
        before = enumeration_says(F2, A)
        S = benois_saturate(A)
        assert before == acyclic_membership(F2, A).accepted
        assert before == (() in set(accepted_words(S, limit=10**7)) or enumeration_says(F2, S))


# -- grid automaton ----------------------------------------------------------------------

def test_grid_structure(F2, rng):
    E = parse_expression("a^x b", F2)
    A = grid_nfa(E, 0)
    assert len(A.states) == 2 and len(A.transitions) == 1
    for _ in range(20):
        k, p = rng.randint(1, 4), rng.randint(0, 6)
        E = parse_expression(" ".join(f"a^x{i} b" for i in range(k)), F2)
        A = grid_nfa(E, p)
        assert len(A.states) == (k + 1) * (p + 1)
        assert len(A.transitions) == 2 * k * p + k


def test_grid_example(Z):
    E = parse_expression("a^x a^-2", Z)
    res = acyclic_membership(Z, grid_nfa(E, 3))
    assert res.accepted
    assert grid_exponents(E, grid_nfa(E, 3), res.path) == {"x": 2}


@pytest.mark.parametrize("name", ["F2", "Dinf", "F2xZ"])
def test_grid_matches_oracle(name):
    spec = group(name)
    rng = random.Random(len(name))
    for _ in range(25):
        k = rng.randint(1, 3)
        facs = []
        for i in range(k):
            u = spec.format_word(tuple(rng.choice(spec.letters) for _ in range(rng.randint(1, 2))))
            v = spec.format_word(tuple(rng.choice(spec.letters) for _ in range(rng.randint(0, 2))))
            facs.append(f"[{u}]^x{i} {v}")
        E = parse_expression(" ".join(facs), spec)
        p = rng.randint(0, 4)
        res = acyclic_membership(spec, grid_nfa(E, p))
        assert res.accepted == bool(brute_solve(spec, E, p))
        if res.accepted:
            nu = grid_exponents(E, grid_nfa(E, p), res.path)
            assert max(nu.values()) <= p
            assert word_problem(spec, E.word(nu))


def test_grid_membership_1000_states(F2):
    E = parse_expression("a^x b^y [a^-1]^z [b^-1]^w", F2)
    A = grid_nfa(E, 199)
    assert len(A.states) == 1000
    t0 = time.perf_counter()
    assert acyclic_membership(F2, A).accepted
    assert time.perf_counter() - t0 < 5


# -- JSON -----------------------------------------------------------------------------------

def test_nfa_json_round_trip(Dinf, rng, tmp_path):
    A = random_acyclic(rng, Dinf, 6, 8)
    text = nfa_to_json(A, Dinf)
    B = nfa_from_json(text, Dinf)
    assert [t.label for t in B.transitions] == [t.label for t in A.transitions]
    assert acyclic_membership(Dinf, B).accepted == acyclic_membership(Dinf, A).accepted
    path = tmp_path / "a.json"
    path.write_text(text)
    assert len(load_nfa(path, Dinf).states) == 6
    with pytest.raises(ValueError):
        nfa_from_json(json.dumps({"states": [0]}), Dinf)


# -- Parikh images -----------------------------------------------------------------------------

def test_parikh_single_loop():
    A = ParikhNFA(["q"], "q", {"q"}, [("q", (1, 0), "q")])
    S = parikh_image(A)
    assert enumerate_box(S, 5) == {(n, 0) for n in range(6)}


def test_parikh_loop_then_exit():
    A = ParikhNFA(["q0", "qf"], "q0", {"qf"}, [("q0", (1, 0), "q0"), ("q0", (0, 1), "qf")])
    S = parikh_image(A)
    assert enumerate_box(S, 6) == {(n, 1) for n in range(7)}
    assert len(S.components) == 1


def random_count_nfa(rng, n_states, dim=2):
    states = list(range(n_states))
    trans = []
    for _ in range(rng.randint(1, 2 * n_states + 2)):
        vec = [0] * dim
        for _ in range(rng.randint(0, 2)):
            vec[rng.randrange(dim)] += 1
        trans.append((rng.choice(states), tuple(vec), rng.choice(states)))
    finals = {s for s in states if rng.random() < 0.35} or {n_states - 1}
    return ParikhNFA(states, 0, finals, trans, dim)


def paths_up_to(A, length):
    """Vectors of accepting runs with at most ``length`` edges."""
    frontier = {(A.initial, (0,) * A.dim)}
    seen = set(frontier)
    for _ in range(length):
        nxt = set()
        for q, v in frontier:
            for s, vec, t in A.transitions:
                if s == q:
                    nxt.add((t, tuple(a + b for a, b in zip(v, vec))))
        frontier = nxt - seen
        seen |= nxt
    return {v for q, v in seen if q in A.finals}


def test_parikh_matches_path_enumeration():
    rng = random.Random(21)
    for _ in range(120):
        A = random_count_nfa(rng, rng.randint(1, 6))
        S = parikh_image(A)
        got = enumerate_box(S, 12)
        assert got == runs_in_box(A, 12)
        # short paths are a subset of the image
        short = {v for v in paths_up_to(A, 8) if max(v, default=0) <= 12}
        assert short <= got


def test_parikh_three_dimensions():
    rng = random.Random(8)
    for _ in range(40):
        A = random_count_nfa(rng, rng.randint(1, 5), dim=3)
        S = parikh_image(A, ("p", "q", "r"))
        assert enumerate_box(S, 6) == runs_in_box(A, 6)


def test_parikh_variable_order_respected():
    A = ParikhNFA(["q0", "qf"], "q0", {"qf"}, [("q0", (2, 0), "qf")])
    S = parikh_image(A, ("y", "b"))
    assert S.variables == ("b", "y")
    assert enumerate_box(S, 3) == {(0, 2)}


def test_parikh_empty_language():
    A = ParikhNFA(["q0", "qf"], "q0", {"qf"}, [("q0", (1, 0), "q0")])
    assert parikh_image(A).is_empty()
    assert len(trim(A).states) <= 1


def test_parikh_json_round_trip():
    A = random_count_nfa(random.Random(1), 4)
    B = parikh_from_json(parikh_to_json(A))
    assert runs_in_box(B, 8) == runs_in_box(A, 8)


def test_parikh_rejects_bad_vectors():
    with pytest.raises(ValueError):
        ParikhNFA(["q"], "q", {"q"}, [("q", (-1, 0), "q")])


# -- depth-2 automaton ---------------------------------------------------------------------------

def test_split_params_examples():
    p, r, _, _ = split_params(13, 0, 2)
    assert (p, r) == (6, 1)
    _, _, s, t = split_params(0, 15, 2)
    assert (s, t) == (8, 1)
    assert split_params(0, 0, 3)[:2] == (0, 0)
    with pytest.raises(ValueError):
        split_params(1, 1, 0)


def test_split_params_identities(rng):
    for _ in range(200):
        N1, N2, l1 = rng.randint(0, 100), rng.randint(0, 100), rng.randint(1, 7)
        p, r, s, t = split_params(N1, N2, l1)
        assert N1 == p * l1 + r and 0 <= r < l1
        assert N2 == s * l1 - t and 0 <= t < l1


def test_depth2_state_count(F2):
    C = constants(F2)
    ab = F2.parse_word("a b")
    A = build_depth2_nfa(F2, (), ab, ab, (), C)
    assert len(A.states) <= 2 + 2 * 2 * len(F2.ball_elements(C.gamma))


def test_depth2_equal_powers(F2):
    # the automaton covers the solutions with x1 >= (N1 + N2) / |u1|; the finite
    # table of the depth-2 solver covers the rest
    C = constants(F2)
    ab = F2.parse_word("a b")
    S = parikh_image(build_depth2_nfa(F2, (), ab, ab, (), C))
    bd = depth2_bounds(C, 2, 2, 0, 0)
    start = -(-(bd.N1 + bd.N2) // 2)
    got = enumerate_box(S, 40)
    assert got <= {(n, n) for n in range(41)}
    assert {(n, n) for n in range(start, 41)} <= got
    full = solve_depth2(F2, (), ab, ab, ())
    assert enumerate_box(full, 20) == {(n, n) for n in range(21)}


def test_depth2_different_generators(F2):
    C = constants(F2)
    S = parikh_image(build_depth2_nfa(F2, (), (1,), (2,), (), C))
    assert not any(x >= 1 and y >= 1 for x, y in enumerate_box(S, 12))


def test_depth2_rejects_non_geodesic(F2):
    with pytest.raises(ValueError):
        build_depth2_nfa(F2, (1, -1), (1,), (2,), (), constants(F2))


def test_depth2_bounds_monotone(F2):
    C = constants(F2)
    a = depth2_bounds(C, 1, 1, 0, 0)
    b = depth2_bounds(C, 2, 2, 1, 1)
    assert b.N1 > a.N1 and b.top_range > a.top_range
