import itertools
import random

import pytest

from hypersack.semilinear import (
    LinearSet, SemilinearSet, VariableMismatch, congruence_set, enumerate_box, extend_affine, from_text,
    intersect, link_set, linear_equation_set, magnitude, member, oplus, project, rename, restrict_positive,
    restrict_zero, scale_shift, simplify, to_text, union, union_all,
)

XY = ("x", "y")
DIAG = SemilinearSet.linear({"x": 0, "y": 0}, [{"x": 1, "y": 1}])


def box(S, B):
    return enumerate_box(S, B)


def random_set(rng, variables, n_comp=2, max_periods=2, top=3):
    comps = []
    for _ in range(rng.randint(0, n_comp)):
        off = tuple(rng.randint(0, top) for _ in variables)
        pers = tuple(tuple(rng.randint(0, top) for _ in variables) for _ in range(rng.randint(0, max_periods)))
        comps.append(LinearSet(tuple(variables), off, pers))
    return SemilinearSet(variables, comps)


def naive_box(S, B):
    return {v for v in itertools.product(range(B + 1), repeat=len(S.variables)) if member(S, v)}


# -- union ---------------------------------------------------------------------

def test_union_with_empty_is_identity():
    assert union(DIAG, SemilinearSet.empty(XY)) == DIAG


def test_union_of_two_points():
    S = union(SemilinearSet.singleton({"x": 1, "y": 0}), SemilinearSet.singleton({"x": 0, "y": 1}))
    assert len(S.components) == 2
    assert box(S, 5) == {(1, 0), (0, 1)}


def test_union_rejects_mismatched_variables():
    with pytest.raises(VariableMismatch):
        union(DIAG, SemilinearSet.universe(("x",)))


def test_union_magnitude_is_max():
    a = SemilinearSet.linear({"x": 4, "y": 0}, [{"x": 1, "y": 0}])
    assert magnitude(union(a, DIAG)) == max(magnitude(a), magnitude(DIAG)) == 4


# -- oplus ---------------------------------------------------------------------

def test_oplus_points():
    S = oplus(SemilinearSet.singleton({"x": 1}), SemilinearSet.singleton({"y": 2}))
    assert S.variables == XY
    assert box(S, 5) == {(1, 2)}


def test_oplus_with_empty_is_empty():
    assert oplus(DIAG, SemilinearSet.empty(("z",))).is_empty()


def test_oplus_rejects_overlap():
    with pytest.raises(VariableMismatch):
        oplus(DIAG, SemilinearSet.universe(("x",)))


def test_oplus_magnitude_is_max():
    a = SemilinearSet.linear({"z": 7})
    assert magnitude(oplus(a, DIAG)) == 7


# -- scale_shift ----------------------------------------------------------------

def test_scale_shift_identity():
    assert scale_shift({"x": 1, "y": 1}, DIAG, {"x": 0, "y": 0}) == DIAG


def test_scale_shift_odd_numbers():
    S = scale_shift({"x": 2}, SemilinearSet.universe(("x",)), {"x": 1})
    assert box(S, 11) == {(n,) for n in (1, 3, 5, 7, 9, 11)}


def test_scale_shift_rejects_zero_scale():
    with pytest.raises(ValueError):
        scale_shift({"x": 0}, SemilinearSet.universe(("x",)), {"x": 0})


# -- intersect ------------------------------------------------------------------

def test_intersect_diagonal_with_double():
    double = SemilinearSet.linear({"x": 0, "y": 0}, [{"x": 1, "y": 2}])
    assert box(intersect(DIAG, double), 20) == {(0, 0)}


def test_intersect_self():
    S = union(DIAG, SemilinearSet.linear({"x": 1, "y": 0}, [{"x": 2, "y": 0}]))
    assert box(intersect(S, S), 10) == box(S, 10)


def test_intersect_shifted_diagonal_is_empty():
    shifted = SemilinearSet.linear({"x": 0, "y": 2}, [{"x": 1, "y": 1}])
    I = intersect(DIAG, shifted)
    assert box(I, 20) == box(DIAG, 20) & box(shifted, 20) == set()


# -- project ----------------------------------------------------------------------

def test_project_point():
    S = project(SemilinearSet.singleton({"x": 1, "y": 2}), {"x"})
    assert box(S, 3) == {(1,)}


def test_project_all_is_identity():
    assert project(DIAG, XY) == DIAG


def test_project_unknown_variable():
    with pytest.raises(VariableMismatch):
        project(DIAG, {"z"})


# -- member / magnitude / box -----------------------------------------------------

def test_member_examples():
    assert member(DIAG, {"x": 0, "y": 0})
    assert not member(DIAG, {"x": 1, "y": 2})


def test_member_matches_box_on_random_samples():
    rng = random.Random(7)
    for _ in range(40):
        S = random_set(rng, XY)
        pts = box(S, 12)
        for _ in range(250):
            v = (rng.randint(0, 12), rng.randint(0, 12))
            assert member(S, v) == (v in pts)


def test_magnitude_examples():
    assert magnitude(DIAG) == 1
    assert magnitude(SemilinearSet.empty(XY)) == 0


def test_enumerate_box_examples():
    assert box(DIAG, 3) == {(0, 0), (1, 1), (2, 2), (3, 3)}
    assert box(SemilinearSet.empty(XY), 10) == set()
    with pytest.raises(ValueError):
        box(DIAG, -1)


def test_enumerate_box_matches_membership_filter():
    rng = random.Random(11)
    for _ in range(60):
        S = random_set(rng, ("a", "b", "c"))
        assert box(S, 6) == naive_box(S, 6)


# -- derived constructions ----------------------------------------------------------

def test_restrict_positive_and_zero():
    U = SemilinearSet.universe(XY)
    assert box(restrict_positive(U, "x"), 3) == {(a, b) for a in range(1, 4) for b in range(4)}
    assert box(restrict_zero(U, "y"), 3) == {(a, 0) for a in range(4)}


def test_extend_affine():
    S = extend_affine(SemilinearSet.universe(("y", "z")), "x", ["y", "z"], 1)
    assert box(S, 4) == box(link_set("x", "y", "z"), 4)
    assert all(x == y + z + 1 for x, y, z in box(S, 6))


def test_link_set_members():
    pts = box(link_set("x", "y", "z"), 5)
    assert pts == {(y + z + 1, y, z) for y in range(6) for z in range(6) if y + z + 1 <= 5}


def test_congruence_set():
    assert box(congruence_set("x", 1, 3), 10) == {(1,), (4,), (7,), (10,)}
    with pytest.raises(ValueError):
        congruence_set("x", 3, 3)


def test_linear_equation_set_matches_brute_force():
    rng = random.Random(3)
    for _ in range(30):
        coeffs = {v: rng.choice([-3, -2, -1, 1, 2, 3]) for v in ("p", "q", "r")}
        const = rng.randint(-6, 6)
        S = linear_equation_set(coeffs, const)
        truth = {v for v in itertools.product(range(7), repeat=3)
                 if sum(coeffs[n] * x for n, x in zip(("p", "q", "r"), v)) + const == 0}
        assert box(S, 6) == truth


def test_simplify_keeps_members_and_lowers_magnitude():
    rng = random.Random(5)
    for _ in range(50):
        S = random_set(rng, XY, n_comp=4, max_periods=3)
        T = simplify(S)
        assert box(T, 12) == box(S, 12)
        assert magnitude(T) <= magnitude(S)


def test_rename_moves_coordinates():
    S = SemilinearSet.singleton({"x": 1, "y": 2})
    R = rename(S, {"x": "z"})
    assert R.variables == ("y", "z")
    assert box(R, 3) == {(2, 1)}


def test_union_all_checks_variables():
    with pytest.raises(VariableMismatch):
        union_all(XY, [SemilinearSet.universe(("x",))])


def test_negative_entries_rejected():
    with pytest.raises(ValueError):
        LinearSet(("x",), (-1,))


def test_variables_sorted_naturally():
    S = SemilinearSet.universe(("x10", "x2", "x1"))
    assert S.variables == ("x1", "x2", "x10")


# -- text format ---------------------------------------------------------------

def test_text_round_trip():
    rng = random.Random(9)
    for _ in range(30):
        S = random_set(rng, ("x1", "x2", "y"))
        assert from_text(to_text(S)) == S


def test_text_shape():
    text = to_text(DIAG)
    assert text.splitlines() == ["variables: x,y", "x=0,y=0 | x=1,y=1"]


def test_empty_variable_set_round_trip():
    for S in (SemilinearSet.universe(()), SemilinearSet.empty(())):
        assert from_text(to_text(S)) == S


def test_equal_constructions_serialize_identically():
    a = union(SemilinearSet.singleton({"x": 1, "y": 0}), DIAG)
    b = union(DIAG, SemilinearSet.singleton({"x": 1, "y": 0}))
    assert to_text(a) == to_text(b)


def test_from_text_requires_header():
    with pytest.raises(ValueError):
        from_text("x=1 |\n")


def test_simplify_merges_point_chain_into_ray():
    pts = SemilinearSet.from_points(XY, [(n, n) for n in range(30)])
    ray = SemilinearSet.linear({"x": 30, "y": 30}, [{"x": 1, "y": 1}])
    T = simplify(union(pts, ray))
    assert T == DIAG


def test_simplify_merge_keeps_gaps():
    pts = SemilinearSet.from_points(XY, [(0, 0), (2, 2)])
    ray = SemilinearSet.linear({"x": 3, "y": 3}, [{"x": 1, "y": 1}])
    T = simplify(union(pts, ray))
    assert box(T, 12) == {(0, 0)} | {(n, n) for n in range(2, 13)}
    assert len(T.components) == 2
