import random

import pytest

from wreathnorm.groups import conjugacy_classes, perm_from_cycles
from wreathnorm.props import (
    SolverError,
    check_all,
    check_S1,
    check_S3,
    check_S4,
    satisfies_s_conditions,
    solve_S1_instance,
    solve_S2_instance,
    solve_S3_instance,
    xi,
    xi_naive,
)


def test_all_statements_hold_on_a5(a5):
    reports = check_all(a5)
    assert all(r.holds for r in reports.values())


def test_s1_fails_on_abelian(z3):
    report = check_S1(z3)
    assert not report.holds
    a1, a2 = report.witness
    # abelian: x^-1 a1^-1 y x y^-1 collapses to a1^-1
    assert a2 != z3.inv(a1)


def test_xi_counterexample_triple(a5):
    u1 = a5.index[perm_from_cycles(5, [(0, 1), (2, 3)])]
    u2 = a5.index[perm_from_cycles(5, [(0, 1, 2, 3, 4)])]
    assert not xi(a5, u1, u2, u2)


def test_xi_trivial_realization(a5):
    rng = random.Random(3)
    for _ in range(25):
        u1, u2 = rng.randrange(60), rng.randrange(60)
        u3 = a5.mul(a5.inv(u2), a5.inv(u1))
        assert xi(a5, u1, u2, u3)  # x = y = 1 realizes it


def test_xi_class_product_equals_naive_search(a5):
    table = conjugacy_classes(a5)
    reps = [min(c) for c in table.classes]
    for u1 in reps:
        for u2 in reps:
            for u3 in reps:
                assert xi(a5, u1, u2, u3) == xi_naive(a5, u1, u2, u3)


def test_xi_conjugation_invariant_in_each_argument(a5):
    rng = random.Random(5)
    for _ in range(40):
        u1, u2, u3 = (rng.randrange(60) for _ in range(3))
        a, b, c = (rng.randrange(60) for _ in range(3))
        assert xi(a5, u1, u2, u3) == xi(
            a5, a5.conj(u1, a), a5.conj(u2, b), a5.conj(u3, c)
        )


def test_s3_class_reduction_matches_raw(s3, a4):
    assert check_S3(s3).holds == check_S3(s3, raw=True).holds
    assert check_S3(a4).holds == check_S3(a4, raw=True).holds


def test_s4_witness(a5):
    report = check_S4(a5)
    assert report.holds
    u1, u2, u3 = report.witness
    assert not xi(a5, u1, u2, u3)
    assert a5.identity_index not in (u1, u2, u3)


def test_s4_holds_on_z3_but_not_trivially(z3):
    # abelian classes are singletons, so a product of two non-trivial classes
    # is a single element and never covers the other two
    assert check_S4(z3).holds
    from wreathnorm.groups import generate_group, identity_perm
    trivial = generate_group([identity_perm(1)])
    assert not check_S4(trivial).holds


def test_solve_s1_reverifies(a5):
    rng = random.Random(1)
    for _ in range(100):
        a1, a2 = rng.randrange(60), rng.randrange(60)
        x, y = solve_S1_instance(a5, a1, a2)
        got = a5.mul_many((a5.inv(x), a5.inv(a1), y, x, a5.inv(y)))
        assert got == a2


def test_solve_s1_trivial_pair(a5):
    x, y = solve_S1_instance(a5, 3, a5.inv(3))
    assert (x, y) == (0, 0)  # identity pair is admissible and found first


def test_solve_s1_exhausts_on_abelian(z3):
    a1 = 1
    a2 = 1  # != a1^-1 = 2
    with pytest.raises(SolverError):
        solve_S1_instance(z3, a1, a2)


def test_solve_s2_reverifies_both_forms(a5):
    rng = random.Random(2)
    for _ in range(100):
        a1, a2, a3 = (rng.randrange(60) for _ in range(3))
        z, u, v = solve_S2_instance(a5, a1, a2, a3)
        # modified form
        assert a5.mul_many((a5.inv(a3), z, a3, u)) == a1
        assert a5.mul_many((a5.inv(z), v, a5.inv(u), a5.inv(v))) == a2
        # original statement shape
        assert (
            a5.mul_many((a3, u, a5.inv(a1), a5.inv(a3), v, a5.inv(u), a5.inv(v)))
            == a2
        )


def test_solve_s3_reverifies(a5):
    rng = random.Random(4)
    for _ in range(100):
        u1, u2, u3 = (rng.randrange(1, 60) for _ in range(3))
        u4 = rng.randrange(1, 60)
        x, y, z = solve_S3_instance(a5, u1, u2, u3, u4)
        got = a5.mul_many(
            (a5.inv(x), u1, x, a5.inv(y), u2, y, a5.inv(z), u3, z)
        )
        assert got == u4


def test_solve_s3_never_errors_on_class_reps(a5):
    table = conjugacy_classes(a5)
    reps = [min(c) for c in table.classes if min(c) != a5.identity_index]
    for u1 in reps:
        for u2 in reps:
            for u3 in reps:
                solve_S3_instance(a5, u1, u2, u3, reps[0])


def test_solver_determinism(a5):
    assert solve_S2_instance(a5, 7, 9, 11) == solve_S2_instance(a5, 7, 9, 11)
    assert solve_S3_instance(a5, 1, 2, 3, 4) == solve_S3_instance(a5, 1, 2, 3, 4)


def test_satisfies_s_conditions(a5, s3):
    assert satisfies_s_conditions(a5)
    assert not satisfies_s_conditions(s3)
