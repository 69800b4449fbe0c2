import random
from fractions import Fraction

import pytest

from wreathnorm.groups import normal_closure, perm_from_cycles
from wreathnorm.norms import (
    NormTable,
    quotient_norm,
    validate_invariance,
    validate_pseudo_norm,
)
from wreathnorm.weightfn import WeightFn, check_axioms, from_norm, w_of
import pytest as _pytest


@_pytest.fixture(scope="module")
def s3_transposition_table(s3):
    from wreathnorm.norms import conjugacy_closure, word_norm_bfs

    tr = s3.index[perm_from_cycles(3, [(0, 1)])]
    return word_norm_bfs(s3, conjugacy_closure(s3, [tr]))


def test_from_norm_signs(s3, s3_transposition_table):
    table = s3_transposition_table
    f = from_norm(table, [0, 1, 2])
    rot = s3.index[perm_from_cycles(3, [(0, 1, 2)])]
    assert table[rot] == 2
    assert f.symbol(rot, 2) == "="
    assert f.symbol(rot, 1) == ">"
    assert f.symbol(s3.identity_index, 0) == "="


def test_from_norm_requires_zero(s3_word_table):
    with pytest.raises(ValueError):
        from_norm(s3_word_table, [1, 2])


def test_zero_one_norm_full_table(s3):
    table = NormTable(
        s3, [0 if i == s3.identity_index else 1 for i in range(len(s3))]
    )
    f = from_norm(table, [0, Fraction(1, 2), 1])
    for g in range(len(s3)):
        expected = ("=", "<", "<") if g == s3.identity_index else (">", ">", "=")
        assert f.rows[g] == expected


def test_w_of_round_trip(s3_word_table, a5_word_table):
    for table in (s3_word_table, a5_word_table):
        values = sorted({Fraction(v) for v in table.values})
        f = from_norm(table, values)
        recovered = w_of(f)
        for i, v in enumerate(table.values):
            assert recovered[i] == v


def test_w_of_above_all_marker(s3, s3_transposition_table):
    f = from_norm(s3_transposition_table, [0, 1])
    recovered = w_of(f)
    rot = s3.index[perm_from_cycles(3, [(0, 1, 2)])]
    assert recovered[rot] is None


def test_w_of_coarsened_rounds_up(s3, s3_transposition_table):
    f = from_norm(s3_transposition_table, [0, 2])
    recovered = w_of(f)
    tr = s3.index[perm_from_cycles(3, [(0, 1)])]
    assert s3_transposition_table[tr] == 1 and recovered[tr] == 2


def test_axioms_pass_on_word_norm(s3_word_table):
    f = from_norm(s3_word_table, [0, 1, 2, 3, 4])
    for theory in ("T_W", "T_IPMG", "T_IMG"):
        assert check_axioms(f, theory).ok


def test_planted_monotonicity_violation(s3, s3_word_table):
    f = from_norm(s3_word_table, [0, 1, 2])
    rows = [list(r) for r in f.rows]
    g = s3.index[perm_from_cycles(3, [(0, 1)])]
    gi = s3.inv(g)  # transpositions are involutions, so W4 stays clean
    assert g == gi
    rows[g][1] = "="
    rows[g][2] = ">"
    bad = WeightFn(s3, f.thresholds, tuple(tuple(r) for r in rows))
    report = check_axioms(bad, "T_W")
    assert not report.ok
    assert any(
        v["axiom"] in ("W1", "W2") and v["g"] == g for v in report.violations
    )


def test_kernel_splits_ipmg_from_img(s3, s3_word_table):
    rot = s3.index[perm_from_cycles(3, [(0, 1, 2)])]
    a3 = normal_closure(s3, [rot])
    qt, proj = quotient_norm(s3_word_table, a3)
    pulled = NormTable(s3, [qt[proj[i]] for i in range(len(s3))])
    f = from_norm(pulled, [0, 1, 2])
    assert check_axioms(f, "T_IPMG").ok
    report = check_axioms(f, "T_IMG")
    assert not report.ok
    kernel_witnesses = {v["g"] for v in report.violations if v["axiom"] == "NORM"}
    assert kernel_witnesses == a3 - {s3.identity_index}


def test_agreement_with_validators_on_violating_table(s3):
    # a non-invariant pseudo-norm: cost 1 on one transposition, 3 on the others
    rng = random.Random(0)
    tr = s3.index[perm_from_cycles(3, [(0, 1)])]
    values = [Fraction(0)] * 6
    for g in range(6):
        if g == s3.identity_index:
            continue
        values[g] = Fraction(1) if g == tr else Fraction(2)
    table = NormTable(s3, values)
    assert validate_pseudo_norm(table).ok
    assert not validate_invariance(table).ok
    thresholds = sorted({Fraction(0), Fraction(1), Fraction(2), Fraction(3), Fraction(4)})
    f = from_norm(table, thresholds)
    assert not check_axioms(f, "T_IPMG").ok  # INV schema catches it


def test_triangle_skip_accounting(s3_word_table):
    f = from_norm(s3_word_table, [0, 1, 2])
    report = check_axioms(f, "T_IPMG")
    # pairs like 1+2 and 2+2 are not expressible over {0,1,2}
    assert ("1/1", "2/1") in report.skipped_triangle_pairs
    assert report.evaluated["triangle_instances"] > 0


def test_weightfn_json_round_trip(s3, s3_word_table):
    f = from_norm(s3_word_table, [0, 1, 2])
    doc = f.to_json()
    again = WeightFn.from_json(s3, doc)
    assert again.thresholds == f.thresholds
    assert again.rows == f.rows
