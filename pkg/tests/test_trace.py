import math

import numpy as np
import pytest

import cashift as cs
from cashift import BudgetError
from cashift.trace import column_image

from util import ONE, TWO, and_rule, brute_trace_columns, random_rule

F = cs.example_021_rule()
BLOCKS = {(0, 0), (1, 2)}


# ---------------------------------------------------------------------------
# exact enumeration against the independent simulator


def test_example_rule_depth_one():
    tt = cs.trace_words(F, 1, 1)
    assert tt.words == {(0,), (1,), (2,)}


def test_example_rule_depth_two():
    tt = cs.trace_words(F, 1, 2)
    assert set(tt.words) == {(0, 0), (0, 1), (1, 2), (2, 0), (2, 1)}
    assert tt.p == 5


def test_identity_constant_columns():
    for L in (1, 3, 5):
        tt = cs.trace_words(cs.identity_rule(4, ONE), 1, L)
        assert tt.words == {(s,) * L for s in range(4)}


def test_shift_trace_is_full_shift():
    sig = cs.shift_rule(2, ONE)
    for L in (1, 2, 4, 6):
        assert cs.subword_complexity(sig, 1, L) == 2**L


def test_and_rule_columns_are_step_functions():
    for L in (2, 4, 6):
        tt = cs.trace_words(and_rule(ONE), 1, L)
        expected = {(1,) * m + (0,) * (L - m) for m in range(L + 1)}
        assert set(tt.words) == expected
        assert tt.p == L + 1


@pytest.mark.parametrize("sided", [ONE, TWO])
def test_trace_matches_brute_force_on_random_rules(sided):
    rng = np.random.default_rng(1234)
    for _ in range(12):
        size = int(rng.integers(2, 4))
        lo = 0 if sided is ONE else int(rng.integers(-1, 1))
        rule = random_rule(rng, size, sided, lo, lo + 1)
        for k in (1, 2):
            for L in (1, 2, 3):
                got = cs.trace_words(rule, k, L).words
                assert set(got) == brute_trace_columns(rule, k, L)


def test_trace_with_offset_window():
    sig = cs.make_rule(2, ONE, 1, 1, (0, 1))  # shift, width-1 presentation
    for L in (1, 2, 3, 4):
        assert set(cs.trace_words(sig, 1, L).words) == brute_trace_columns(sig, 1, L)
        assert cs.subword_complexity(sig, 1, L) == 2**L


def test_two_sided_xor_trace_matches_brute_force():
    x = cs.make_rule(2, TWO, -1, 0, (0, 1, 1, 0))
    for L in (1, 2, 3):
        assert set(cs.trace_words(x, 1, L).words) == brute_trace_columns(x, 1, L)


# ---------------------------------------------------------------------------
# the block-shift language of the example rule


def test_block_shift_words_examples():
    assert cs.block_shift_words(BLOCKS, 2) == {(0, 0), (0, 1), (1, 2), (2, 0), (2, 1)}
    assert cs.block_shift_words({(0,)}, 3) == {(0, 0, 0)}
    assert cs.block_shift_words({(0, 1)}, 3) == {(0, 1, 0), (1, 0, 1)}


def test_block_shift_words_validation():
    with pytest.raises(ValueError):
        cs.block_shift_words(set(), 2)
    with pytest.raises(ValueError):
        cs.block_shift_words({(0,), (0, 1)}, 2)


def test_example_rule_language_equals_block_shift():
    for L in range(1, 9):
        assert set(cs.trace_words(F, 1, L).words) == cs.block_shift_words(BLOCKS, L)


def test_example_rule_subword_complexity_depth_four():
    assert cs.subword_complexity(F, 1, 4) == 11


# ---------------------------------------------------------------------------
# product structure


def test_product_trace_multiplies():
    f2 = cs.product(F, F)
    assert cs.subword_complexity(f2, 1, 2) == 25


def test_product_trace_equals_direct_enumeration():
    rng = np.random.default_rng(77)
    for _ in range(6):
        a = random_rule(rng, 2, ONE, 0, 1)
        b = random_rule(rng, 3, ONE, 0, 1)
        prod = cs.product(a, b)
        direct = cs.make_rule(
            prod.source.size, ONE, prod.lo, prod.hi, prod.table
        )  # same table, no factor metadata: forces the enumeration path
        for L in (1, 2, 3):
            assert cs.trace_words(prod, 1, L).words == cs.trace_words(direct, 1, L).words
            assert (
                cs.subword_complexity(prod, 1, L)
                == cs.subword_complexity(a, 1, L) * cs.subword_complexity(b, 1, L)
            )


def test_radius_step_relation():
    # p_L(width r+1 trace) = |A| * p_L(width r trace) for one-sided rules
    rng = np.random.default_rng(4321)
    rules = [F, cs.shift_rule(2, ONE), and_rule(ONE), cs.identity_rule(3, ONE)]
    rules += [random_rule(rng, 3, ONE, 0, 1) for _ in range(8)]
    rules += [random_rule(rng, 2, ONE, 0, 1) for _ in range(8)]
    for rule in rules:
        r = rule.radius
        for L in range(1, 6):
            p_r = cs.subword_complexity(rule, r, L) if r > 0 else 1
            p_r1 = cs.subword_complexity(rule, r + 1, L)
            assert p_r1 == rule.source.size * p_r, (rule.table, L)


def test_factor_map_monotonicity():
    # applying a cellwise map to columns cannot increase the word count
    proj = cs.BlockMap(cs.Alphabet(3), cs.Alphabet(2), ONE, 0, 0, (0, 1, 1))
    for L in (2, 4, 6):
        tt = cs.trace_words(F, 1, L)
        image = {column_image(proj, w, 1, 3) for w in tt.words}
        assert len(image) <= tt.p


def test_subadditivity_of_counts():
    for m in (1, 2, 3):
        for n in (1, 2, 3):
            pm = cs.subword_complexity(F, 1, m)
            pn = cs.subword_complexity(F, 1, n)
            pmn = cs.subword_complexity(F, 1, m + n)
            assert pmn <= pm * pn


# ---------------------------------------------------------------------------
# entropy report


def test_entropy_report_rows_exact():
    rep = cs.entropy_upper(F, 1, 4)
    assert [(L, p) for (L, p, _) in rep.rows] == [(1, 3), (2, 5), (3, 7), (4, 11)]
    ratios = {L: r for (L, p, r) in rep.rows}
    assert math.isclose(ratios[2], math.log2(5) / 2, rel_tol=0, abs_tol=1e-12)
    assert math.isclose(ratios[4], math.log2(11) / 4, rel_tol=0, abs_tol=1e-12)


def test_entropy_report_identity_decreases_to_zero():
    rep = cs.entropy_upper(cs.identity_rule(3, ONE), 1, 5)
    ratios = [r for (_, _, r) in rep.rows]
    assert all(ratios[i] > ratios[i + 1] for i in range(len(ratios) - 1))
    assert all(p == 3 for (_, p, _) in rep.rows)


def test_entropy_report_shift_rows_all_one():
    rep = cs.entropy_upper(cs.shift_rule(2, ONE), 1, 5)
    assert all(p == 2**L for (L, p, _) in rep.rows)
    assert all(abs(r - 1.0) < 1e-12 for (_, _, r) in rep.rows)


def test_entropy_tsv_format():
    rep = cs.entropy_upper(F, 1, 2)
    lines = rep.to_tsv().splitlines()
    assert lines[0] == "1\t3\t1.58496250072"
    assert lines[1].startswith("2\t5\t")


def test_trace_budget_error_names_window():
    with pytest.raises(BudgetError, match="trace window"):
        cs.trace_words(F, 1, 20, max_windows=10**4)
