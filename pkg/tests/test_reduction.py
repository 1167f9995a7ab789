import itertools
import warnings

import numpy as np
import pytest

import cashift as cs
from cashift import Sidedness

from util import ONE, and_rule, chain_rule, swap12_relabel

F = cs.example_021_rule()


# ---------------------------------------------------------------------------
# the three-state permutation rule and its powers


def test_example_rule_table_is_pinned():
    # permutation selected by the right neighbor: 3-cycle when it is 1,
    # the transposition fixing 0 otherwise
    assert F.table == (0, 1, 0, 2, 2, 2, 1, 0, 1)
    assert F((0, 0)) == 0
    assert F((1, 1)) == 2
    assert F((2, 1)) == 0
    assert (F.lo, F.hi) == (0, 1)
    assert F.sidedness is ONE


def test_example_inverse_composes_to_identity():
    inv = cs.example_021_inverse()
    ident = cs.identity_rule(3, ONE)
    assert cs.equal_rules(cs.compose(inv, F), ident)
    assert cs.equal_rules(cs.compose(F, inv), ident)


def test_product_power_structure():
    f2 = cs.product_power(1)
    assert f2.source.size == 9
    assert f2.source.factors == (3, 3)
    assert cs.equal_rules(cs.project(f2, 0), F)
    assert cs.is_injective(f2).verdict
    assert cs.subword_complexity(f2, 1, 2) == 25


def test_product_power_validates():
    with pytest.raises(ValueError):
        cs.product_power(0)


# ---------------------------------------------------------------------------
# instances


def _silent_instance(H, q, k=1):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return cs.build_instance(H, q, k)


def test_instance_with_constant_driver_is_passive():
    const = cs.constant_rule(2, ONE, 0)
    inst = _silent_instance(const, 0)
    # the switch never fires, so both rules coincide
    assert cs.equal_rules(inst.switched, inst.passive)


def test_instance_case_split_on_and_driver():
    inst = _silent_instance(and_rule(ONE), 0)
    alph = inst.alphabet
    An = inst.carrier.source.size
    for a0 in range(An):
        for a1 in range(An):
            live = alph.encode((a0, 1)), alph.encode((a1, 1))
            out_a, out_b = alph.decode(inst.switched(live))
            assert out_b == 1
            assert out_a == inst.carrier((a0, a1))
            dead = alph.encode((a0, 1)), alph.encode((a1, 0))
            out_a, out_b = alph.decode(inst.switched(dead))
            assert out_b == 0
            assert out_a == a0  # the carrier holds still


def test_instance_driver_track_identical():
    inst = _silent_instance(and_rule(ONE), 0)
    alph = inst.alphabet
    for w in itertools.product(range(alph.size), repeat=2):
        assert alph.decode(inst.switched(w))[1] == alph.decode(inst.passive(w))[1]


def test_instance_records_spreading():
    assert _silent_instance(and_rule(ONE), 0).q_spreading
    assert not _silent_instance(chain_rule(), 0).q_spreading  # 2 -> 1 next to 0


def test_instance_validation():
    with pytest.raises(ValueError, match="not quiescent"):
        cs.build_instance(cs.make_rule(2, ONE, 0, 1, (1, 1, 1, 1)), 0, 1)
    with pytest.raises(ValueError, match="one-sided"):
        cs.build_instance(cs.make_rule(2, Sidedness.TWO_SIDED, 0, 1, (0, 0, 0, 1)), 0, 1)
    with pytest.raises(ValueError, match="neighborhood"):
        cs.build_instance(cs.make_rule(2, ONE, 0, 2, (0,) * 8), 0, 1)


def test_instance_warns_on_small_k():
    with pytest.warns(UserWarning, match="entropy gap"):
        cs.build_instance(and_rule(ONE), 0, 1)


def test_instance_accepts_width_one_driver():
    drop = cs.make_rule(2, ONE, 0, 0, (0, 0))
    inst = _silent_instance(drop, 0)
    assert inst.driver.width == 2  # padded presentation, same map
    assert cs.nilpotency_within(inst.driver, 0, 3) == 1


# ---------------------------------------------------------------------------
# the conjugacy code


def test_build_phi_constant_driver_is_identity():
    const = cs.constant_rule(2, ONE, 0)
    inst = _silent_instance(const, 0)
    phi = cs.build_phi(inst, 1)
    assert cs.equal_rules(phi, cs.identity_rule(inst.alphabet, ONE))


def test_build_phi_refuses_uncertified_index():
    inst = _silent_instance(chain_rule(), 0)
    with pytest.raises(ValueError, match="not certified"):
        cs.build_phi(inst, 1)  # the chain driver needs two steps, not one


def test_build_phi_driver_component_is_copied():
    inst = _silent_instance(chain_rule(), 0)
    phi = cs.build_phi(inst, 2)
    assert phi.width == 3
    alph = inst.alphabet
    rng = np.random.default_rng(3)
    for _ in range(200):
        w = tuple(int(x) for x in rng.integers(0, alph.size, size=3))
        assert alph.decode(phi(w))[1] == alph.decode(w[0])[1]


def test_chain_instance_certificate_valid():
    inst = _silent_instance(chain_rule(), 0)
    n = cs.nilpotency_within(inst.driver, 0, 4)
    assert n == 2
    phi = cs.build_phi(inst, n)
    cert = cs.verify_certificate(phi, inst.switched, inst.passive)
    assert cert.homomorphism and cert.injective and cert.surjective
    assert cert.valid


def test_after_horizon_the_switched_rule_acts_passively():
    inst = _silent_instance(chain_rule(), 0)
    fn = cs.power(inst.switched, 2)
    lhs = cs.compose(inst.switched, fn)
    rhs = cs.compose(inst.passive, fn)
    assert cs.equal_rules(lhs, rhs)


def test_certificate_identity_on_same_rule():
    ident = cs.identity_rule(3, ONE)
    cert = cs.verify_certificate(ident, F, F)
    assert cert.valid


def test_certificate_reports_mismatch_window():
    ident = cs.identity_rule(3, ONE)
    cert = cs.verify_certificate(ident, F, cs.shift_rule(3, ONE))
    assert not cert.homomorphism and not cert.valid
    window, left, right = cert.mismatch
    assert F(window[: F.width]) == left != right


def test_certificate_flags_noninjective_code():
    fold = cs.BlockMap(cs.Alphabet(3), cs.Alphabet(3), ONE, 0, 0, (0, 0, 1))
    ident = cs.identity_rule(3, ONE)
    cert = cs.verify_certificate(fold, ident, ident)
    assert not cert.injective and not cert.surjective
    assert cert.injectivity_witness is not None
    assert cert.surjectivity_witness is not None


# ---------------------------------------------------------------------------
# bounded search


def test_search_finds_relabeling():
    G = swap12_relabel(F)
    cert = cs.search_strong_conjugacy(F, G, 1)
    assert cert is not None and cert.valid
    assert cert.phi.table == (0, 2, 1)
    assert cs.check_phi_times_phi(F, G, cert.phi)


def test_search_self_finds_identity():
    cert = cs.search_strong_conjugacy(F, F, 1)
    assert cert is not None and cert.phi.table == (0, 1, 2)


def test_search_refutes_identity_rule_within_width_two():
    assert cs.search_strong_conjugacy(F, cs.identity_rule(3, ONE), 2) is None


def test_search_budget_error_reports_width():
    with pytest.raises(cs.BudgetError, match="width"):
        cs.search_strong_conjugacy(F, cs.identity_rule(3, ONE), 2, max_nodes=10)


def test_search_agrees_with_brute_force_at_width_one():
    # independent route: try every width-1 code directly
    G = swap12_relabel(F)
    valid = []
    for table in itertools.product(range(3), repeat=3):
        phi = cs.BlockMap(cs.Alphabet(3), cs.Alphabet(3), ONE, 0, 0, table)
        lhs = cs.compose_blockmaps(phi, F)
        rhs = cs.compose_blockmaps(G, phi)
        if cs.equal_rules(lhs, rhs) and len(set(table)) == 3:
            valid.append(table)
    cert = cs.search_strong_conjugacy(F, G, 1)
    assert valid and cert.phi.table == min(valid)


# ---------------------------------------------------------------------------
# exact trace counts of instances


def test_instance_counts_match_direct_enumeration():
    for H in (chain_rule(), and_rule(ONE)):
        inst = _silent_instance(H, 0)
        for L in (1, 2, 3):
            pf, pg = cs.instance_trace_complexity(inst, L)
            assert pf == cs.subword_complexity(inst.switched, 1, L)
            assert pg == cs.subword_complexity(inst.passive, 1, L)


def test_nilpotent_instance_counts_stabilize():
    inst = _silent_instance(chain_rule(), 0)
    counts = [cs.instance_trace_complexity(inst, L)[0] for L in range(1, 9)]
    diffs = [b - a for a, b in zip(counts, counts[1:])]
    assert all(d >= 0 for d in diffs)
    assert all(d <= 16 for d in diffs)  # bounded growth: entropy-zero shape
    assert counts[-1] == counts[-2]  # flat once the driver has died out
    passive = [cs.instance_trace_complexity(inst, L)[1] for L in range(1, 9)]
    assert passive == [27] + [27] * 7


def test_spreading_instance_counts_split():
    inst = _silent_instance(and_rule(ONE), 0)
    pf, pg = cs.instance_trace_complexity(inst, 8)
    assert pg == 9 * (8 + 1)
    assert pf >= 2000
