import itertools

import numpy as np
import pytest

import cashift as cs
from cashift import BudgetError
from cashift.sft import relabel_presentation, replay_amalgamation

from util import ONE, TWO, swap12_relabel

F = cs.example_021_rule()

GOLDEN = cs.sft_from_forbidden(2, {(1, 1)})
FULL2 = cs.make_presentation([[1, 1], [1, 1]], ONE)
LOOP2 = cs.make_presentation([[2]], ONE)


def _random_presentations(rng, count, max_n=5, max_entry=2, plant=False):
    out = []
    while len(out) < count:
        n = int(rng.integers(1, max_n + 1))
        M = rng.integers(0, max_entry + 1, size=(n, n))
        if plant and n >= 2:
            M[:, 1] = M[:, 0]  # guarantee a mergeable pair
        pres = cs.make_presentation(M, ONE)
        if not pres.is_empty:
            out.append(pres)
    return out


# ---------------------------------------------------------------------------
# construction from forbidden words


def test_golden_mean_presentation():
    assert GOLDEN.matrix == ((1, 1), (1, 0))
    assert [cs.word_count(GOLDEN, L) for L in (1, 2, 3, 4)] == [2, 3, 5, 8]


def test_full_shift_from_empty_forbidden_set():
    full = cs.sft_from_forbidden(3, set())
    assert [cs.word_count(full, L) for L in (1, 2, 3)] == [3, 9, 27]


def test_everything_forbidden_is_empty_and_flagged():
    empty = cs.sft_from_forbidden(2, {(0,), (1,)})
    assert empty.is_empty
    assert cs.word_count(empty, 3) == 0
    assert cs.periodic_count(empty, 2) == 0


def test_forbidden_words_validation():
    with pytest.raises(ValueError):
        cs.sft_from_forbidden(2, {()})
    with pytest.raises(ValueError):
        cs.sft_from_forbidden(2, {(2,)})


def _oracle_factors(size, forb, L):
    """Independent factor oracle: locally allowed plus two-way viability,
    computed by greatest fixpoint on raw suffix/prefix words."""
    forb = {tuple(w) for w in forb}
    m = max(2, max((len(w) for w in forb), default=2))

    def ok(word):
        return not any(
            word[i : i + len(f)] == f
            for f in forb
            for i in range(len(word) - len(f) + 1)
        )

    states = {w for w in itertools.product(range(size), repeat=m - 1) if ok(w)}
    right = set(states)
    while True:
        keep = {
            u for u in right if any(ok(u + (a,)) and u[1:] + (a,) in right for a in range(size))
        }
        if keep == right:
            break
        right = keep
    left = set(states)
    while True:
        keep = {
            u for u in left if any(ok((a,) + u) and (a,) + u[:-1] in left for a in range(size))
        }
        if keep == left:
            break
        left = keep

    def is_factor(w):
        if not ok(w):
            return False
        if len(w) >= m - 1:
            return w[-(m - 1):] in right and w[: m - 1] in left
        return any(
            is_factor(e)
            for e in (x + w + y
                      for x in itertools.product(range(size), repeat=m - 1 - len(w))
                      for y in itertools.product(range(size), repeat=m - 1 - len(w)))
        )

    return {w for w in itertools.product(range(size), repeat=L) if is_factor(w)}


def test_language_matches_independent_oracle():
    rng = np.random.default_rng(31)
    cases = [
        (2, {(1, 1)}),
        (2, {(0, 0), (1, 1)}),
        (3, {(0, 1), (2, 2, 1)}),
        (2, {(1, 0, 1)}),
        (3, {(0,), (1, 2)}),  # killing a whole symbol exercises trimming
    ]
    for _ in range(5):
        nwords = int(rng.integers(1, 4))
        forb = {
            tuple(int(x) for x in rng.integers(0, 2, size=rng.integers(1, 4)))
            for _ in range(nwords)
        }
        cases.append((2, forb))
    for size, forb in cases:
        pres = cs.sft_from_forbidden(size, forb)
        m = max(2, max((len(w) for w in forb), default=2))
        for L in range(1, m + 4):
            expected = len(_oracle_factors(size, forb, L))
            assert cs.word_count(pres, L) == expected, (forb, L)


# ---------------------------------------------------------------------------
# counts


def test_word_count_unlabeled_edge_shift():
    assert cs.word_count(LOOP2, 5) == 32
    assert cs.word_count(FULL2, 1) == 4


def test_periodic_counts():
    assert cs.periodic_count(FULL2, 1) == 2
    assert cs.periodic_count(GOLDEN, 3) == 4
    assert cs.periodic_count(GOLDEN, 1) == 1


# ---------------------------------------------------------------------------
# amalgamation


def test_full_shift_amalgamates_to_single_loop():
    out, tr = cs.total_amalgamation(FULL2)
    assert out.matrix == ((2,),)
    assert len(tr.steps) == 1


def test_golden_mean_is_already_amalgamated():
    out, tr = cs.total_amalgamation(GOLDEN)
    assert out.matrix == GOLDEN.matrix
    assert tr.steps == ()


def test_amalgamation_idempotent():
    out, _ = cs.total_amalgamation(LOOP2)
    assert out.matrix == ((2,),)
    twice, tr = cs.total_amalgamation(cs.make_presentation([[1, 1], [1, 1]], ONE))
    again, tr2 = cs.total_amalgamation(twice)
    assert again.matrix == twice.matrix and tr2.steps == ()


def test_amalgamation_rejects_two_sided():
    with pytest.raises(ValueError, match="one-sided"):
        cs.total_amalgamation(cs.make_presentation([[2]], TWO))


def test_replay_reproduces_output():
    rng = np.random.default_rng(8)
    for pres in _random_presentations(rng, 15, plant=True):
        out, tr = cs.total_amalgamation(pres)
        assert np.array_equal(replay_amalgamation(pres.to_array(), tr), out.to_array())


def test_amalgamation_preserves_periodic_counts_and_radius():
    rng = np.random.default_rng(9)
    corpus = _random_presentations(rng, 30) + _random_presentations(rng, 30, plant=True)
    for pres in corpus:
        out, _ = cs.total_amalgamation(pres)
        for n in range(1, 7):
            assert cs.periodic_count(pres, n) == cs.periodic_count(out, n)
        ra = max(abs(np.linalg.eigvals(pres.to_array())))
        rb = max(abs(np.linalg.eigvals(out.to_array()))) if not out.is_empty else 0.0
        assert abs(ra - rb) < 1e-8
        # the merge is a surjective one-block recoding, so counts cannot grow
        for L in range(1, 9):
            assert cs.word_count(out, L) <= cs.word_count(pres, L)


def test_merge_order_independence():
    rng = np.random.default_rng(10)
    for pres in _random_presentations(rng, 25, plant=True):
        out, _ = cs.total_amalgamation(pres)
        # re-run with randomized merge choices, implemented locally
        M = pres.to_array().copy()
        while True:
            n = M.shape[0]
            pairs = [
                (i, j)
                for i in range(n)
                for j in range(i + 1, n)
                if np.array_equal(M[:, i], M[:, j])
            ]
            if not pairs:
                break
            i, j = pairs[int(rng.integers(len(pairs)))]
            M2 = M.copy()
            M2[i, :] += M2[j, :]
            keep = [t for t in range(n) if t != j]
            M = M2[np.ix_(keep, keep)]
        assert cs.find_graph_isomorphism(M, out.to_array()) is not None


def test_row_convention_available_behind_flag():
    x = cs.make_presentation([[1, 2], [1, 2]], ONE)
    cols, _ = cs.total_amalgamation(x, "columns")
    rows, _ = cs.total_amalgamation(x, "rows")
    assert cols.matrix == ((1, 2), (1, 2))  # columns differ: no merge
    assert rows.matrix == ((3,),)


# ---------------------------------------------------------------------------
# one-sided conjugacy decision


def test_full_two_shift_presentations_conjugate():
    assert cs.one_sided_conjugate(FULL2, LOOP2)


def test_full_two_vs_golden_mean_refuted():
    # already separated by the language: 4 distinct 2-blocks against 3
    full_lang = cs.sft_from_forbidden(2, set())
    assert cs.word_count(full_lang, 2) == 4 and cs.word_count(GOLDEN, 2) == 3
    assert not cs.one_sided_conjugate(FULL2, GOLDEN)


def test_conjugacy_reflexive():
    assert cs.one_sided_conjugate(GOLDEN, GOLDEN)


def test_row_convention_would_overmerge():
    # [[1,2],[1,2]] has points with four preimages under the shift while the
    # full 3-shift is uniformly 3-to-1, so they are not conjugate; the
    # column convention refutes, the row convention wrongly affirms.
    x = cs.make_presentation([[1, 2], [1, 2]], ONE)
    y = cs.make_presentation([[3]], ONE)
    assert not cs.one_sided_conjugate(x, y)
    assert cs.one_sided_conjugate(x, y, convention="rows")


def test_conjugacy_is_equivalence_on_corpus():
    rng = np.random.default_rng(11)
    corpus = [FULL2, LOOP2, GOLDEN] + _random_presentations(rng, 7, max_n=4)
    n = len(corpus)
    rel = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(n):
            rel[i, j] = cs.one_sided_conjugate(corpus[i], corpus[j])
    assert all(rel[i, i] for i in range(n))
    assert np.array_equal(rel, rel.T)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if rel[i, j] and rel[j, k]:
                    assert rel[i, k]


def test_conjugate_pairs_share_true_invariants():
    rng = np.random.default_rng(12)
    corpus = [FULL2, LOOP2, GOLDEN] + _random_presentations(rng, 8, max_n=4, plant=True)
    for x in corpus:
        for y in corpus:
            if cs.one_sided_conjugate(x, y):
                for n in range(1, 7):
                    assert cs.periodic_count(x, n) == cs.periodic_count(y, n)


def test_conjugacy_budget():
    rng = np.random.default_rng(13)
    big = cs.make_presentation(rng.integers(1, 3, size=(14, 14)), ONE)
    with pytest.raises(BudgetError):
        cs.one_sided_conjugate(big, big, max_states=12)


# ---------------------------------------------------------------------------
# rule-derived subshifts


def test_graph_subshift_identity_diagonal():
    gs = cs.graph_subshift(cs.identity_rule(2, ONE))
    # after trimming only the diagonal pairs remain
    assert gs.state_words == ((0, 0), (1, 1))
    assert [cs.word_count(relabel_presentation(gs, lambda u: u // 2), L) for L in (1, 2, 3)] == [2, 4, 8]


def test_graph_subshift_first_track_is_full_shift():
    gs = cs.graph_subshift(F)
    proj = relabel_presentation(gs, lambda u: u // 3)
    for L in range(1, 7):
        assert cs.word_count(proj, L) == 3**L


def test_graph_subshift_shift_constraint():
    sig = cs.make_rule(2, ONE, 1, 1, (0, 1))
    gs = cs.graph_subshift(sig)
    # b0 = a1: edges leave (a0, b0) exactly into pairs with a1 == b0
    idx = {w: i for i, w in enumerate(gs.state_words)}
    M = gs.to_array()
    for (a0, b0), u in idx.items():
        for (a1, b1), v in idx.items():
            assert M[u, v] == (1 if a1 == b0 else 0)


def test_graph_subshift_two_sided_left_window():
    sig_back = cs.make_rule(2, TWO, -1, -1, (0, 1))
    gs = cs.graph_subshift(sig_back)
    # b1 = a0 for the window [-1, 0] presentation
    idx = {w: i for i, w in enumerate(gs.state_words)}
    M = gs.to_array()
    for (a0, b0), u in idx.items():
        for (a1, b1), v in idx.items():
            assert M[u, v] == (1 if b1 == a0 else 0)


def test_graph_subshift_width_limit():
    wide = cs.make_rule(2, ONE, 0, 2, (0,) * 8)
    with pytest.raises(ValueError, match="radius 1"):
        cs.graph_subshift(wide)


def test_phi_times_phi_checks():
    G = swap12_relabel(F)
    swap = cs.BlockMap(cs.Alphabet(3), cs.Alphabet(3), ONE, 0, 0, (0, 2, 1))
    ident = cs.identity_rule(3, ONE)
    assert cs.check_phi_times_phi(F, F, ident)
    assert cs.check_phi_times_phi(F, G, swap)
    assert not cs.check_phi_times_phi(F, ident, ident)
    with pytest.raises(ValueError):
        cs.check_phi_times_phi(F, cs.identity_rule(2, ONE), ident)


# ---------------------------------------------------------------------------
# trace SFT approximation and the bounded pipeline


def test_trace_sft_approx_example_rule_depth_two():
    pres, exact = cs.trace_sft_approx(F, 1, 2)
    assert not exact  # the even-run constraint of the trace is not 2-local
    assert pres.state_words == ((0,), (1,), (2,))
    assert pres.matrix == ((1, 1, 0), (0, 0, 1), (1, 1, 0))


def test_trace_sft_approx_identity():
    pres, exact = cs.trace_sft_approx(cs.identity_rule(3, ONE), 1, 2)
    assert exact
    assert pres.matrix == ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def test_trace_sft_approx_shift_exact_at_depth_one():
    pres, exact = cs.trace_sft_approx(cs.shift_rule(2, ONE), 1, 1)
    assert exact
    assert pres.matrix == ((2,),)


def test_pipeline_verdicts():
    s2 = cs.shift_rule(2, ONE)
    s3 = cs.shift_rule(3, ONE)
    assert cs.positively_expansive_conjugacy(s2, s2, 1, 2) == "conjugate"
    assert cs.positively_expansive_conjugacy(s2, s3, 1, 2) == "not_conjugate"
    # the example rule's trace is not an SFT at depth 2: certify fails
    assert cs.positively_expansive_conjugacy(F, F, 1, 2) == "unknown"


# ---------------------------------------------------------------------------
# matrix text format


def test_matrix_roundtrip():
    text = cs.format_matrix(GOLDEN)
    assert text == "2\n1 1\n1 0\n"
    back = cs.parse_matrix(text)
    assert back.matrix == GOLDEN.matrix


def test_matrix_parse_errors():
    with pytest.raises(ValueError, match="line 1"):
        cs.parse_matrix("x\n")
    with pytest.raises(ValueError, match="expected 2"):
        cs.parse_matrix("2\n1 1\n1\n")
    with pytest.raises(ValueError, match="rows"):
        cs.parse_matrix("2\n1 1\n")


def test_presentation_trims_stranded_states():
    pres = cs.make_presentation([[0, 1], [0, 1]], ONE)
    assert pres.matrix == ((1,),)
