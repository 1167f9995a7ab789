"""Coupled-track constructions and machine-checked strong conjugacies.

A strong conjugacy between two rules is an invertible sliding-block code
commuting with both the dynamics and the shift.  This module builds and
checks them exactly:

* :func:`example_021_rule` is a reversible one-sided three-state rule
  (each cell is permuted by a permutation selected by its right neighbor)
  whose width-1 trace is the block shift generated by ``00`` and ``12``;
  its direct powers :func:`product_power` give reversible radius-1 rules
  of arbitrarily high entropy.
* :func:`build_instance` couples a driving track to such a product rule:
  the switched rule advances the carrier track only where the driver does
  not produce its quiescent state, while the passive rule never touches
  the carrier.  When the driver dies out uniformly the two rules are
  strongly conjugate; :func:`build_phi` constructs the conjugacy from a
  certified die-out index and :func:`verify_certificate` checks the
  intertwining equation and invertibility with no sampling.
* :func:`search_strong_conjugacy` enumerates candidate codes of bounded
  width, pruning by the intertwining equation as the table is filled in.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import product as iproduct

import numpy as np

from .core import (
    DEFAULT_MAX_TABLE,
    Alphabet,
    BlockMap,
    BudgetError,
    LocalRule,
    Sidedness,
    Word,
    apply_rows,
    classify_state,
    compose_blockmaps,
    identity_rule,
    pad_blockmap,
    power,
    product_many,
    words_array,
)
from .debruijn import DecisionWitness, is_injective, is_surjective
from .trace import subword_complexity

__all__ = [
    "example_021_rule",
    "product_power",
    "ReductionInstance",
    "build_instance",
    "build_phi",
    "ConjugacyCertificate",
    "verify_certificate",
    "search_strong_conjugacy",
    "instance_trace_complexity",
]

_RHO_PLAIN = (0, 2, 1)  # the transposition fixing 0
_RHO_CYCLE = (1, 2, 0)  # the 3-cycle 0 -> 1 -> 2 -> 0


def example_021_rule() -> LocalRule:
    """Reversible one-sided rule on {0,1,2}: cell i becomes rho(c[i]) where
    rho is the 3-cycle if c[i+1] == 1 and the transposition (1 2) otherwise.
    """
    table = []
    for w0 in range(3):
        for w1 in range(3):
            rho = _RHO_CYCLE if w1 == 1 else _RHO_PLAIN
            table.append(rho[w0])
    alph = Alphabet(3)
    return LocalRule(alph, alph, Sidedness.ONE_SIDED, 0, 1, tuple(table))


def example_021_inverse() -> LocalRule:
    """The radius-1 inverse of :func:`example_021_rule` (pi selected by the
    right neighbor: the transposition (1 2) unless the neighbor is 2)."""
    pi_plain = (0, 2, 1)
    pi_two = (2, 0, 1)
    table = []
    for w0 in range(3):
        for w1 in range(3):
            pi = pi_two if w1 == 2 else pi_plain
            table.append(pi[w0])
    alph = Alphabet(3)
    return LocalRule(alph, alph, Sidedness.ONE_SIDED, 0, 1, tuple(table))


def product_power(k: int, max_table: int = DEFAULT_MAX_TABLE) -> LocalRule:
    """The 2k-fold direct power of :func:`example_021_rule`.

    Alphabet size ``3**(2k)`` with the 2k tracks recorded, so projections
    and trace counting see the product structure.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    return product_many([example_021_rule()] * (2 * k), max_table)


@dataclass(frozen=True)
class ReductionInstance:
    """A coupled pair of rules over a carrier x driver product alphabet.

    ``passive`` is the direct product of the identity on the carrier with
    the driver.  ``switched`` applies the carrier product rule exactly at
    the cells where the driver output differs from ``q`` and holds the
    carrier still elsewhere; both rules act identically on the driver
    track.
    """

    driver: LocalRule
    q: int
    k: int
    carrier: LocalRule
    switched: LocalRule
    passive: LocalRule
    q_spreading: bool

    @property
    def alphabet(self) -> Alphabet:
        return self.switched.source


def build_instance(
    H: LocalRule, q: int, k: int, max_table: int = DEFAULT_MAX_TABLE
) -> ReductionInstance:
    """Couple driver ``H`` (one-sided, neighborhood within [0, 1]) to the
    2k-fold product rule.

    ``q`` must be quiescent for the driver.  Spreading of ``q`` is checked
    and recorded but not required: the conjugacy construction needs
    quiescence and a certified die-out index only.  The entropy separation
    on the switched side is only guaranteed when ``k > log2(|B|)``; smaller
    ``k`` is accepted with a warning since the construction itself is
    unaffected.
    """
    if H.sidedness is not Sidedness.ONE_SIDED:
        raise ValueError("driver must be one-sided")
    if not (0 <= H.lo and H.hi <= 1):
        raise ValueError("driver neighborhood must lie within [0, 1]")
    cls = classify_state(H, q)
    if not cls.quiescent:
        raise ValueError(f"state {q} is not quiescent for the driver")
    driver = H if (H.lo, H.hi) == (0, 1) else _as_local(pad_blockmap(H, 0, 1, max_table))
    Bn = driver.source.size
    if 2**k <= Bn:
        warnings.warn(
            f"k={k} does not exceed log2({Bn}); the entropy gap on the "
            "switched rule is not guaranteed at this size",
            stacklevel=2,
        )
    carrier = product_power(k, max_table)
    An = carrier.source.size
    ident = identity_rule(carrier.source, Sidedness.ONE_SIDED)
    passive = product_many([ident, driver], max_table)
    alph = passive.source

    S = alph.size
    if S**2 > max_table:
        raise BudgetError("coupled rule table", S**2, max_table)
    rows = words_array(S, 2, max_table)
    a0, b0 = rows[:, 0] // Bn, rows[:, 0] % Bn
    a1, b1 = rows[:, 1] // Bn, rows[:, 1] % Bn
    hv = driver.table_array[b0 * Bn + b1]
    fa = carrier.table_array[a0 * An + a1]
    out = np.where(hv != q, fa, a0) * Bn + hv
    switched = LocalRule(
        alph, alph, Sidedness.ONE_SIDED, 0, 1, tuple(int(v) for v in out)
    )
    return ReductionInstance(
        driver=driver,
        q=q,
        k=k,
        carrier=carrier,
        switched=switched,
        passive=passive,
        q_spreading=cls.spreading,
    )


def _as_local(bm: BlockMap) -> LocalRule:
    if isinstance(bm, LocalRule):
        return bm
    return LocalRule(bm.source, bm.target, bm.sidedness, bm.lo, bm.hi, bm.table)


def build_phi(
    inst: ReductionInstance, n: int, max_table: int = DEFAULT_MAX_TABLE
) -> LocalRule:
    """The candidate conjugacy from the switched rule to the passive rule.

    ``n`` must be a certified die-out index: the n-th iterate of the driver
    is re-checked to be constant ``q`` and the construction refuses to
    proceed otherwise.  The carrier component of the output is the carrier
    component of the n-th iterate of the switched rule; the driver
    component is copied from the window's first cell.  Width is ``n + 1``.
    """
    hn = power(inst.driver, n, max_table)
    if any(v != inst.q for v in hn.table):
        raise ValueError(f"driver iterate {n} is not constant {inst.q}: index not certified")
    fn = power(inst.switched, n, max_table)
    S = inst.alphabet.size
    Bn = inst.driver.source.size
    if S ** (n + 1) > max_table:
        raise BudgetError("conjugacy table", S ** (n + 1), max_table)
    rows = words_array(S, n + 1, max_table)
    fvals = apply_rows(fn, rows)[:, 0]
    table = (fvals // Bn) * Bn + rows[:, 0] % Bn
    return LocalRule(
        inst.alphabet,
        inst.alphabet,
        Sidedness.ONE_SIDED,
        0,
        n,
        tuple(int(v) for v in table),
    )


# --------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class ConjugacyCertificate:
    """Machine-checked record that phi strongly conjugates F to G.

    ``homomorphism`` is exact table equality of ``phi o F`` and ``G o phi``
    after padding; injectivity and surjectivity are decided by the pair
    graph and orphan procedures applied to phi itself.  All three must
    pass for the certificate to be valid; failures carry the refuting
    window or witness.
    """

    phi: BlockMap
    homomorphism: bool
    injective: bool
    surjective: bool
    mismatch: tuple[Word, int, int] | None = None
    injectivity_witness: DecisionWitness | None = None
    surjectivity_witness: DecisionWitness | None = None

    @property
    def valid(self) -> bool:
        return self.homomorphism and self.injective and self.surjective


def verify_certificate(
    phi: BlockMap, F: LocalRule, G: LocalRule, max_table: int = DEFAULT_MAX_TABLE
) -> ConjugacyCertificate:
    """Check that phi intertwines F with G and is a bijection of full shifts.

    The homomorphism check is exact rule equality of the two compositions;
    a failure reports one differing composite window with both outputs.
    Injectivity of a surjective one-sided code is checked in its own right
    rather than assumed.
    """
    if phi.source.size != F.source.size:
        raise ValueError("phi source must match the domain rule alphabet")
    if phi.target.size != G.source.size:
        raise ValueError("phi target must match the codomain rule alphabet")
    if not (phi.sidedness is F.sidedness is G.sidedness):
        raise ValueError("sidedness mismatch")
    lhs = compose_blockmaps(phi, F, max_table)
    rhs = compose_blockmaps(G, phi, max_table)
    lo, hi = min(lhs.lo, rhs.lo), max(lhs.hi, rhs.hi)
    pl = pad_blockmap(lhs, lo, hi, max_table)
    pr = pad_blockmap(rhs, lo, hi, max_table)
    mismatch = None
    hom = pl.table == pr.table
    if not hom:
        diff = np.nonzero(pl.table_array != pr.table_array)[0]
        i = int(diff[0])
        mismatch = (pl.window_word(i), int(pl.table[i]), int(pr.table[i]))
    inj = is_injective(phi)
    surj = is_surjective(phi)
    return ConjugacyCertificate(
        phi=phi,
        homomorphism=hom,
        injective=inj.verdict,
        surjective=surj.verdict,
        mismatch=mismatch,
        injectivity_witness=None if inj.verdict else inj,
        surjectivity_witness=None if surj.verdict else surj,
    )


# --------------------------------------------------------------------------
# bounded search


def search_strong_conjugacy(
    F: LocalRule,
    G: LocalRule,
    max_width: int,
    max_nodes: int = 10**7,
    max_table: int = DEFAULT_MAX_TABLE,
) -> ConjugacyCertificate | None:
    """First valid conjugacy code of width <= max_width, in (width, table)
    lexicographic order; None means no code within the width budget exists
    (it never means the rules are not conjugate).

    The table is filled entry by entry and every composite window whose
    entries are all placed is checked against the intertwining equation
    immediately, so most of the space is pruned long before a full table
    exists.  Full candidates still undergo the complete certificate.
    """
    if F.sidedness is not G.sidedness:
        raise ValueError("sidedness mismatch")
    A, B = F.source.size, G.source.size
    visited = 0
    for v in range(1, max_width + 1):
        offsets = [0] if F.sidedness is Sidedness.ONE_SIDED else list(range(-(v - 1), 1))
        for off in offsets:
            checker = _HomChecker(F, G, v, off, max_table)
            table: list[int] = []
            # iterative DFS in lexicographic value order
            def dfs(pos: int) -> BlockMap | None:
                nonlocal visited
                if pos == A**v:
                    phi = BlockMap(
                        F.source, G.source, F.sidedness, off, off + v - 1, tuple(table)
                    )
                    cert = verify_certificate(phi, F, G, max_table)
                    return phi if cert.valid else None
                for val in range(B):
                    visited += 1
                    if visited > max_nodes:
                        raise BudgetError(
                            f"conjugacy search at width {v}", visited, max_nodes
                        )
                    table.append(val)
                    if checker.consistent(table, pos):
                        found = dfs(pos + 1)
                        if found is not None:
                            return found
                    table.pop()
                return None

            found = dfs(0)
            if found is not None:
                return verify_certificate(found, F, G, max_table)
    return None


class _HomChecker:
    """Incremental checker for ``phi o F == G o phi`` on composite windows.

    For each word over the common composite window, the left side needs the
    phi entry at the F-image window and the right side needs the phi
    entries at every G-input position; the constraint is tested as soon as
    its last-placed entry is assigned.
    """

    def __init__(self, F: LocalRule, G: LocalRule, v: int, off: int, max_table: int):
        A = F.source.size
        lo = min(off + F.lo, off + G.lo)
        hi = max(off + v - 1 + F.hi, off + v - 1 + G.hi)
        wc = hi - lo + 1
        if A**wc > max_table:
            raise BudgetError("conjugacy constraint window", A**wc, max_table)
        rows = words_array(A, wc, max_table)
        dl = (off + F.lo) - lo
        fslice = rows[:, dl : dl + v + F.width - 1]
        fimg = apply_rows(F, fslice)
        lhs_idx = np.zeros(len(rows), dtype=np.int64)
        for j in range(v):
            lhs_idx = lhs_idx * A + fimg[:, j]
        dr = (off + G.lo) - lo
        gslice = rows[:, dr : dr + v + G.width - 1]
        wg = G.width
        rhs_idx = np.zeros((len(rows), wg), dtype=np.int64)
        for r in range(wg):
            col = np.zeros(len(rows), dtype=np.int64)
            for j in range(v):
                col = col * A + gslice[:, r + j]
            rhs_idx[:, r] = col
        self.lhs_idx = lhs_idx
        self.rhs_idx = rhs_idx
        self.gtab = G.table_array
        self.B = G.source.size
        trigger = np.maximum(lhs_idx, rhs_idx.max(axis=1))
        self.by_trigger: list[list[int]] = [[] for _ in range(A**v)]
        for row, t in enumerate(trigger.tolist()):
            self.by_trigger[t].append(row)

    def consistent(self, table: list[int], pos: int) -> bool:
        for row in self.by_trigger[pos]:
            gidx = 0
            for r in range(self.rhs_idx.shape[1]):
                gidx = gidx * self.B + table[self.rhs_idx[row, r]]
            if table[self.lhs_idx[row]] != int(self.gtab[gidx]):
                return False
        return True


# --------------------------------------------------------------------------
# exact trace counting for coupled instances


def instance_trace_complexity(
    inst: ReductionInstance, L: int, max_set: int = 4_000_000
) -> tuple[int, int]:
    """Exact ``p_L`` of the width-1 traces of (switched, passive).

    The passive rule is a direct product, so its count factors.  The
    switched rule is not, but its driver track is autonomous: group the
    driver windows by (driver column, switch spacetime pattern), evolve a
    single three-state track per distinct pattern, and combine the 2k
    identical tracks per class.  This avoids enumerating the full product
    window and is cross-checked against direct enumeration in the tests.
    """
    drv = inst.driver
    Bn = drv.source.size
    q = inst.q
    tracks = 2 * inst.k
    f3 = example_021_rule().table_array

    if Bn**L > max_set:
        raise BudgetError("driver window enumeration", Bn**L, max_set)

    by_gamma: dict[Word, set] = {}
    for beta in iproduct(range(Bn), repeat=L):
        row = list(beta)
        gamma = [row[0]]
        pattern = []
        for _ in range(L - 1):
            switches = tuple(
                int(drv.table[row[x] * Bn + row[x + 1]]) != q
                for x in range(len(row) - 1)
            )
            row = [int(drv.table[row[x] * Bn + row[x + 1]]) for x in range(len(row) - 1)]
            pattern.append(switches)
            gamma.append(row[0])
        by_gamma.setdefault(tuple(gamma), set()).add(tuple(pattern))

    track_sets: dict[tuple, frozenset] = {}

    def track_columns(pattern: tuple) -> frozenset:
        if pattern not in track_sets:
            cols = set()
            for alpha in iproduct(range(3), repeat=L):
                row = list(alpha)
                col = [row[0]]
                for t in range(L - 1):
                    sw = pattern[t]
                    row = [
                        int(f3[row[x] * 3 + row[x + 1]]) if sw[x] else row[x]
                        for x in range(len(row) - 1)
                    ]
                    col.append(row[0])
                cols.add(tuple(col))
            track_sets[pattern] = frozenset(cols)
        return track_sets[pattern]

    p_switched = 0
    for gamma, patterns in by_gamma.items():
        sets = {track_columns(p) for p in patterns}
        if len(sets) == 1:
            n = len(next(iter(sets)))
            if n**tracks > max_set:
                raise BudgetError("track combination", n**tracks, max_set)
            p_switched += n**tracks
        else:
            union = set()
            for s in sets:
                if len(s) ** tracks > max_set:
                    raise BudgetError("track combination", len(s) ** tracks, max_set)
                union.update(iproduct(s, repeat=tracks))
            p_switched += len(union)

    p_passive = subword_complexity(inst.passive, 1, L)
    return p_switched, p_passive
