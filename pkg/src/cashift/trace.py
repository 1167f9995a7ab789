"""Exact trace-subshift word enumeration and entropy upper bounds.

The width-``k`` trace of a rule is the subshift of column sequences read
off cells ``[0, k)`` along orbits: the time-``t`` symbol of a column is the
block ``F^t(c)[0:k]``.  Over a full shift the depth-``L`` column is a
function of the initial word on a finite dependence window and every
window value occurs, so enumerating all windows yields the exact set of
length-``L`` trace words; exponential cost is accepted and guarded by an
explicit budget.

For rules assembled by :func:`cashift.core.product` the trace factors
track by track, so word sets are combined from the factor traces instead
of enumerating the product window.

Finite counts only bound the entropy from above (subadditivity of
``log p_L``); nothing here claims a numeric lower bound on the entropy of
the rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as iproduct

import numpy as np

from .core import (
    BlockMap,
    BudgetError,
    LocalRule,
    Word,
    apply_rows,
    detect_tracks,
    words_array,
)

__all__ = [
    "TraceTable",
    "EntropyReport",
    "trace_words",
    "subword_complexity",
    "entropy_upper",
    "block_shift_words",
    "column_image",
]

DEFAULT_MAX_WINDOWS = 4_000_000
DEFAULT_MAX_COMBOS = 4_000_000


@dataclass(frozen=True)
class TraceTable:
    """The exact set of depth-``L`` column words over cells ``[0, k)``.

    Column words are tuples of length ``L`` whose entries are blocks in
    ``0 .. alphabet_size**k - 1`` (cells packed big-endian).
    """

    alphabet_size: int
    k: int
    L: int
    words: frozenset[Word]

    @property
    def p(self) -> int:
        return len(self.words)

    @property
    def block_size(self) -> int:
        return self.alphabet_size**self.k

    def unpack(self, word: Word) -> tuple[Word, ...]:
        """Column word as a tuple of per-time cell blocks."""
        rows = []
        for b in word:
            cells = []
            for _ in range(self.k):
                cells.append(b % self.alphabet_size)
                b //= self.alphabet_size
            rows.append(tuple(reversed(cells)))
        return tuple(rows)


@dataclass(frozen=True)
class EntropyReport:
    """Per-depth exact counts and the upper-bound rows ``log2(p_L)/L``."""

    k: int
    rows: tuple[tuple[int, int, float], ...]
    bound_direction: str = "upper"

    def to_tsv(self) -> str:
        lines = [f"{L}\t{p}\t{ratio:.12g}" for (L, p, ratio) in self.rows]
        return "\n".join(lines) + "\n"


def _dependence_window(rule: BlockMap, k: int, L: int) -> tuple[int, int]:
    """(start, length) of the initial window that determines a column."""
    left = (L - 1) * min(rule.lo, 0)
    right = (k - 1) + (L - 1) * max(rule.hi, 0)
    return left, right - left + 1


def trace_words(
    rule: LocalRule,
    k: int,
    L: int,
    max_windows: int = DEFAULT_MAX_WINDOWS,
) -> TraceTable:
    """Enumerate the exact depth-``L`` words of the width-``k`` trace.

    Product rules are handled through their factor traces; all other rules
    enumerate the full dependence window, which raises a
    :class:`BudgetError` naming the window when ``|A|**window`` exceeds
    ``max_windows``.
    """
    if k < 0 or L < 1:
        raise ValueError("need k >= 0 and L >= 1")
    A = rule.source.size
    if k == 0:
        return TraceTable(A, 0, L, frozenset({(0,) * L}))

    tracks = detect_tracks(rule)
    if tracks is not None:
        return _combine_factor_traces(rule, tracks, k, L, max_windows)

    s0, W = _dependence_window(rule, k, L)
    if A**W > max_windows:
        raise BudgetError(f"trace window of {W} cells", A**W, max_windows)
    rows = words_array(A, W, max_windows)
    blocks = np.zeros((len(rows), L), dtype=np.int64)
    cur = rows
    s = s0
    for t in range(L):
        seg = cur[:, -s : -s + k] if s != 0 else cur[:, 0:k]
        packed = np.zeros(len(rows), dtype=np.int64)
        for j in range(k):
            packed = packed * A + seg[:, j]
        blocks[:, t] = packed
        if t < L - 1:
            cur = apply_rows(rule, cur)
            s -= rule.lo
    words = _dedup_columns(blocks, A**k)
    return TraceTable(A, k, L, words)


def _dedup_columns(blocks: np.ndarray, block_size: int) -> frozenset[Word]:
    L = blocks.shape[1]
    if block_size**L < 2**62:
        packed = np.zeros(len(blocks), dtype=np.int64)
        for t in range(L):
            packed = packed * block_size + blocks[:, t]
        uniq = np.unique(packed)
        words = set()
        for v in uniq.tolist():
            col = []
            for _ in range(L):
                col.append(v % block_size)
                v //= block_size
            words.add(tuple(reversed(col)))
        return frozenset(words)
    uniq = np.unique(blocks, axis=0)
    return frozenset(tuple(int(x) for x in row) for row in uniq)


def _combine_factor_traces(rule, factors, k, L, max_windows) -> TraceTable:
    sizes = [f.source.size for f in factors]
    tables = [trace_words(f, k, L, max_windows) for f in factors]
    total = math.prod(t.p for t in tables)
    if total > DEFAULT_MAX_COMBOS:
        raise BudgetError("product trace combination", total, DEFAULT_MAX_COMBOS)
    A = rule.source.size
    unpacked = [[t.unpack(w) for w in sorted(t.words)] for t in tables]
    words = set()
    for rows in iproduct(*unpacked):
        col = []
        for t in range(L):
            packed = 0
            for j in range(k):
                cell = 0
                for i, f in enumerate(sizes):
                    cell = cell * f + rows[i][t][j]
                packed = packed * A + cell
            col.append(packed)
        words.add(tuple(col))
    return TraceTable(A, k, L, frozenset(words))


def subword_complexity(
    rule: LocalRule, k: int, L: int, max_windows: int = DEFAULT_MAX_WINDOWS
) -> int:
    """Number of distinct depth-``L`` trace words (``p_L``).

    Counts of product rules multiply track by track, which avoids
    materializing the combined word set.
    """
    if k >= 1:
        tracks = detect_tracks(rule)
        if tracks is not None:
            return math.prod(
                subword_complexity(f, k, L, max_windows) for f in tracks
            )
    return trace_words(rule, k, L, max_windows).p


def entropy_upper(
    rule: LocalRule, k: int, L_max: int, max_windows: int = DEFAULT_MAX_WINDOWS
) -> EntropyReport:
    """Exact counts ``p_L`` for L = 1..L_max and the bounds ``log2(p_L)/L``.

    Each row is a valid upper bound on the entropy of the width-``k``
    trace; for a one-sided rule observed at ``k = radius`` the trace
    entropy equals the entropy of the rule itself, so the rows bound that
    too.  No analogous identity is claimed for two-sided rules.
    """
    rows = []
    for L in range(1, L_max + 1):
        p = subword_complexity(rule, k, L, max_windows)
        rows.append((L, p, math.log2(p) / L if p > 0 else 0.0))
    return EntropyReport(k, tuple(rows))


def block_shift_words(blocks: set[Word] | frozenset[Word], L: int) -> set[Word]:
    """Exact length-``L`` factor set of bi-infinite concatenations of blocks.

    Enumerates every phase and every tuple of blocks covering the window;
    serves as an independent oracle for trace languages of block shifts.
    """
    blocks = {tuple(b) for b in blocks}
    if not blocks:
        raise ValueError("need at least one block")
    lengths = {len(b) for b in blocks}
    if len(lengths) != 1 or 0 in lengths:
        raise ValueError("blocks must have equal positive lengths")
    b = lengths.pop()
    out: set[Word] = set()
    for phase in range(b):
        count = -(-(phase + L) // b)
        for combo in iproduct(sorted(blocks), repeat=count):
            word = tuple(s for blk in combo for s in blk)
            out.add(word[phase : phase + L])
    return out


def column_image(bm: BlockMap, column: Word, k: int, source_size: int) -> Word:
    """Apply a width-1-in-time block map symbolwise to a packed column.

    Helper for factor-map monotonicity checks: maps each packed ``k``-cell
    block through ``bm`` cellwise when ``bm`` has width 1.
    """
    if bm.width != 1:
        raise ValueError("column_image needs a width-1 map")
    out = []
    for blk in column:
        cells = []
        for _ in range(k):
            cells.append(blk % source_size)
            blk //= source_size
        cells.reverse()
        packed = 0
        for c in cells:
            packed = packed * bm.target.size + int(bm.table[c])
        out.append(packed)
    return tuple(out)
