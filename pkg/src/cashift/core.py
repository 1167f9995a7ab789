"""Alphabets, sliding-block maps, and the local-rule algebra.

A cellular automaton on a full shift is given by a finite lookup table: a
:class:`LocalRule` maps every neighborhood word to an output state.  A
:class:`BlockMap` is the same object with possibly distinct source and
target alphabets; it induces a shift-commuting map between the full shifts,
and cellular automata are exactly the block maps from a full shift to
itself.

Tables are stored flat, indexed by the neighborhood word read as a
big-endian base-``size`` integer (state 0 smallest), so lookup is O(1) and
serialization is canonical.  All values are immutable after construction
and every operation here is a pure function.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Sidedness",
    "Alphabet",
    "BlockMap",
    "LocalRule",
    "CyclicConfig",
    "Word",
    "BudgetError",
    "RuleFormatError",
    "DEFAULT_MAX_TABLE",
    "StateClass",
    "make_rule",
    "identity_rule",
    "constant_rule",
    "shift_rule",
    "apply_word",
    "apply_rows",
    "apply_cyclic",
    "rotate",
    "pad_blockmap",
    "compose_blockmaps",
    "compose",
    "power",
    "product",
    "product_many",
    "project",
    "projection_map",
    "equal_rules",
    "classify_state",
    "all_words",
    "words_array",
    "parse_rule",
    "format_rule",
]

Word = tuple[int, ...]

DEFAULT_MAX_TABLE = 10**8


class BudgetError(RuntimeError):
    """An operation would exceed its configured resource budget."""

    def __init__(self, what: str, needed: int, budget: int):
        super().__init__(f"{what}: needs {needed}, budget is {budget}")
        self.what = what
        self.needed = needed
        self.budget = budget


class RuleFormatError(ValueError):
    """A rule file failed to parse; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class Sidedness(Enum):
    """Index set of configurations: the naturals or the integers."""

    ONE_SIDED = "one"
    TWO_SIDED = "two"

    @staticmethod
    def parse(text: str) -> "Sidedness":
        for s in Sidedness:
            if s.value == text:
                return s
        raise ValueError(f"unknown sidedness {text!r} (expected 'one' or 'two')")


@dataclass(frozen=True)
class Alphabet:
    """A finite state set ``{0, .., size-1}``.

    ``factors`` records a cartesian-product structure (track sizes, outer
    track first); when present their product must equal ``size`` and states
    encode tracks big-endian, so tracks can be projected out again.
    """

    size: int
    factors: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("alphabet size must be >= 1")
        if self.factors is not None:
            if math.prod(self.factors) != self.size:
                raise ValueError("factor sizes must multiply to the alphabet size")
            if any(f < 1 for f in self.factors):
                raise ValueError("factor sizes must be positive")

    def encode(self, parts: Sequence[int]) -> int:
        if self.factors is None:
            raise ValueError("alphabet has no factor structure")
        s = 0
        for f, p in zip(self.factors, parts, strict=True):
            if not 0 <= p < f:
                raise ValueError("track state out of range")
            s = s * f + p
        return s

    def decode(self, state: int) -> tuple[int, ...]:
        if self.factors is None:
            raise ValueError("alphabet has no factor structure")
        parts = []
        for f in reversed(self.factors):
            parts.append(state % f)
            state //= f
        return tuple(reversed(parts))


@dataclass(frozen=True)
class BlockMap:
    """A sliding-block code between full shifts.

    The induced map sends a configuration ``c`` to the configuration whose
    cell ``t`` is ``table[c[t+lo] .. c[t+hi]]``.  One-sided maps require
    ``lo >= 0`` so the window never looks left of the current cell.
    """

    source: Alphabet
    target: Alphabet
    sidedness: Sidedness
    lo: int
    hi: int
    table: tuple[int, ...]

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("neighborhood interval is empty")
        if self.sidedness is Sidedness.ONE_SIDED and self.lo < 0:
            raise ValueError("one-sided maps need a neighborhood within [0, inf)")
        if len(self.table) != self.source.size**self.width:
            raise ValueError(
                f"table has {len(self.table)} entries, expected "
                f"{self.source.size}^{self.width}"
            )
        if any(not 0 <= v < self.target.size for v in self.table):
            raise ValueError("table value out of target alphabet")

    @property
    def width(self) -> int:
        return self.hi - self.lo + 1

    @property
    def radius(self) -> int:
        return max(abs(self.lo), abs(self.hi))

    @property
    def is_endomorphism(self) -> bool:
        return self.source == self.target

    @cached_property
    def table_array(self) -> np.ndarray:
        arr = np.asarray(self.table, dtype=np.int64)
        arr.flags.writeable = False
        return arr

    def window_index(self, word: Sequence[int]) -> int:
        if len(word) != self.width:
            raise ValueError("window word has the wrong length")
        idx = 0
        for s in word:
            if not 0 <= s < self.source.size:
                raise ValueError("symbol out of alphabet")
            idx = idx * self.source.size + s
        return idx

    def window_word(self, index: int) -> Word:
        out = []
        for _ in range(self.width):
            out.append(index % self.source.size)
            index //= self.source.size
        return tuple(reversed(out))

    def __call__(self, word: Sequence[int]) -> int:
        """Table lookup on a single neighborhood word."""
        return self.table[self.window_index(word)]


@dataclass(frozen=True)
class LocalRule(BlockMap):
    """A block map from a full shift to itself: a cellular automaton.

    ``factor_rules`` is set on rules built by :func:`product` /
    :func:`product_many`; it lets projections and trace enumeration exploit
    the track structure and never affects equality of rules.
    """

    factor_rules: tuple["LocalRule", ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        super().__post_init__()
        if self.source != self.target:
            raise ValueError("a local rule needs equal source and target alphabets")

    @property
    def alphabet(self) -> Alphabet:
        return self.source


@dataclass(frozen=True)
class CyclicConfig:
    """A spatially periodic configuration, stored as one period."""

    word: Word

    def __post_init__(self):
        if len(self.word) < 1:
            raise ValueError("period must be >= 1")

    @property
    def period(self) -> int:
        return len(self.word)

    def value(self, i: int) -> int:
        return self.word[i % self.period]

    def expand(self, n: int) -> Word:
        reps = -(-n // self.period)
        return (self.word * reps)[:n]


@dataclass(frozen=True)
class StateClass:
    quiescent: bool
    spreading: bool


# --------------------------------------------------------------------------
# constructors


def make_rule(
    size: int,
    sidedness: Sidedness,
    lo: int,
    hi: int,
    table: Iterable[int],
    factors: tuple[int, ...] | None = None,
) -> LocalRule:
    alph = Alphabet(size, factors)
    return LocalRule(alph, alph, sidedness, lo, hi, tuple(table))


def identity_rule(alphabet: Alphabet | int, sidedness: Sidedness) -> LocalRule:
    alph = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
    return LocalRule(alph, alph, sidedness, 0, 0, tuple(range(alph.size)))


def constant_rule(alphabet: Alphabet | int, sidedness: Sidedness, q: int) -> LocalRule:
    alph = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
    if not 0 <= q < alph.size:
        raise ValueError("constant state out of alphabet")
    return LocalRule(alph, alph, sidedness, 0, 0, (q,) * alph.size)


def shift_rule(size: int, sidedness: Sidedness) -> LocalRule:
    """The shift map presented with neighborhood [0, 1]."""
    table = tuple(b for _ in range(size) for b in range(size))
    return make_rule(size, sidedness, 0, 1, table)


# --------------------------------------------------------------------------
# word enumeration helpers


def all_words(size: int, length: int) -> Iterable[Word]:
    """All words of the given length in lexicographic order."""
    return itertools.product(range(size), repeat=length)


def words_array(size: int, length: int, max_rows: int = DEFAULT_MAX_TABLE) -> np.ndarray:
    """All words of the given length as a ``(size**length, length)`` array."""
    n = size**length
    if n > max_rows:
        raise BudgetError("word enumeration", n, max_rows)
    idx = np.arange(n, dtype=np.int64)
    cols = []
    for j in range(length):
        cols.append((idx // (size ** (length - 1 - j))) % size)
    if length == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.stack(cols, axis=1)


# --------------------------------------------------------------------------
# applying maps


def apply_word(bm: BlockMap, word: Sequence[int]) -> Word:
    """Slide the table over a finite word.

    Output position ``t`` is the table value of ``word[t : t+width]``; the
    output is ``width - 1`` shorter than the input.  In configuration
    coordinates output position ``t`` is the image cell at input position
    ``t - lo``.
    """
    w = bm.width
    if len(word) < w:
        raise ValueError("input too short")
    out = apply_rows(bm, np.asarray(word, dtype=np.int64).reshape(1, -1))
    return tuple(int(v) for v in out[0])


def apply_rows(bm: BlockMap, rows: np.ndarray) -> np.ndarray:
    """Vectorized :func:`apply_word` over a batch of equal-length words."""
    w = bm.width
    n = rows.shape[1]
    if n < w:
        raise ValueError("input too short")
    size = bm.source.size
    idx = np.zeros((rows.shape[0], n - w + 1), dtype=np.int64)
    for j in range(w):
        idx = idx * size + rows[:, j : n - w + 1 + j]
    return bm.table_array[idx]


def apply_cyclic(rule: BlockMap, config: CyclicConfig) -> CyclicConfig:
    """Apply a rule to a spatially periodic configuration.

    The image has the same period and is computed on the cyclically
    extended word, so this commutes with :func:`rotate`.
    """
    p = config.period
    out = []
    for t in range(p):
        window = [config.word[(t + d) % p] for d in range(rule.lo, rule.hi + 1)]
        out.append(rule(window))
    return CyclicConfig(tuple(out))


def rotate(config: CyclicConfig, k: int) -> CyclicConfig:
    p = config.period
    k %= p
    return CyclicConfig(config.word[k:] + config.word[:k])


# --------------------------------------------------------------------------
# the rule algebra


def pad_blockmap(bm: BlockMap, lo: int, hi: int, max_table: int = DEFAULT_MAX_TABLE) -> BlockMap:
    """Re-present a block map on a larger neighborhood; added cells are ignored."""
    if lo > bm.lo or hi < bm.hi:
        raise ValueError("padding must enlarge the neighborhood")
    if bm.sidedness is Sidedness.ONE_SIDED and lo < 0:
        raise ValueError("one-sided maps cannot be padded left of 0")
    width = hi - lo + 1
    size = bm.source.size
    if size**width > max_table:
        raise BudgetError("padded table size", size**width, max_table)
    rows = words_array(size, width, max_table)
    j0 = bm.lo - lo
    sub = rows[:, j0 : j0 + bm.width]
    idx = np.zeros(len(rows), dtype=np.int64)
    for j in range(bm.width):
        idx = idx * size + sub[:, j]
    table = tuple(int(v) for v in bm.table_array[idx])
    if isinstance(bm, LocalRule):
        return LocalRule(bm.source, bm.target, bm.sidedness, lo, hi, table)
    return BlockMap(bm.source, bm.target, bm.sidedness, lo, hi, table)


def compose_blockmaps(outer: BlockMap, inner: BlockMap, max_table: int = DEFAULT_MAX_TABLE) -> BlockMap:
    """The block map ``outer o inner`` (apply ``inner`` first).

    Neighborhoods add: the composite window is ``[lo_o + lo_i, hi_o + hi_i]``
    and on every long-enough word ``apply_word(composite, w)`` equals
    ``apply_word(outer, apply_word(inner, w))``.  Alphabets are compatible
    when their sizes agree; factor annotations play no role.
    """
    if inner.target.size != outer.source.size:
        raise ValueError("alphabet mismatch in composition")
    if inner.sidedness is not outer.sidedness:
        raise ValueError("sidedness mismatch in composition")
    lo = outer.lo + inner.lo
    hi = outer.hi + inner.hi
    width = hi - lo + 1
    size = inner.source.size
    if size**width > max_table:
        raise BudgetError("composite table size", size**width, max_table)
    rows = words_array(size, width, max_table)
    mid = apply_rows(inner, rows)
    out = apply_rows(outer, mid)
    table = tuple(int(v) for v in out[:, 0])
    return BlockMap(inner.source, outer.target, inner.sidedness, lo, hi, table)


def compose(outer: LocalRule, inner: LocalRule, max_table: int = DEFAULT_MAX_TABLE) -> LocalRule:
    """Compose two rules over the same alphabet: ``compose(g, f)`` is ``g o f``."""
    if outer.source.size != inner.source.size:
        raise ValueError("alphabet mismatch in composition")
    bm = compose_blockmaps(outer, inner, max_table)
    return LocalRule(bm.source, bm.source, bm.sidedness, bm.lo, bm.hi, bm.table)


def power(rule: LocalRule, n: int, max_table: int = DEFAULT_MAX_TABLE) -> LocalRule:
    """The n-th iterate of a rule; ``power(rule, 0)`` is the identity.

    The width grows linearly (``n*(width-1) + 1``) but the table grows
    exponentially, so the table size is checked against ``max_table`` up
    front and a :class:`BudgetError` is raised rather than thrash.
    """
    if n < 0:
        raise ValueError("negative power")
    size = rule.source.size
    final_width = n * (rule.width - 1) + 1
    if size**final_width > max_table:
        raise BudgetError("power table size", size**final_width, max_table)
    acc = identity_rule(rule.source, rule.sidedness)
    for _ in range(n):
        acc = compose(rule, acc, max_table)
    return acc


def product_many(rules: Sequence[LocalRule], max_table: int = DEFAULT_MAX_TABLE) -> LocalRule:
    """The direct product of several rules, one track per rule.

    States of the product alphabet pack the track states big-endian (first
    track most significant); the factor rules are padded to a common
    neighborhood and recorded so tracks can be projected out again.
    """
    if not rules:
        raise ValueError("need at least one rule")
    sided = rules[0].sidedness
    if any(r.sidedness is not sided for r in rules):
        raise ValueError("sidedness mismatch in product")
    lo = min(r.lo for r in rules)
    hi = max(r.hi for r in rules)
    padded = [pad_blockmap(r, lo, hi, max_table) for r in rules]
    sizes = tuple(r.source.size for r in rules)
    alph = Alphabet(math.prod(sizes), sizes)
    width = hi - lo + 1
    if alph.size**width > max_table:
        raise BudgetError("product table size", alph.size**width, max_table)

    rows = words_array(alph.size, width, max_table)
    track_rows = []
    rest = rows
    for f in reversed(sizes):
        track_rows.append(rest % f)
        rest = rest // f
    track_rows.reverse()
    outs = [apply_rows(p, tr)[:, 0] for p, tr in zip(padded, track_rows)]
    packed = np.zeros(len(rows), dtype=np.int64)
    for f, o in zip(sizes, outs):
        packed = packed * f + o
    # record the unpadded factors: padding does not change the induced maps
    # and the tight windows keep factor-trace enumeration cheap
    return LocalRule(
        alph, alph, sided, lo, hi, tuple(int(v) for v in packed),
        factor_rules=tuple(rules),
    )


def product(rule_a: LocalRule, rule_b: LocalRule, max_table: int = DEFAULT_MAX_TABLE) -> LocalRule:
    """Two-track direct product: acts as ``rule_a`` on track 0, ``rule_b`` on track 1."""
    return product_many([rule_a, rule_b], max_table)


def project(rule: LocalRule, track: int) -> LocalRule:
    """Recover one factor of a product rule."""
    if rule.factor_rules is None:
        raise ValueError("rule has no recorded product structure")
    return rule.factor_rules[track]


def _split_as(rule: LocalRule, d: int) -> tuple[LocalRule, LocalRule] | None:
    """Split off a leading track of size d (states read as hi*[size/d]+lo),
    when the rule is exactly a direct product along that split."""
    size = rule.source.size
    rest = size // d
    rows = words_array(size, rule.width, len(rule.table))
    hi_rows, lo_rows = rows // rest, rows % rest
    out = rule.table_array
    out_hi, out_lo = out // rest, out % rest
    hi_tab = np.full(d**rule.width, -1, dtype=np.int64)
    lo_tab = np.full(rest**rule.width, -1, dtype=np.int64)
    hi_idx = np.zeros(len(rows), dtype=np.int64)
    lo_idx = np.zeros(len(rows), dtype=np.int64)
    for j in range(rule.width):
        hi_idx = hi_idx * d + hi_rows[:, j]
        lo_idx = lo_idx * rest + lo_rows[:, j]
    hi_tab[hi_idx] = out_hi
    lo_tab[lo_idx] = out_lo
    if np.any(hi_tab[hi_idx] != out_hi) or np.any(lo_tab[lo_idx] != out_lo):
        return None
    mk = lambda n, tab: LocalRule(
        Alphabet(n), Alphabet(n), rule.sidedness, rule.lo, rule.hi,
        tuple(int(v) for v in tab),
    )
    return mk(d, hi_tab), mk(rest, lo_tab)


@lru_cache(maxsize=128)
def detect_tracks(rule: LocalRule) -> tuple[LocalRule, ...] | None:
    """Recover a direct-product decomposition from the table alone.

    Splits off the smallest leading track that factors exactly and recurses;
    returns None when the rule is not a product under the big-endian state
    encoding.  Used so that product structure survives a trip through the
    rule file format, where only the table is stored.
    """
    if rule.factor_rules is not None:
        return rule.factor_rules
    size = rule.source.size
    for d in range(2, size):
        if size % d:
            continue
        split = _split_as(rule, d)
        if split is not None:
            head, tail = split
            rest = detect_tracks(tail)
            return (head,) + (rest if rest is not None else (tail,))
    return None


def projection_map(alphabet: Alphabet, track: int, sidedness: Sidedness) -> BlockMap:
    """The width-1 block map projecting a product alphabet onto one track."""
    if alphabet.factors is None:
        raise ValueError("alphabet has no factor structure")
    table = tuple(alphabet.decode(s)[track] for s in range(alphabet.size))
    return BlockMap(alphabet, Alphabet(alphabet.factors[track]), sidedness, 0, 0, table)


def equal_rules(f: BlockMap, g: BlockMap, max_table: int = DEFAULT_MAX_TABLE) -> bool:
    """Whether two block maps induce the same global map.

    Both are padded to the smallest common neighborhood and the tables are
    compared entry for entry; over full shifts this is exact equality of
    the induced maps, with no sampling involved.
    """
    if f.source.size != g.source.size or f.target.size != g.target.size:
        raise ValueError("alphabet mismatch in rule comparison")
    if f.sidedness is not g.sidedness:
        raise ValueError("sidedness mismatch in rule comparison")
    lo = min(f.lo, g.lo)
    hi = max(f.hi, g.hi)
    pf = pad_blockmap(f, lo, hi, max_table)
    pg = pad_blockmap(g, lo, hi, max_table)
    return pf.table == pg.table


def classify_state(rule: LocalRule, s: int) -> StateClass:
    """Quiescence and spreading of a state.

    ``s`` is quiescent when the all-``s`` window maps to ``s``; it is
    spreading when every window containing ``s`` maps to ``s``.  Spreading
    implies quiescent.
    """
    if not 0 <= s < rule.source.size:
        raise ValueError("state out of alphabet")
    quiescent = rule((s,) * rule.width) == s
    spreading = True
    for word in all_words(rule.source.size, rule.width):
        if s in word and rule(word) != s:
            spreading = False
            break
    return StateClass(quiescent=quiescent, spreading=spreading and quiescent)


# --------------------------------------------------------------------------
# rule text format
#
#   ca v1
#   sides: one|two
#   states: <n>
#   [target-states: <m>]          (block maps between distinct alphabets)
#   neighborhood: <i> <j>
#   table:
#   <word> -> <s>                 (one line per neighborhood word)
#
# Words are digit strings when the source alphabet has at most 10 states and
# dot-separated decimal symbols otherwise.  Lines starting with '#' are
# comments.  Every neighborhood word must appear exactly once.


def _format_word(word: Sequence[int], size: int) -> str:
    if size <= 10:
        return "".join(str(s) for s in word)
    return ".".join(str(s) for s in word)


def _parse_word(text: str, size: int, width: int, line: int) -> Word:
    if "." in text:
        parts = text.split(".")
    else:
        parts = list(text)
    try:
        word = tuple(int(p) for p in parts)
    except ValueError:
        raise RuleFormatError(f"bad neighborhood word {text!r}", line) from None
    if len(word) != width:
        raise RuleFormatError(
            f"word {text!r} has length {len(word)}, expected {width}", line
        )
    if any(not 0 <= s < size for s in word):
        raise RuleFormatError(f"symbol out of range in {text!r}", line)
    return word


def format_rule(bm: BlockMap) -> str:
    """Canonical text form; parse(format(x)) reproduces x byte for byte."""
    lines = ["ca v1", f"sides: {bm.sidedness.value}", f"states: {bm.source.size}"]
    if bm.target != bm.source:
        lines.append(f"target-states: {bm.target.size}")
    lines.append(f"neighborhood: {bm.lo} {bm.hi}")
    lines.append("table:")
    size = bm.source.size
    for i, v in enumerate(bm.table):
        lines.append(f"{_format_word(bm.window_word(i), size)} -> {v}")
    return "\n".join(lines) + "\n"


def parse_rule(text: str) -> BlockMap:
    """Parse the rule text format; errors report line numbers.

    Returns a :class:`LocalRule` when source and target alphabets agree and
    a plain :class:`BlockMap` otherwise.
    """
    header: dict[str, tuple[str, int]] = {}
    entries: dict[int, int] = {}
    state = "magic"
    width = None
    size = None
    tsize = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if state == "magic":
            if stripped != "ca v1":
                raise RuleFormatError(f"expected 'ca v1', got {stripped!r}", ln)
            state = "header"
            continue
        if state == "header":
            if stripped == "table:":
                for key in ("sides", "states", "neighborhood"):
                    if key not in header:
                        raise RuleFormatError(f"missing header field {key!r}", ln)
                state = "table"
                continue
            if ":" not in stripped:
                raise RuleFormatError(f"bad header line {stripped!r}", ln)
            key, _, value = stripped.partition(":")
            header[key.strip()] = (value.strip(), ln)
            continue
        # table lines
        if "->" not in stripped:
            raise RuleFormatError(f"bad table line {stripped!r}", ln)
        left, _, right = stripped.partition("->")
        if size is None:
            sides_text, sides_ln = header["sides"]
            try:
                Sidedness.parse(sides_text)
            except ValueError as e:
                raise RuleFormatError(str(e), sides_ln) from None
            states_text, states_ln = header["states"]
            try:
                size = int(states_text)
            except ValueError:
                raise RuleFormatError(f"bad states count {states_text!r}", states_ln) from None
            if size < 1:
                raise RuleFormatError("states must be >= 1", states_ln)
            tsize = size
            if "target-states" in header:
                ttext, tln = header["target-states"]
                try:
                    tsize = int(ttext)
                except ValueError:
                    raise RuleFormatError(f"bad target-states {ttext!r}", tln) from None
            nb_text, nb_ln = header["neighborhood"]
            parts = nb_text.split()
            if len(parts) != 2:
                raise RuleFormatError("neighborhood needs two integers", nb_ln)
            try:
                lo, hi = int(parts[0]), int(parts[1])
            except ValueError:
                raise RuleFormatError(f"bad neighborhood {nb_text!r}", nb_ln) from None
            if lo > hi:
                raise RuleFormatError("empty neighborhood interval", nb_ln)
            width = hi - lo + 1
        word = _parse_word(left.strip(), size, width, ln)
        try:
            val = int(right.strip())
        except ValueError:
            raise RuleFormatError(f"bad output state {right.strip()!r}", ln) from None
        if not 0 <= val < tsize:
            raise RuleFormatError(f"output state {val} out of range", ln)
        idx = 0
        for s in word:
            idx = idx * size + s
        if idx in entries:
            raise RuleFormatError(
                f"duplicate entry for word {_format_word(word, size)!r}", ln
            )
        entries[idx] = val
    if state != "table":
        raise RuleFormatError("missing table section", 1)
    if size is None:
        raise RuleFormatError("empty table", 1)

    sides = Sidedness.parse(header["sides"][0])
    nb = header["neighborhood"][0].split()
    lo, hi = int(nb[0]), int(nb[1])
    expected = size ** (hi - lo + 1)
    if len(entries) != expected:
        missing = next(i for i in range(expected) if i not in entries)
        word = []
        m = missing
        for _ in range(hi - lo + 1):
            word.append(m % size)
            m //= size
        word.reverse()
        raise RuleFormatError(
            f"table incomplete: no entry for word {_format_word(word, size)!r}", 1
        )
    table = tuple(entries[i] for i in range(expected))
    src = Alphabet(size)
    tgt = Alphabet(tsize)
    try:
        if src == tgt:
            return LocalRule(src, tgt, sides, lo, hi, table)
        return BlockMap(src, tgt, sides, lo, hi, table)
    except ValueError as e:
        raise RuleFormatError(str(e), 1) from None
