"""Shared rule builders and brute-force oracles for the test suite.

Oracles here recompute expected values by direct enumeration or direct
simulation, independently of the decision procedures and the vectorized
enumeration paths they check.
"""

from __future__ import annotations

import itertools
import math

import cashift as cs
from cashift import CyclicConfig, EvPeriodicConfig, Sidedness

ONE = Sidedness.ONE_SIDED
TWO = Sidedness.TWO_SIDED


def and_rule(sidedness=ONE):
    return cs.make_rule(2, sidedness, 0, 1, (0, 0, 0, 1))


def xor_rule(sidedness=ONE):
    return cs.make_rule(2, sidedness, 0, 1, (0, 1, 1, 0))


def chain_rule():
    """Three-state driver dying out in two steps: 0 fixed, 1 -> 0, 2 -> 1,
    all independent of the right neighbor."""
    g = (0, 0, 1)
    return cs.make_rule(3, ONE, 0, 1, tuple(g[w0] for w0 in range(3) for _ in range(3)))


def swap12_relabel(rule):
    """The rule conjugated by the symbol swap 1 <-> 2 (three states)."""
    s = (0, 2, 1)
    table = tuple(
        s[rule((s[a], s[b]))] for a in range(3) for b in range(3)
    )
    return cs.make_rule(3, rule.sidedness, rule.lo, rule.hi, table)


def random_rule(rng, size, sidedness, lo, hi):
    width = hi - lo + 1
    table = tuple(int(x) for x in rng.integers(0, size, size=size**width))
    return cs.make_rule(size, sidedness, lo, hi, table)


# --------------------------------------------------------------------------
# brute-force oracles


def min_period_word(word):
    p = len(word)
    for d in range(1, p + 1):
        if p % d == 0 and word == word[:d] * (p // d):
            return word[:d]
    return word


def oracle_cyclic_injective(rule, max_period):
    """Injectivity restricted to spatially periodic points of small period."""
    images = {}
    for p in range(1, max_period + 1):
        for w in itertools.product(range(rule.source.size), repeat=p):
            key = min_period_word(w)
            if key in images:
                continue
            img = min_period_word(cs.apply_cyclic(rule, CyclicConfig(key)).word)
            images[key] = img
    by_img = {}
    for k, v in images.items():
        by_img.setdefault(v, []).append(k)
    return all(len(v) == 1 for v in by_img.values())


def oracle_words_surjective(rule, max_len):
    """Every word up to max_len has a preimage word (exhaustive)."""
    A = rule.source.size
    w = rule.width
    for n in range(1, max_len + 1):
        images = {cs.apply_word(rule, z) for z in itertools.product(range(A), repeat=n + w - 1)}
        if len(images) < A**n:
            return False
    return True


def brute_trace_columns(rule, k, L):
    """Depth-L trace words by direct per-window simulation (no numpy)."""
    A = rule.source.size
    left = (L - 1) * min(rule.lo, 0)
    right = (k - 1) + (L - 1) * max(rule.hi, 0)
    W = right - left + 1
    cols = set()
    for window in itertools.product(range(A), repeat=W):
        row = list(window)
        start = left
        col = []
        for t in range(L):
            block = 0
            for x in range(k):
                block = block * A + row[x - start]
            col.append(block)
            if t < L - 1:
                row = [
                    rule(tuple(row[p : p + rule.width]))
                    for p in range(len(row) - rule.width + 1)
                ]
                start -= rule.lo
        cols.add(tuple(col))
    return cols


def ev_images_equal(rule, c0: EvPeriodicConfig, c1: EvPeriodicConfig) -> bool:
    """Independent check that two eventually periodic one-sided points have
    equal images: compare cell by cell out to a certain horizon."""

    def image_value(cfg, t):
        return rule(tuple(cfg.value(t + d) for d in range(rule.lo, rule.hi + 1)))

    pre = max(len(c0.prefix), len(c1.prefix)) + rule.hi
    horizon = pre + math.lcm(len(c0.cycle), len(c1.cycle)) + rule.width
    return all(image_value(c0, t) == image_value(c1, t) for t in range(horizon))


def cyclic_images_equal(rule, c0: CyclicConfig, c1: CyclicConfig) -> bool:
    """Independent check on spatially periodic points, comparing the images
    as configurations over a common period."""
    n = math.lcm(c0.period, c1.period)
    i0 = cs.apply_cyclic(rule, c0)
    i1 = cs.apply_cyclic(rule, c1)
    return i0.expand(n) == i1.expand(n)


def configs_distinct(c0, c1) -> bool:
    if isinstance(c0, CyclicConfig):
        n = math.lcm(c0.period, c1.period)
        return c0.expand(n) != c1.expand(n)
    horizon = max(len(c0.prefix), len(c1.prefix)) + math.lcm(
        len(c0.cycle), len(c1.cycle)
    )
    return c0.values(horizon) != c1.values(horizon)


def check_collision_witness(rule, witness) -> bool:
    """A refutation pair must be two distinct points with equal images."""
    c0, c1 = witness.collision
    if not configs_distinct(c0, c1):
        return False
    if isinstance(c0, CyclicConfig):
        return cyclic_images_equal(rule, c0, c1)
    return ev_images_equal(rule, c0, c1)


def check_orphan_witness(rule, witness) -> bool:
    """An orphan must have no preimage word; exhaustive at test scale."""
    word = witness.orphan
    A = rule.source.size
    n = len(word) + rule.width - 1
    return all(
        cs.apply_word(rule, z) != word
        for z in itertools.product(range(A), repeat=n)
    )
