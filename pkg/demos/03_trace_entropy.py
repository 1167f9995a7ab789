"""Trace subshifts and entropy upper bounds from exact word counts.

Observing the cells [0, k) of every orbit gives the width-k trace
subshift; over a full shift its depth-L words can be enumerated exactly,
and log2(p_L)/L bounds the trace entropy from above at every L.  For a
one-sided rule observed at its radius this also bounds the entropy of the
rule itself.
"""

import cashift as cs

ONE = cs.Sidedness.ONE_SIDED
F = cs.example_021_rule()

# The width-1 trace of the permutation rule is exactly the block shift
# generated by 00 and 12 (equal as word sets at every depth we compute):
for L in (2, 4, 8):
    trace = set(cs.trace_words(F, 1, L).words)
    blocks = cs.block_shift_words({(0, 0), (1, 2)}, L)
    print(f"depth {L}: {len(trace)} trace words, equals block shift: {trace == blocks}")

# Entropy table: counts are exact integers, ratios upper-bound the
# entropy, which for this rule is exactly 1/2 (the rows approach it from
# above: one symbol of the underlying 2-shift stretches over two cells).
print("\nL\tp_L\tlog2(p_L)/L")
print(cs.entropy_upper(F, 1, 12).to_tsv())

# Products add entropies; the two-track power doubles every count.
F2 = cs.product(F, F)
print("product counts are squares:",
      [cs.subword_complexity(F2, 1, L) for L in (1, 2, 3)],
      "vs",
      [cs.subword_complexity(F, 1, L) ** 2 for L in (1, 2, 3)])

# Baselines: the identity has entropy 0, the shift entropy 1.
print("\nidentity rows:", [r for (_, _, r) in cs.entropy_upper(cs.identity_rule(3, ONE), 1, 6).rows])
print("shift rows:   ", [r for (_, _, r) in cs.entropy_upper(cs.shift_rule(2, ONE), 1, 6).rows])
