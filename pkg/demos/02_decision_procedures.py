"""Injectivity and surjectivity decisions with verified witnesses.

Every negative verdict comes with a finite refutation that has been
re-simulated before being reported: a pair of configurations with equal
images, or an orphan word with no preimage.
"""

import cashift as cs

ONE, TWO = cs.Sidedness.ONE_SIDED, cs.Sidedness.TWO_SIDED

gallery = {
    "three-state permutation rule": cs.example_021_rule(),
    "xor (two-sided)": cs.make_rule(2, TWO, 0, 1, (0, 1, 1, 0)),
    "and": cs.make_rule(2, ONE, 0, 1, (0, 0, 0, 1)),
    "shift (one-sided)": cs.make_rule(2, ONE, 1, 1, (0, 1)),
    "shift (two-sided)": cs.make_rule(2, TWO, 1, 1, (0, 1)),
    "constant 0": cs.constant_rule(2, ONE, 0),
}

for name, rule in gallery.items():
    inj = cs.is_injective(rule)
    surj = cs.is_surjective(rule)
    print(f"{name}:")
    print(f"  injective:  {inj.verdict}")
    for line in inj.describe():
        print("   ", line)
    print(f"  surjective: {surj.verdict}")
    for line in surj.describe():
        print("   ", line)

# Note the sidedness split for the shift: deleting the first cell is lossy
# on right-infinite configurations but invertible on bi-infinite ones.

# Inverse recovery by constraint propagation over windows:
F = cs.example_021_rule()
inv = cs.inverse_rule(F, max_width=2)
print("\nrecovered inverse of the permutation rule:\n")
print(cs.format_rule(inv))

# Bounded nilpotency: a three-state driver where 1 dies immediately and 2
# decays through 1 reaches the constant-0 rule at the second iterate.
chain = cs.make_rule(3, ONE, 0, 1, tuple((0, 0, 1)[w0] for w0 in range(3) for _ in range(3)))
print("die-out index of the chain driver:", cs.nilpotency_within(chain, 0, 8))

# A spreading state does not force die-out: the AND rule keeps all-ones
# alive, exhibited by a periodic configuration that avoids 0 forever.
and_rule = gallery["and"]
cfg = cs.avoiding_configuration(and_rule, 0, 3)
print("AND avoids its spreading state on the cycle:", cfg.word)
