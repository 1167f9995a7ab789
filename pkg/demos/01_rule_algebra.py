"""Rule algebra on a reversible three-state automaton.

The running example throughout the library: a one-sided radius-1 rule on
{0,1,2} where each cell is permuted by a permutation chosen by its right
neighbor.  It is reversible, and its inverse is again radius 1.
"""

import cashift as cs

F = cs.example_021_rule()
print("the rule, in its canonical text form:\n")
print(cs.format_rule(F))

# A quick orbit: apply the rule to a finite word.  Each application
# consumes one cell on the right (the window needs the right neighbor).
word = (0, 1, 2, 2, 0, 1, 0, 0, 1, 2)
print("orbit of", "".join(map(str, word)))
print(cs.render_text(F, word, steps=4))

# The inverse rule undoes it exactly: composing in either order gives the
# identity, checked as exact table equality after neighborhood padding.
Finv = cs.example_021_inverse()
ident = cs.identity_rule(3, cs.Sidedness.ONE_SIDED)
print("F_inv o F == id:", cs.equal_rules(cs.compose(Finv, F), ident))
print("F o F_inv == id:", cs.equal_rules(cs.compose(F, Finv), ident))

# Powers widen linearly; the fourth iterate reads five cells.
F4 = cs.power(F, 4)
print("width of F^4:", F4.width)

# Direct products act trackwise and remember their factors.
F2 = cs.product(F, F)
print("product alphabet:", F2.source.size, "factors:", F2.source.factors)
print("projection recovers the factor:", cs.equal_rules(cs.project(F2, 0), F))
