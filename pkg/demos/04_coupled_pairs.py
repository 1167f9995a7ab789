"""Coupled-track pairs: verified conjugacy or an entropy gap.

build_instance couples a driver rule to a high-entropy reversible carrier:
the switched rule advances the carrier exactly where the driver output is
not q, the passive rule never touches the carrier, and both treat the
driver track identically.  Whether the two are strongly conjugate hinges
on the long-run behavior of the driver alone:

* a driver that dies out uniformly makes the switched rule passive after
  finitely many steps, and an explicit sliding-block conjugacy exists;
* a driver that keeps cells alive forever lets the carrier run, and the
  trace counts of the two rules separate exponentially.
"""

import warnings

import cashift as cs

ONE = cs.Sidedness.ONE_SIDED

warnings.filterwarnings("ignore", message="k=1")

# --- a dying driver: certified conjugacy -----------------------------------
chain = cs.make_rule(3, ONE, 0, 1, tuple((0, 0, 1)[w0] for w0 in range(3) for _ in range(3)))
inst = cs.build_instance(chain, q=0, k=1)
n = cs.nilpotency_within(inst.driver, 0, 9)
print(f"chain driver dies out at iterate {n}")

phi = cs.build_phi(inst, n)
cert = cs.verify_certificate(phi, inst.switched, inst.passive)
print(f"conjugacy code of width {phi.width}:",
      f"intertwines={cert.homomorphism} injective={cert.injective}",
      f"surjective={cert.surjective} -> VALID={cert.valid}")

counts = [cs.instance_trace_complexity(inst, L)[0] for L in range(1, 9)]
print("switched-rule trace counts stay bounded:", counts)

# --- a spreading driver that does not die: entropy gap ----------------------
and_rule = cs.make_rule(2, ONE, 0, 1, (0, 0, 0, 1))
inst2 = cs.build_instance(and_rule, q=0, k=1)
print("\nAND driver: q spreading:", inst2.q_spreading,
      "| no die-out within 16 steps:", cs.nilpotency_within(inst2.driver, 0, 16) is None)

for L in (2, 4, 6, 8):
    p_switched, p_passive = cs.instance_trace_complexity(inst2, L)
    print(f"depth {L}: switched {p_switched:>5}  passive {p_passive:>3}")
print("the passive side grows linearly (9*(L+1)); the switched side")
print("carries the full product-rule trace on the all-ones driver region")

# and accordingly no narrow conjugacy code exists between them
print("\nsearch for a width-1 code:",
      cs.search_strong_conjugacy(inst2.switched, inst2.passive, 1))
