"""End-to-end command-line tour, run as subprocesses in a scratch directory.

Exit codes: 0 affirmative, 2 refuted (witness printed), 3 budget exceeded,
1 usage or parse error.
"""

import subprocess
import sys
import tempfile
from pathlib import Path

import cashift as cs


def sh(*args, expect=0):
    cmd = [sys.executable, "-m", "cashift.cli", *args]
    print("$ cashift " + " ".join(args))
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.stdout:
        print(proc.stdout, end="")
    if proc.stderr:
        print(proc.stderr, end="")
    print(f"(exit {proc.returncode})\n")
    assert proc.returncode == expect, (proc.returncode, expect)
    return proc


work = Path(tempfile.mkdtemp(prefix="cashift-demo-"))
f = work / "f.ca"
and_file = work / "and.ca"
and_file.write_text(cs.format_rule(cs.make_rule(2, cs.Sidedness.ONE_SIDED, 0, 1, (0, 0, 0, 1))))

sh("rule", "gen-example021", "-o", str(f))
sh("rule", "check", str(f))
sh("decide", "inj", "--rule", str(f))
sh("decide", "inverse", "--rule", str(f), "--max-width", "2")
sh("decide", "surj", "--rule", str(and_file), expect=2)
sh("sim", "--rule", str(and_file), "--steps", "3", "--init", "111101")
sh("trace", "complexity", "--rule", str(f), "-k", "1", "-L", "2")
sh("trace", "entropy", "--rule", str(f), "-k", "1", "-L", "6")

# the coupled pair: build both rules, certify the conjugacy when the
# driver dies out, and observe the count gap when it does not
chain = work / "chain.ca"
chain.write_text(
    cs.format_rule(
        cs.make_rule(3, cs.Sidedness.ONE_SIDED, 0, 1, tuple((0, 0, 1)[w] for w in range(3) for _ in range(3)))
    )
)
F_out, G_out, phi_out = work / "F.ca", work / "G.ca", work / "phi.ca"
sh("reduce", "build", "--H", str(chain), "--q", "0", "--k", "1",
   "--out-F", str(F_out), "--out-G", str(G_out))
sh("reduce", "phi", "--H", str(chain), "--q", "0", "--k", "1", "-o", str(phi_out))
sh("verify", "conj", "--phi", str(phi_out), "--F", str(F_out), "--G", str(G_out))

sh("reduce", "build", "--H", str(and_file), "--q", "0", "--k", "1",
   "--out-F", str(work / "Fa.ca"), "--out-G", str(work / "Ga.ca"))
sh("trace", "complexity", "--rule", str(work / "Ga.ca"), "-k", "1", "-L", "8")

# conjugacy search: found for a relabeling, refuted against the identity
g = work / "g.ca"
swap = (0, 2, 1)
Ft = cs.example_021_rule()
g.write_text(cs.format_rule(cs.make_rule(3, cs.Sidedness.ONE_SIDED, 0, 1,
             tuple(swap[Ft((swap[a], swap[b]))] for a in range(3) for b in range(3)))))
ident = work / "id.ca"
ident.write_text(cs.format_rule(cs.identity_rule(3, cs.Sidedness.ONE_SIDED)))
sh("search", "conj", "--F", str(f), "--G", str(g), "--max-width", "1")
sh("search", "conj", "--F", str(f), "--G", str(ident), "--max-width", "2", expect=2)

# SFT commands
m = work / "m.mat"
m.write_text("2\n1 1\n1 1\n")
loop = work / "loop.mat"
loop.write_text("1\n2\n")
sh("sft", "amalgamate", "--matrix", str(m))
sh("sft", "conjugate", "--x", str(m), "--y", str(loop))
sh("sft", "graph", "--rule", str(f))
sh("sft", "trace-approx", "--rule", str(f), "-k", "1", "-L", "2")

# a space-time diagram as a PGM image
pgm = work / "orbit.pgm"
sh("sim", "--rule", str(f), "--steps", "40", "--init", "random:7", "--width", "120",
   "--render", "pgm", "-o", str(pgm))
print("wrote", pgm, f"({pgm.stat().st_size} bytes)")
print("\nall commands behaved; scratch dir:", work)
