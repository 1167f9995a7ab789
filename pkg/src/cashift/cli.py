"""Command-line surface.

Exit codes: 0 success or affirmative verdict, 2 refuted / negative verdict
(with the witness printed), 3 resource budget exceeded (the message names
the budget), 1 usage or parse error.

All randomness is seed-controlled (``--init random:SEED``); nothing reads
the clock or OS entropy, so every invocation is reproducible.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import core, debruijn, reduction, render, sft, trace
from .core import BlockMap, BudgetError, LocalRule, RuleFormatError, Word

__all__ = ["main", "run"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); the contract wants 1
        raise UsageError(message)


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_map(path: str) -> BlockMap:
    return core.parse_rule(_read(path))


def _load_rule(path: str) -> LocalRule:
    bm = _load_map(path)
    if not isinstance(bm, LocalRule):
        raise UsageError(f"{path}: expected a rule (equal source and target alphabets)")
    return bm


def _parse_word(text: str, size: int) -> Word:
    parts = text.split(".") if "." in text else list(text)
    try:
        word = tuple(int(p) for p in parts)
    except ValueError:
        raise UsageError(f"bad word {text!r}") from None
    if any(not 0 <= s < size for s in word):
        raise UsageError(f"word {text!r} has symbols outside the alphabet")
    if not word:
        raise UsageError("empty word")
    return word


def _word_text(word) -> str:
    if all(s < 10 for s in word):
        return "".join(str(s) for s in word)
    return ".".join(str(s) for s in word)


# --------------------------------------------------------------------------
# handlers


def _cmd_rule(args) -> int:
    if args.action == "check":
        bm = _load_map(args.file)
        kind = "rule" if isinstance(bm, LocalRule) else "block map"
        print(
            f"ok: {args.file}: {bm.sidedness.value}-sided {kind}, "
            f"{bm.source.size} states, neighborhood [{bm.lo}, {bm.hi}]"
        )
        return 0
    if args.action == "show":
        _emit(core.format_rule(_load_map(args.file)), args.out)
        return 0
    if args.action == "gen-example021":
        _emit(core.format_rule(reduction.example_021_rule()), args.out)
        return 0
    _emit(core.format_rule(reduction.product_power(args.k, args.max_table)), args.out)
    return 0


def _cmd_sim(args) -> int:
    rule = _load_rule(args.rule)
    if args.init.startswith("random:"):
        if args.width is None:
            raise UsageError("--width is required with --init random:SEED")
        try:
            seed = int(args.init.split(":", 1)[1])
        except ValueError:
            raise UsageError("bad seed in --init random:SEED") from None
        rng = np.random.default_rng(seed)
        word = tuple(int(x) for x in rng.integers(0, rule.source.size, size=args.width))
    else:
        word = _parse_word(args.init, rule.source.size)
    if args.render == "text":
        _emit(render.render_text(rule, word, args.steps), args.out)
    else:
        data = render.render_pgm(rule, word, args.steps)
        if args.out is None:
            sys.stdout.buffer.write(data)
        else:
            with open(args.out, "wb") as fh:
                fh.write(data)
    return 0


def _cmd_decide(args) -> int:
    rule = _load_rule(args.rule)
    if args.question == "inj":
        res = debruijn.is_injective(rule)
        if res.verdict:
            print("injective")
            return 0
        print("not injective")
        for line in res.describe():
            print(line)
        return 2
    if args.question == "surj":
        res = debruijn.is_surjective(rule)
        if res.verdict:
            print("surjective")
            return 0
        print("not surjective")
        for line in res.describe():
            print(line)
        return 2
    if args.question == "inverse":
        inv = debruijn.inverse_rule(rule, args.max_width, args.max_table)
        if inv is None:
            print(f"none within width {args.max_width}")
            return 2
        _emit(core.format_rule(inv), args.out)
        return 0
    if args.question == "nilpotent":
        n_max = args.nmax if args.nmax is not None else rule.source.size**rule.width
        n = debruijn.nilpotency_within(rule, args.q, n_max, args.max_table)
        if n is None:
            print(f"no constant-{args.q} iterate within budget n_max={n_max}")
            return 2
        print(f"nilpotent: iterate {n} is constant {args.q}")
        return 0
    n_max = args.nmax if args.nmax is not None else rule.source.size**rule.width
    res = debruijn.periodicity_within(rule, n_max, args.max_table)
    if res is None:
        print(f"not eventually periodic within budget n_max={n_max}")
        return 2
    print(f"preperiod {res[0]} period {res[1]}")
    return 0


def _cmd_trace(args) -> int:
    rule = _load_rule(args.rule)
    if args.what == "words":
        tt = trace.trace_words(rule, args.k, args.L, args.max_window)
        for col in sorted(tt.words):
            print("|".join(_word_text(row) for row in tt.unpack(col)))
        return 0
    if args.what == "complexity":
        print(trace.subword_complexity(rule, args.k, args.L, args.max_window))
        return 0
    report = trace.entropy_upper(rule, args.k, args.L, args.max_window)
    sys.stdout.write(report.to_tsv())
    return 0


def _build_instance_reporting(H, q, k, max_table):
    import warnings

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        inst = reduction.build_instance(H, q, k, max_table)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return inst


def _cmd_reduce(args) -> int:
    if args.step == "build":
        H = _load_rule(args.H)
        inst = _build_instance_reporting(H, args.q, args.k, args.max_table)
        _emit(core.format_rule(inst.switched), args.out_F)
        _emit(core.format_rule(inst.passive), args.out_G)
        spread = "spreading" if inst.q_spreading else "quiescent, not spreading"
        print(
            f"built coupled pair over {inst.alphabet.size} states "
            f"(carrier 3^{2 * args.k} x driver {H.source.size}); q={args.q} is {spread}"
        )
        return 0
    if args.step == "phi":
        H = _load_rule(args.H)
        inst = _build_instance_reporting(H, args.q, args.k, args.max_table)
        if args.n == "auto":
            n_max = args.nmax if args.nmax is not None else H.source.size**H.width
            n = debruijn.nilpotency_within(inst.driver, args.q, n_max, args.max_table)
            if n is None:
                raise BudgetError("die-out certification", n_max + 1, n_max)
        else:
            try:
                n = int(args.n)
            except ValueError:
                raise UsageError("--n must be an integer or 'auto'") from None
        phi = reduction.build_phi(inst, n, args.max_table)
        _emit(core.format_rule(phi), args.out)
        print(f"phi built from certified die-out index {n} (width {phi.width})")
        return 0
    return _verify_conj(args)


def _verify_conj(args) -> int:
    phi = _load_map(args.phi)
    F = _load_rule(args.F)
    G = _load_rule(args.G)
    cert = reduction.verify_certificate(phi, F, G, args.max_table)
    if cert.valid:
        print("VALID: strong conjugacy verified")
        return 0
    print("REFUTED:")
    if not cert.homomorphism:
        w, lv, rv = cert.mismatch
        print(
            f"  intertwining fails on window {_word_text(w)}: "
            f"phi(F(.)) = {lv} but G(phi(.)) = {rv}"
        )
    if not cert.injective:
        print("  phi is not injective")
        for line in cert.injectivity_witness.describe():
            print("  " + line)
    if not cert.surjective:
        print("  phi is not surjective")
        for line in cert.surjectivity_witness.describe():
            print("  " + line)
    return 2


def _cmd_search(args) -> int:
    F = _load_rule(args.F)
    G = _load_rule(args.G)
    cert = reduction.search_strong_conjugacy(F, G, args.max_width, max_table=args.max_table)
    if cert is not None:
        print(f"found strong conjugacy of width {cert.phi.width}")
        sys.stdout.write(core.format_rule(cert.phi))
        return 0
    print(f"none within width budget {args.max_width}")
    if F.source.size != G.source.size:
        print(f"note: alphabet sizes differ ({F.source.size} vs {G.source.size})")
    for L in (1, 2, 3):
        try:
            pf = trace.subword_complexity(F, 1, L)
            pg = trace.subword_complexity(G, 1, L)
        except BudgetError:
            break
        if pf != pg:
            print(
                f"note: width-1 trace counts differ at depth {L}: "
                f"{pf} vs {pg} (suggestive obstruction, not a proof)"
            )
            break
    return 2


def _cmd_sft(args) -> int:
    if args.op == "amalgamate":
        pres = sft.parse_matrix(_read(args.matrix))
        out, tr = sft.total_amalgamation(pres, args.convention)
        sys.stdout.write(sft.format_matrix(out))
        print(f"# merges: {len(tr.steps)}", file=sys.stderr)
        return 0
    if args.op == "conjugate":
        x = sft.parse_matrix(_read(args.x))
        y = sft.parse_matrix(_read(args.y))
        if sft.one_sided_conjugate(x, y, args.convention):
            print("conjugate")
            return 0
        print("not conjugate")
        return 2
    if args.op == "graph":
        rule = _load_rule(args.rule)
        sys.stdout.write(sft.format_matrix(sft.graph_subshift(rule)))
        return 0
    rule = _load_rule(args.rule)
    pres, exact = sft.trace_sft_approx(rule, args.k, args.L, args.max_window)
    sys.stdout.write(sft.format_matrix(pres))
    print(f"exact: {'true' if exact else 'false'}")
    return 0


# --------------------------------------------------------------------------
# parser


def _add_budgets(p, table=True, window=False):
    if table:
        p.add_argument("--max-table", type=int, default=core.DEFAULT_MAX_TABLE)
    if window:
        p.add_argument("--max-window", type=int, default=trace.DEFAULT_MAX_WINDOWS)


def build_parser() -> _Parser:
    top = _Parser(prog="cashift", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rule", help="inspect and generate rule files")
    ps = p.add_subparsers(dest="action", required=True)
    q = ps.add_parser("check")
    q.add_argument("file")
    q = ps.add_parser("show")
    q.add_argument("file")
    q.add_argument("-o", "--out")
    q = ps.add_parser("gen-example021")
    q.add_argument("-o", "--out")
    q = ps.add_parser("gen-product")
    q.add_argument("-k", type=int, required=True)
    q.add_argument("-o", "--out")
    _add_budgets(q)
    p.set_defaults(func=_cmd_rule)

    p = sub.add_parser("sim", help="render a space-time diagram")
    p.add_argument("--rule", required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--init", required=True, help="word or random:SEED")
    p.add_argument("--width", type=int, help="length of the random initial word")
    p.add_argument("--render", choices=("text", "pgm"), default="text")
    p.add_argument("-o", "--out")
    p.set_defaults(func=_cmd_sim)

    p = sub.add_parser("decide", help="decision procedures")
    ps = p.add_subparsers(dest="question", required=True)
    for name in ("inj", "surj"):
        q = ps.add_parser(name)
        q.add_argument("--rule", required=True)
        _add_budgets(q)
    q = ps.add_parser("inverse")
    q.add_argument("--rule", required=True)
    q.add_argument("--max-width", type=int, required=True)
    q.add_argument("-o", "--out")
    _add_budgets(q)
    q = ps.add_parser("nilpotent")
    q.add_argument("--rule", required=True)
    q.add_argument("--q", type=int, required=True)
    q.add_argument("--nmax", type=int)
    _add_budgets(q)
    q = ps.add_parser("periodic")
    q.add_argument("--rule", required=True)
    q.add_argument("--nmax", type=int)
    _add_budgets(q)
    p.set_defaults(func=_cmd_decide)

    p = sub.add_parser("trace", help="trace words, complexity, entropy bounds")
    ps = p.add_subparsers(dest="what", required=True)
    for name in ("words", "complexity", "entropy"):
        q = ps.add_parser(name)
        q.add_argument("--rule", required=True)
        q.add_argument("-k", type=int, required=True)
        q.add_argument("-L", type=int, required=True)
        _add_budgets(q, table=False, window=True)
    p.set_defaults(func=_cmd_trace)

    p = sub.add_parser("reduce", help="coupled-pair constructions")
    ps = p.add_subparsers(dest="step", required=True)
    q = ps.add_parser("build")
    q.add_argument("--H", required=True)
    q.add_argument("--q", type=int, required=True)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--out-F", required=True)
    q.add_argument("--out-G", required=True)
    _add_budgets(q)
    q = ps.add_parser("phi")
    q.add_argument("--H", required=True)
    q.add_argument("--q", type=int, required=True)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--n", default="auto")
    q.add_argument("--nmax", type=int)
    q.add_argument("-o", "--out")
    _add_budgets(q)
    q = ps.add_parser("verify")
    q.add_argument("--phi", required=True)
    q.add_argument("--F", required=True)
    q.add_argument("--G", required=True)
    _add_budgets(q)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("verify", help="verify a conjugacy certificate")
    ps = p.add_subparsers(dest="what", required=True)
    q = ps.add_parser("conj")
    q.add_argument("--phi", required=True)
    q.add_argument("--F", required=True)
    q.add_argument("--G", required=True)
    _add_budgets(q)
    p.set_defaults(func=_verify_conj)

    p = sub.add_parser("search", help="bounded conjugacy search")
    ps = p.add_subparsers(dest="what", required=True)
    q = ps.add_parser("conj")
    q.add_argument("--F", required=True)
    q.add_argument("--G", required=True)
    q.add_argument("--max-width", type=int, required=True)
    _add_budgets(q)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("sft", help="subshift-of-finite-type operations")
    ps = p.add_subparsers(dest="op", required=True)
    q = ps.add_parser("amalgamate")
    q.add_argument("--matrix", required=True)
    q.add_argument("--convention", choices=("columns", "rows"), default="columns")
    q = ps.add_parser("conjugate")
    q.add_argument("--x", required=True)
    q.add_argument("--y", required=True)
    q.add_argument("--convention", choices=("columns", "rows"), default="columns")
    q = ps.add_parser("graph")
    q.add_argument("--rule", required=True)
    q = ps.add_parser("trace-approx")
    q.add_argument("--rule", required=True)
    q.add_argument("-k", type=int, required=True)
    q.add_argument("-L", type=int, required=True)
    _add_budgets(q, table=False, window=True)
    p.set_defaults(func=_cmd_sft)

    return top


def run(argv) -> int:
    """Parse and execute one command; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except RuleFormatError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 1
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except BudgetError as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return 3
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
