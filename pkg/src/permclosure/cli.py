"""Command-line front end: ``permclosure <subcommand> ...``.

Exit status is 0 on success, 1 when a verification finds a difference and 2
for bad input (unreadable or malformed files, bad arguments).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field

from .core import ContextFreeGrammar, GrammarError, IndexedGrammar, Nfa, shortlex, word_str
from .cyc import cyc_grammar
from .enumeration import Budget, enumerate_cfg, enumerate_ig, enumerate_nfa
from .gamma import DegreeMismatch, ck_grammar, l_tau_grammar, sigma_grammar
from .normal_form import cfg_to_cnf, is_ig_normal_form, normalize_indexed
from .perm import (
    Permutation,
    all_permutations,
    oracle_ck,
    oracle_cyc,
    oracle_ltau,
    oracle_sigma,
)
from .regular import random_nfa, sigma_nfa
from .shapes import branch_points, enumerate_shapes, order_edges, outline, to_dot
from .textio import parse_grammar, serialize_grammar


class InputError(Exception):
    """Reported on stderr with exit status 2."""


@dataclass
class VerifyReport:
    construction: str
    bound: int
    constructed: int
    expected: int
    missing: list = field(default_factory=list)
    extra: list = field(default_factory=list)
    constructed_exhaustive: bool = True
    expected_exhaustive: bool = True
    seconds: float = 0.0
    label: str = ""

    @property
    def equal(self) -> bool:
        return (not self.missing and not self.extra
                and self.constructed_exhaustive and self.expected_exhaustive)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["equal"] = self.equal
        d["seconds"] = round(self.seconds, 3)
        return d


# ----------------------------------------------------------------------------
# helpers


def _read(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    return parse_grammar(text)


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _budget(args) -> Budget:
    return Budget(args.flag_depth, args.form_len, args.states)


def _perm(text: str) -> Permutation:
    try:
        return Permutation.parse(text)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _need_cfg(g, what: str) -> ContextFreeGrammar:
    if not isinstance(g, ContextFreeGrammar):
        raise InputError(f"{what} needs a context-free grammar")
    return g


def _enumerate(g, n: int, budget: Budget):
    if isinstance(g, ContextFreeGrammar):
        return enumerate_cfg(g, n)
    if isinstance(g, Nfa):
        return enumerate_nfa(g, n)
    return enumerate_ig(g, n, budget)[0]


def _kind(g) -> str:
    if isinstance(g, ContextFreeGrammar):
        return "cfg"
    if isinstance(g, Nfa):
        return "nfa"
    return "indexed"


# ----------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    g = _read(args.input)
    info = {"kind": _kind(g)}
    if isinstance(g, ContextFreeGrammar):
        info.update(nonterminals=len(g.nonterminals), productions=len(g.productions), cnf=g.is_cnf())
    elif isinstance(g, IndexedGrammar):
        info.update(nonterminals=len(g.nonterminals), productions=len(g.productions),
                    flags=len(g.flags), normal_form=is_ig_normal_form(g))
    else:
        info.update(states=len(g.states), transitions=len(g.transitions))
    if args.json:
        _emit(args, _dump(info))
    else:
        _emit(args, "ok: " + " ".join(f"{k}={str(v).lower()}" for k, v in info.items()) + "\n")
    return 0


def cmd_normalize(args) -> int:
    g = _read(args.input)
    if isinstance(g, ContextFreeGrammar):
        out, had_eps = cfg_to_cnf(g)
    elif isinstance(g, IndexedGrammar):
        out, had_eps = normalize_indexed(g)
    else:
        raise InputError("automata have no normal form here")
    if had_eps:
        print("note: the empty word was dropped from the language", file=sys.stderr)
    _emit(args, serialize_grammar(out))
    return 0


def cmd_enum(args) -> int:
    g = _read(args.input)
    s = _enumerate(g, args.max_len, _budget(args))
    words = [word_str(w) for w in shortlex(s.words)]
    if args.json:
        _emit(args, _dump({"words": words, "bound": s.bound, "exhaustive": s.exhaustive}))
    else:
        _emit(args, "".join(w + "\n" for w in words))
        if not s.exhaustive:
            print("warning: search budget hit, list may be incomplete", file=sys.stderr)
    return 0


def cmd_cyc(args) -> int:
    g = _read(args.input)
    if not isinstance(g, IndexedGrammar):
        raise InputError("cyc needs an indexed grammar")
    _emit(args, serialize_grammar(cyc_grammar(g)))
    return 0


def cmd_ltau(args) -> int:
    g = _need_cfg(_read(args.input), "ltau")
    _emit(args, serialize_grammar(l_tau_grammar(g, _perm(args.perm))))
    return 0


def cmd_sigma(args) -> int:
    g = _need_cfg(_read(args.input), "sigma")
    _emit(args, serialize_grammar(sigma_grammar(g, _perm(args.perm))))
    return 0


def cmd_ck(args) -> int:
    g = _need_cfg(_read(args.input), "ck")
    _emit(args, serialize_grammar(ck_grammar(g, args.k)))
    return 0


def cmd_regperm(args) -> int:
    m = _read(args.input)
    if not isinstance(m, Nfa):
        raise InputError("regperm needs an automaton")
    _emit(args, serialize_grammar(sigma_nfa(m, _perm(args.perm))))
    return 0


def shape_table(t) -> dict:
    o = order_edges(t)
    return {
        "shape": str(t),
        "edges": ["".join(map(str, e)) or "root" for e in o.edges],
        "m": o.m,
        "branch_points": [[b.p, b.q, b.r] for b in branch_points(t, o)],
        "outline": [[f"e{e}{side}" for e, side in seg] for seg in outline(t, o).segments],
    }


def cmd_shapes(args) -> int:
    if args.leaves < 2:
        raise InputError("--leaves must be at least 2")
    shapes = enumerate_shapes(args.leaves)
    if args.json:
        _emit(args, _dump({"leaves": args.leaves, "count": len(shapes),
                           "shapes": [shape_table(t) for t in shapes]}))
        return 0
    out = []
    for i, t in enumerate(shapes, start=1):
        if args.dot:
            out.append(to_dot(t, f"shape{i}"))
            continue
        tab = shape_table(t)
        out.append(f"shape {i}: {tab['shape']}")
        out.append("  edges: " + " ".join(f"e{j}={e}" for j, e in enumerate(tab["edges"], start=1))
                   + f"  (m={tab['m']})")
        for j, (p, q, r) in enumerate(tab["branch_points"], start=1):
            out.append(f"  branch {j}: e{p} -> e{q} e{r}")
        out.append("  outline: " + " | ".join(" ".join(seg) for seg in tab["outline"]))
    _emit(args, "\n".join(out) + "\n")
    return 0


def _compare(name, label, build, expected, n, budget) -> VerifyReport:
    t0 = time.perf_counter()
    actual = _enumerate(build(), n, budget)
    rep = VerifyReport(
        construction=name,
        bound=n,
        constructed=len(actual),
        expected=len(expected),
        missing=[word_str(w) for w in shortlex(expected.words - actual.words)],
        extra=[word_str(w) for w in shortlex(actual.words - expected.words)],
        constructed_exhaustive=actual.exhaustive,
        expected_exhaustive=expected.exhaustive,
        label=label,
    )
    rep.seconds = time.perf_counter() - t0
    return rep


def _verify_jobs(args, g, budget):
    n = args.max_len
    if args.fuzz_nfa:
        perms = _perm_list(args) or [p for k in (1, 2, 3) for p in all_permutations(k)]
        for i in range(args.fuzz_nfa):
            m = random_nfa(args.seed + i)
            base = enumerate_nfa(m, n)
            for p in perms:
                yield ("regperm", f"seed={args.seed + i} perm={p}",
                       lambda m=m, p=p: sigma_nfa(m, p), oracle_sigma(base, p))
        return
    if g is None:
        raise InputError("verify needs an input file or --fuzz-nfa")
    base = _enumerate(g, n, budget)
    if isinstance(g, IndexedGrammar):
        if args.perm or args.k:
            raise InputError("indexed input is verified against cyclic closure only")
        nf = g if is_ig_normal_form(g) else normalize_indexed(g)[0]
        yield "cyc", "", (lambda: cyc_grammar(nf)), oracle_cyc(base)
        return
    if isinstance(g, Nfa):
        for p in _perm_list(args):
            yield "regperm", f"perm={p}", (lambda p=p: sigma_nfa(g, p)), oracle_sigma(base, p)
        return
    construction = args.construction or ("ck" if args.k and not args.perm and not args.all_perms else "sigma")
    if construction == "ck":
        if not args.k:
            raise InputError("ck verification needs --k")
        yield "ck", f"k={args.k}", (lambda: ck_grammar(g, args.k)), oracle_ck(base, args.k)
        return
    for p in _perm_list(args):
        if construction == "ltau":
            yield ("ltau", f"perm={p}", (lambda p=p: l_tau_grammar(g, p)),
                   oracle_ltau(base, p, relaxed=args.relaxed))
        else:
            yield "sigma", f"perm={p}", (lambda p=p: sigma_grammar(g, p)), oracle_sigma(base, p)


def _perm_list(args) -> list:
    if args.all_perms:
        return all_permutations(args.k or 3)
    if args.perm:
        return [_perm(args.perm)]
    if args.fuzz_nfa:
        return []
    raise InputError("give --perm, --k or --all-perms")


def cmd_verify(args) -> int:
    budget = _budget(args)
    g = _read(args.input) if args.input else None
    reports = [_compare(name, label, build, expected, args.max_len, budget)
               for name, label, build, expected in _verify_jobs(args, g, budget)]
    ok = all(r.equal for r in reports)
    if args.json or not ok:
        payload = [r.as_dict() for r in reports]
        _emit(args, _dump(payload[0] if len(payload) == 1 else payload))
    else:
        lines = [f"ok {r.construction} {r.label} bound={r.bound} words={r.constructed} "
                 f"({r.seconds:.2f}s)".replace("  ", " ") for r in reports]
        _emit(args, "\n".join(lines) + "\n")
    return 0 if ok else 1


# ----------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write the result to this file")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--max-len", type=int, default=8, help="length bound for enumeration")
    common.add_argument("--seed", type=int, default=0, help="seed for any randomness")
    common.add_argument("--flag-depth", type=int, default=Budget.max_flag_depth)
    common.add_argument("--form-len", type=int, default=Budget.max_form_len)
    common.add_argument("--states", type=int, default=Budget.max_states)

    parser = argparse.ArgumentParser(prog="permclosure", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, func, help_text, *, infile=True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if infile:
            p.add_argument("input")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "parse a file and report what it is")
    add("normalize", cmd_normalize, "CNF for a CFG, normal form for an indexed grammar")
    add("enum", cmd_enum, "list words up to --max-len")
    add("cyc", cmd_cyc, "cyclic closure of a normal-form indexed grammar")
    add("ltau", cmd_ltau, "indexed grammar for L_tau of a CFG").add_argument("--perm", required=True)
    add("sigma", cmd_sigma, "indexed grammar for sigma(L) of a CFG").add_argument("--perm", required=True)
    add("ck", cmd_ck, "indexed grammar for C^k(L) of a CFG").add_argument("--k", type=int, required=True)
    add("regperm", cmd_regperm, "NFA for sigma(L) of an NFA").add_argument("--perm", required=True)
    p = add("shapes", cmd_shapes, "list tree-shapes with their tables", infile=False)
    p.add_argument("--leaves", type=int, required=True)
    p.add_argument("--dot", action="store_true", help="print graphviz descriptions")
    p = sub.add_parser("verify", parents=[common], help="construction vs brute-force oracle")
    p.add_argument("input", nargs="?")
    p.add_argument("--perm")
    p.add_argument("--k", type=int)
    p.add_argument("--all-perms", action="store_true", help="every permutation of degree --k (default 3)")
    p.add_argument("--construction", choices=["sigma", "ltau", "ck"])
    p.add_argument("--relaxed", action="store_true", help="ltau oracle with a possibly empty first part")
    p.add_argument("--fuzz-nfa", type=int, default=0, metavar="COUNT", help="check COUNT random NFAs")
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InputError, GrammarError, DegreeMismatch, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
