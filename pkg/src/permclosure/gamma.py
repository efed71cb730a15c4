"""Indexed grammars for L_tau, sigma(L) and C^k(L) from a context-free grammar.

For a CNF grammar and a tree-shape T, ``gamma_t`` builds an indexed grammar
that first writes a candidate T-skeleton into a flag string, then checks the
productions at the branch points, and finally unpacks the skeleton's edge
sides in the order prescribed by tau.

Generated names::

    _S0                         start
    A@e3                        nonterminal A building edge e3
    A.L A.R A.al A.om a.om #3   flags
    _M _Mbar _Mbar2.1 _M2.1     unpacking
    _X1 _Xbar1 _X1:C _X1:B,C    branch-point checks
    A~                          A waiting for the end of the flag
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    END,
    ContextFreeGrammar,
    Copy,
    GrammarError,
    IndexedGrammar,
    Pop,
    Push,
    cfg_as_indexed,
)
from .normal_form import cfg_to_cnf
from .perm import Permutation, all_permutations, subpatterns
from .shapes import LEFT, RIGHT, TreeShape, branch_points, order_edges, outline, shapes_for


class DegreeMismatch(ValueError):
    pass


class NotCnf(GrammarError):
    pass


class MalformedFlag(ValueError):
    pass


def _edge(a, i):
    return f"{a}@e{i}"


def _L(a):
    return f"{a}.L"


def _R(a):
    return f"{a}.R"


def _al(a):
    return f"{a}.al"


def _om(x):
    return f"{x}.om"


def _hash(i):
    return f"#{i}"


def _tilde(a):
    return f"{a}~"


def min_lengths(g: ContextFreeGrammar) -> dict:
    """Shortest yield of each nonterminal (absent if it derives nothing)."""
    best = {}
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            if all(s in best or s in g.terminals for s in p.rhs):
                v = sum(best[s] if s in best else 1 for s in p.rhs)
                if v < best.get(p.lhs, float("inf")):
                    best[p.lhs] = v
                    changed = True
    return best


class _Builder:
    def __init__(self):
        self.prods = set()
        self.ready = []  # (nonterminal, flags it does not skip)

    def push(self, lhs, rhs, *flags):
        self.prods.add(Push(lhs, rhs, tuple(flags)))

    def pop(self, lhs, flag, *rhs):
        self.prods.add(Pop(lhs, flag, tuple(rhs)))

    def copy(self, lhs, *rhs):
        self.prods.add(Copy(lhs, tuple(rhs)))

    def make_ready(self, a, keep):
        """Mark ``a`` as ready for the flags in ``keep``: it skips every other flag."""
        self.ready.append((a, frozenset(keep)))


def gamma_t(g: ContextFreeGrammar, tau: Permutation, t: TreeShape) -> IndexedGrammar:
    """The grammar for tau-rearranged words whose split points fit the shape ``t``."""
    if not g.cnf:
        raise NotCnf("gamma_t needs a grammar in Chomsky normal form")
    ell = tau.degree
    if ell < 2 or t.ell != ell:
        raise DegreeMismatch(f"a shape with {t.leaves} leaves cannot realize a permutation of degree {ell}")
    o = order_edges(t)
    out_line = outline(t, o)
    bps = branch_points(t, o)
    N, m = o.n, o.m
    nts = sorted(g.nonterminals)
    terms = sorted(g.terminals)
    binary = sorted(p for p in g.productions if len(p.rhs) == 2)
    unary = sorted(p for p in g.productions if len(p.rhs) == 1)
    b = _Builder()

    # (1)-(5): write a candidate skeleton into the flag, one edge at a time
    b.push("_S0", _edge(g.start, 1), _al(g.start))
    for i in range(1, N + 1):
        for p in binary:
            left, right = p.rhs
            b.push(_edge(p.lhs, i), _edge(left, i), _R(right))
            b.push(_edge(p.lhs, i), _edge(right, i), _L(left))
    for i in range(1, m + 1):
        for a in nts:
            for nxt in nts:
                b.push(_edge(a, i), _edge(nxt, i + 1), _al(nxt), _hash(i), _om(a))
    for i in range(m + 1, N):
        for p in unary:
            for nxt in nts:
                b.push(_edge(p.lhs, i), _edge(nxt, i + 1), _al(nxt), _hash(i), _om(p.rhs[0]))
    for p in unary:
        b.push(_edge(p.lhs, N), "_M", _hash(N), _om(p.rhs[0]))

    # (6)-(12): one check symbol per branch point
    b.copy("_M", "_Mbar", *(f"_X{bp.index}" for bp in bps))
    alphas = {_al(a) for a in nts}
    pairs = sorted({p.rhs for p in binary})
    for bp in bps:
        i = bp.index
        hi_is_left = bp.hi == bp.q
        x, xbar = f"_X{i}", f"_Xbar{i}"
        b.make_ready(x, {_hash(bp.hi)})
        b.pop(x, _hash(bp.hi), xbar)
        b.make_ready(xbar, alphas)
        firsts = sorted({pair[0] if hi_is_left else pair[1] for pair in pairs})
        for c in firsts:
            xc, xcbar = f"_X{i}:{c}", f"_Xbar{i}:{c}"
            b.pop(xbar, _al(c), xc)
            b.make_ready(xc, {_hash(bp.lo)})
            b.pop(xc, _hash(bp.lo), xcbar)
            b.make_ready(xcbar, alphas)
        for left, right in pairs:
            first, second = (left, right) if hi_is_left else (right, left)
            xbc, xbcbar = f"_X{i}:{left},{right}", f"_Xbar{i}:{left},{right}"
            b.pop(f"_Xbar{i}:{first}", _al(second), xbc)
            b.make_ready(xbc, {_hash(bp.p)})
            b.pop(xbc, _hash(bp.p), xbcbar)
        for p in binary:
            left, right = p.rhs
            b.pop(f"_Xbar{i}:{left},{right}", _om(p.lhs))

    # (13)-(17): unpack the edge sides in tau order
    parts = []
    for pos in range(1, ell + 1):
        seg = tau(pos)
        parts.extend(f"_Mbar{seg}.{j}" for j in range(1, out_line.k[seg - 1] + 1))
    b.copy("_Mbar", *parts)
    for seg in range(1, ell + 1):
        for j in range(1, out_line.k[seg - 1] + 1):
            e, d = out_line.segments[seg - 1][j - 1]
            mbar, mm = f"_Mbar{seg}.{j}", f"_M{seg}.{j}"
            b.make_ready(mbar, {_hash(e)})
            b.pop(mbar, _hash(e), mm)
            for a in terms:
                if d == RIGHT:
                    b.pop(mm, _om(a), a, mm)
                else:
                    b.pop(mm, _om(a), mm)
            for a in nts:
                b.pop(mm, _om(a), mm)
                b.pop(mm, _al(a))
                if d == LEFT:
                    b.pop(mm, _L(a), mm, _tilde(a))
                    b.pop(mm, _R(a), mm)
                else:
                    b.pop(mm, _R(a), _tilde(a), mm)
                    b.pop(mm, _L(a), mm)
    for a in nts:
        b.make_ready(_tilde(a), {END})
        b.pop(_tilde(a), END, a)

    # (18)-(19): the original productions finish the job
    for p in g.productions:
        b.copy(p.lhs, *p.rhs)

    flags = {END}
    flags |= {_hash(i) for i in range(1, N + 1)}
    for a in nts:
        flags |= {_L(a), _R(a), _al(a), _om(a)}
    flags |= {_om(a) for a in terms}
    for y, keep in b.ready:
        for f in flags - keep:
            b.pop(y, f, y)

    nonterminals = {p.lhs for p in b.prods} | set(g.nonterminals) | {"_S0"}
    for p in b.prods:
        if isinstance(p, Push):
            nonterminals.add(p.rhs)
        else:
            nonterminals |= {s for s in p.rhs if s not in g.terminals}
    clash = (set(g.nonterminals) | set(g.terminals)) & (nonterminals - set(g.nonterminals))
    clash |= set(g.terminals) & flags
    if clash:
        raise GrammarError(f"input symbols clash with generated names: {sorted(clash)}")

    minlen = min_lengths(g)
    weights = {_om(a): 1 for a in terms}
    for a in nts:
        if a in minlen:
            weights[_L(a)] = weights[_R(a)] = minlen[a]
    return IndexedGrammar(
        nonterminals=frozenset(nonterminals),
        terminals=g.terminals,
        flags=frozenset(flags),
        start="_S0",
        productions=frozenset(b.prods),
        flag_weights=weights,
    )


# ----------------------------------------------------------------------------
# reading the skeleton flag back


@dataclass(frozen=True)
class Section:
    index: int
    omega: str
    v: tuple
    alpha: str

    def flags(self) -> tuple:
        return (_hash(self.index), self.omega) + self.v + (self.alpha,)


@dataclass(frozen=True)
class FlagSections:
    sections: tuple  # highest edge index first

    def flag(self) -> tuple:
        return tuple(f for s in self.sections for f in s.flags()) + (END,)


def decode_flag(flag, t: TreeShape, o=None, cnf: ContextFreeGrammar | None = None) -> FlagSections:
    """Split a flag string of the unpacking stage into per-edge sections.

    With ``cnf`` given, omega flags are also checked against the edge kind:
    nonterminal ends on inner edges, terminal ends on leaf edges.
    """
    o = o or order_edges(t)
    flag = tuple(flag)
    if not flag or flag[-1] != END or END in flag[:-1]:
        raise MalformedFlag("flag must end with a single '$'")
    pos = 0
    sections = []
    for i in range(o.n, 0, -1):
        if pos >= len(flag) - 1 or flag[pos] != _hash(i):
            raise MalformedFlag(f"expected #{i} at position {pos}")
        pos += 1
        if pos >= len(flag) - 1 or not flag[pos].endswith(".om"):
            raise MalformedFlag(f"section {i} lacks its omega flag")
        omega = flag[pos]
        if cnf is not None:
            sym = omega[:-3]
            want = cnf.nonterminals if i <= o.m else cnf.terminals
            if sym not in want:
                raise MalformedFlag(f"section {i}: omega {omega} has the wrong kind")
        pos += 1
        start = pos
        while pos < len(flag) - 1 and (flag[pos].endswith(".L") or flag[pos].endswith(".R")):
            pos += 1
        v = flag[start:pos]
        if pos >= len(flag) - 1 or not flag[pos].endswith(".al"):
            raise MalformedFlag(f"section {i} lacks its alpha flag")
        sections.append(Section(i, omega, v, flag[pos]))
        pos += 1
    if pos != len(flag) - 1:
        raise MalformedFlag("trailing flags after section 1")
    return FlagSections(tuple(sections))


# ----------------------------------------------------------------------------
# assemblies


UNION_START = "_U0"


def ig_union(gs, with_epsilon: bool = False) -> IndexedGrammar:
    """Rename the components apart and choose one under a fresh start symbol.

    Terminals and flags are shared.  A flag's weight is the least weight any
    component gives it.
    """
    gs = list(gs)
    if not gs:
        raise ValueError("ig_union needs at least one grammar")
    nonterminals = {UNION_START}
    terminals, flags, prods = set(), set(), set()
    weights = {}
    for i, g in enumerate(gs, start=1):
        def ren(s, g=g, i=i):
            return f"u{i}/{s}" if s in g.nonterminals else s

        nonterminals |= {ren(a) for a in g.nonterminals}
        terminals |= g.terminals
        for f in g.flags:
            w = g.flag_weights.get(f, 0)
            weights[f] = min(weights.get(f, w), w)
        flags |= g.flags
        prods.add(Copy(UNION_START, (ren(g.start),)))
        for p in g.productions:
            if isinstance(p, Push):
                prods.add(Push(ren(p.lhs), ren(p.rhs), p.flags))
            elif isinstance(p, Pop):
                prods.add(Pop(ren(p.lhs), p.flag, tuple(map(ren, p.rhs))))
            else:
                prods.add(Copy(ren(p.lhs), tuple(map(ren, p.rhs))))
    if with_epsilon:
        prods.add(Copy(UNION_START, ()))
    return IndexedGrammar(
        frozenset(nonterminals), frozenset(terminals), frozenset(flags),
        UNION_START, frozenset(prods), weights,
    )


def _as_cnf(g: ContextFreeGrammar) -> tuple:
    return cfg_to_cnf(g)


def l_tau_grammar(g: ContextFreeGrammar, tau: Permutation) -> IndexedGrammar:
    """Indexed grammar for L_tau (first part possibly empty when tau has degree >= 2)."""
    cnf, _ = _as_cnf(g)
    if tau.degree == 1:
        return cfg_as_indexed(cnf)
    return ig_union(gamma_t(cnf, tau, t) for t in shapes_for(tau.degree))


def sigma_grammar(g: ContextFreeGrammar, sigma: Permutation) -> IndexedGrammar:
    cnf, had_eps = _as_cnf(g)
    parts = [l_tau_grammar(cnf, tau) for tau in sorted(subpatterns(sigma))]
    return ig_union(parts, with_epsilon=had_eps)


def ck_grammar(g: ContextFreeGrammar, k: int) -> IndexedGrammar:
    if k < 1:
        raise ValueError("k must be positive")
    cnf, had_eps = _as_cnf(g)
    parts = [l_tau_grammar(cnf, tau) for ell in range(1, k + 1) for tau in all_permutations(ell)]
    return ig_union(parts, with_epsilon=had_eps)
