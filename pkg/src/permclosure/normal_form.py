"""Chomsky normal form for context-free grammars, normal form for indexed grammars."""

from __future__ import annotations

from itertools import count, product

from .core import (
    END,
    CfgProduction,
    ContextFreeGrammar,
    Copy,
    GrammarError,
    IndexedGrammar,
    Pop,
    Push,
)

NF_PREFIX = "_nf"
CNF_PREFIX = "_cnf"


class EpsilonProduction(GrammarError):
    """An empty right-hand side somewhere other than an unused start symbol."""


class _Fresh:
    def __init__(self, prefix: str, taken):
        self.prefix = prefix
        self.taken = set(taken)
        self.counter = count(1)

    def __call__(self, hint: str = "") -> str:
        while True:
            name = f"{self.prefix}{next(self.counter)}{hint}"
            if name not in self.taken:
                self.taken.add(name)
                return name


def nullable_cfg(g: ContextFreeGrammar) -> set:
    nullable = set()
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            if p.lhs not in nullable and all(s in nullable for s in p.rhs):
                nullable.add(p.lhs)
                changed = True
    return nullable


def _unit_closure(pairs, nodes) -> dict:
    """reach[A] = all B with A =>* B through unit steps (A included)."""
    succ = {n: set() for n in nodes}
    for a, b in pairs:
        succ[a].add(b)
    reach = {}
    for a in nodes:
        seen = {a}
        stack = [a]
        while stack:
            x = stack.pop()
            for y in succ.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        reach[a] = seen
    return reach


def _binarize(lhs, rhs, terminals, fresh, term_cache):
    """Terminal-separate and binarize one flagless right-hand side (length >= 2)."""
    out = []
    syms = []
    for s in rhs:
        if s in terminals:
            if s not in term_cache:
                term_cache[s] = fresh()
                out.append((term_cache[s], (s,)))
            syms.append(term_cache[s])
        else:
            syms.append(s)
    cur = lhs
    while len(syms) > 2:
        nxt = fresh()
        out.append((cur, (syms[0], nxt)))
        cur = nxt
        syms = syms[1:]
    out.append((cur, tuple(syms)))
    return out


def cfg_to_cnf(g: ContextFreeGrammar) -> tuple:
    """Return (cnf grammar for L(g) minus eps, whether eps was in L(g))."""
    had_epsilon = g.start in nullable_cfg(g)
    if g.cnf:
        return g, had_epsilon
    fresh = _Fresh(CNF_PREFIX, g.nonterminals | g.terminals)
    term_cache = {}
    rules = set()
    for p in g.productions:
        if len(p.rhs) >= 2:
            rules.update(_binarize(p.lhs, p.rhs, g.terminals, fresh, term_cache))
        else:
            rules.add((p.lhs, p.rhs))
    nonterminals = set(g.nonterminals) | set(fresh.taken - g.nonterminals - g.terminals)

    # drop eps-productions
    nullable = set()
    changed = True
    while changed:
        changed = False
        for lhs, rhs in rules:
            if lhs not in nullable and all(s in nullable for s in rhs):
                nullable.add(lhs)
                changed = True
    no_eps = set()
    for lhs, rhs in rules:
        options = [((s,), ()) if s in nullable else ((s,),) for s in rhs]
        for choice in product(*options):
            new = tuple(x for part in choice for x in part)
            if new:
                no_eps.add((lhs, new))

    # drop unit productions
    units = {(l, r[0]) for l, r in no_eps if len(r) == 1 and r[0] in nonterminals}
    reach = _unit_closure(units, nonterminals)
    final = set()
    for a in nonterminals:
        for lhs, rhs in no_eps:
            if lhs in reach[a] and not (len(rhs) == 1 and rhs[0] in nonterminals):
                final.add((a, rhs))

    # trim to generating and reachable nonterminals
    generating = set()
    changed = True
    while changed:
        changed = False
        for lhs, rhs in final:
            if lhs not in generating and all(s in generating or s in g.terminals for s in rhs):
                generating.add(lhs)
                changed = True
    final = {(l, r) for l, r in final if l in generating and all(s in generating or s in g.terminals for s in r)}
    reachable = {g.start}
    stack = [g.start]
    while stack:
        x = stack.pop()
        for lhs, rhs in final:
            if lhs == x:
                for s in rhs:
                    if s in nonterminals and s not in reachable:
                        reachable.add(s)
                        stack.append(s)
    final = {(l, r) for l, r in final if l in reachable}
    used_terminals = {s for _, r in final for s in r if s in g.terminals}
    cnf = ContextFreeGrammar(
        nonterminals=frozenset(reachable),
        terminals=frozenset(g.terminals if not final else used_terminals | set(g.terminals)),
        start=g.start,
        productions=frozenset(CfgProduction(l, r) for l, r in final),
        cnf=True,
    )
    return cnf, had_epsilon


def is_ig_normal_form(g: IndexedGrammar) -> bool:
    for p in g.productions:
        if isinstance(p, Push):
            if p.rhs == g.start or len(p.flags) != 1 or p.flags[0] == END:
                return False
        elif isinstance(p, Pop):
            if len(p.rhs) != 1 or p.rhs[0] not in g.nonterminals or p.rhs[0] == g.start:
                return False
        else:
            if g.start in p.rhs:
                return False
            if len(p.rhs) == 1 and p.rhs[0] in g.terminals:
                continue
            if len(p.rhs) == 2 and all(s in g.nonterminals for s in p.rhs):
                continue
            return False
    return True


def normalize_indexed(g: IndexedGrammar) -> tuple:
    """Return (normal-form grammar, whether the dropped start -> eps was present)."""
    for s in g.nonterminals | g.terminals | g.flags:
        if s.startswith(NF_PREFIX):
            raise GrammarError(f"symbol {s!r} uses the reserved prefix {NF_PREFIX!r}")
    on_rhs = set()
    for p in g.productions:
        on_rhs |= {p.rhs} if isinstance(p, Push) else set(p.rhs)
    had_epsilon = False
    for p in g.productions:
        if isinstance(p, Push) and END in p.flags:
            raise GrammarError(f"{p}: pushes the end-of-flag symbol")
        if not isinstance(p, Push) and not p.rhs:
            if isinstance(p, Copy) and p.lhs == g.start and g.start not in on_rhs:
                had_epsilon = True
            else:
                raise EpsilonProduction(f"{p}: empty right-hand side")

    fresh = _Fresh(NF_PREFIX, g.nonterminals | g.terminals | g.flags)
    start = fresh()
    prods = set()
    copies = [(start, (g.start,))]
    for p in g.productions:
        if isinstance(p, Push):
            cur = p.lhs
            for f in reversed(p.flags[1:]):
                nxt = fresh()
                prods.add(Push(cur, nxt, (f,)))
                cur = nxt
            prods.add(Push(cur, p.rhs, (p.flags[0],)))
        elif isinstance(p, Pop):
            if len(p.rhs) == 1 and p.rhs[0] in g.nonterminals:
                prods.add(p)
            else:
                b = fresh()
                prods.add(Pop(p.lhs, p.flag, (b,)))
                copies.append((b, p.rhs))
        elif p.rhs:
            copies.append((p.lhs, p.rhs))

    term_cache = {}
    for lhs, rhs in copies:
        if len(rhs) >= 2:
            for l, r in _binarize(lhs, rhs, g.terminals, fresh, term_cache):
                prods.add(Copy(l, r))
        else:
            prods.add(Copy(lhs, rhs))
    nonterminals = set(g.nonterminals) | (fresh.taken - g.nonterminals - g.terminals - g.flags)

    units = {(p.lhs, p.rhs[0]) for p in prods
             if isinstance(p, Copy) and len(p.rhs) == 1 and p.rhs[0] in nonterminals}
    reach = _unit_closure(units, nonterminals)
    kept = {p for p in prods if not (isinstance(p, Copy) and len(p.rhs) == 1 and p.rhs[0] in nonterminals)}
    by_lhs = {}
    for p in kept:
        by_lhs.setdefault(p.lhs, []).append(p)
    final = set()
    for a in nonterminals:
        for b in reach[a]:
            for p in by_lhs.get(b, ()):
                if isinstance(p, Push):
                    final.add(Push(a, p.rhs, p.flags))
                elif isinstance(p, Pop):
                    final.add(Pop(a, p.flag, p.rhs))
                else:
                    final.add(Copy(a, p.rhs))
    out = IndexedGrammar(
        nonterminals=frozenset(nonterminals),
        terminals=g.terminals,
        flags=g.flags,
        start=start,
        productions=frozenset(final),
    )
    assert is_ig_normal_form(out), "normalization produced a non-normal-form grammar"
    return out, had_epsilon


def ig_to_normal_form(g: IndexedGrammar) -> IndexedGrammar:
    return normalize_indexed(g)[0]
