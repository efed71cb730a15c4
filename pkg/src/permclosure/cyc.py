"""An indexed grammar for the cyclic closure of a normal-form indexed language.

A rotation w2 w1 of a word w1 w2 is derived by guessing the flag of the
nonterminal that produced the first letter of w2, and then walking the
original derivation backwards from that leaf: each hatted nonterminal stands
for "the rest of the tree around this node", with every push undone by a pop
and vice versa.  Only the root's hat can be dropped, and only on an empty
flag.
"""

from __future__ import annotations

from .core import END, Copy, GrammarError, IndexedGrammar, Pop, Push
from .normal_form import is_ig_normal_form

HAT = "_h_"
CYC_START = "_cyc_S0"
CYC_GUESS = "_cyc_St"


class NotNormalForm(GrammarError):
    """cyc_grammar needs a normal-form grammar; run normalize first."""


def hat(a: str) -> str:
    return HAT + a


def cyc_grammar(g: IndexedGrammar) -> IndexedGrammar:
    if not is_ig_normal_form(g):
        raise NotNormalForm("input is not in normal form (use 'normalize' first)")
    hats = {a: hat(a) for a in g.nonterminals}
    new = set(hats.values()) | {CYC_START, CYC_GUESS}
    clash = new & (g.nonterminals | g.terminals | g.flags)
    if clash or len(new) != len(hats) + 2:
        raise GrammarError(f"generated names collide with the input: {sorted(clash)}")

    prods = set(g.productions)
    prods.add(Copy(CYC_START, (g.start,)))
    prods.add(Copy(CYC_START, (CYC_GUESS,)))
    prods.add(Pop(hats[g.start], END, ()))
    for f in g.flags - {END}:
        prods.add(Push(CYC_GUESS, CYC_GUESS, (f,)))
    for p in g.productions:
        if isinstance(p, Push):
            prods.add(Pop(hats[p.rhs], p.flags[0], (hats[p.lhs],)))
        elif isinstance(p, Pop):
            prods.add(Push(hats[p.rhs[0]], hats[p.lhs], (p.flag,)))
        elif len(p.rhs) == 1:
            prods.add(Copy(CYC_GUESS, (p.rhs[0], hats[p.lhs])))
        else:
            b, c = p.rhs
            prods.add(Copy(hats[b], (c, hats[p.lhs])))
            prods.add(Copy(hats[c], (hats[p.lhs], b)))
    return IndexedGrammar(
        nonterminals=frozenset(g.nonterminals | new),
        terminals=g.terminals,
        flags=g.flags,
        start=CYC_START,
        productions=frozenset(prods),
    )
