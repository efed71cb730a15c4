"""Permuting the parts of words of a regular language, on NFAs."""

from __future__ import annotations

import random
from itertools import product

from .core import Nfa
from .perm import Permutation

ACCEPT = "_acc"
START = "_start"


def _fresh(taken, base: str) -> str:
    name = base
    i = 1
    while name in taken:
        name = f"{base}{i}"
        i += 1
    return name


def nfa_single_accept(m: Nfa) -> Nfa:
    """Same language, one accept state: a fresh one reached by eps-moves."""
    acc = _fresh(m.states, ACCEPT)
    trans = set(m.transitions) | {(q, None, acc) for q in m.accepts}
    return Nfa(m.states | {acc}, m.alphabet, frozenset(trans), m.start, frozenset({acc}))


def sigma_nfa(m: Nfa, sigma: Permutation) -> Nfa:
    """An NFA for sigma(L(m)).

    For each tuple q of k-1 intermediate states there is one branch made of k
    copies of m: copy s runs from q[s-2] (or the start) to q[s-1] (or the
    accept state) and so reads the s-th part of a word.  The copies of a
    branch are chained in the order sigma(1), ..., sigma(k).  A fresh start
    state leads into every branch.
    """
    if len(m.accepts) != 1:
        m = nfa_single_accept(m)
    (accept,) = m.accepts
    k = sigma.degree
    states = sorted(m.states)
    start = _fresh(set(states), START)
    new_states = {start}
    trans = set()
    accepts = set()
    for idx, q in enumerate(product(states, repeat=k - 1)):
        bounds = (m.start,) + q + (accept,)

        def name(s, state, idx=idx):
            return f"b{idx}.{s}.{state}"

        for s in range(1, k + 1):
            new_states.update(name(s, x) for x in states)
            trans.update((name(s, src), a, name(s, dst)) for src, a, dst in m.transitions)
        trans.add((start, None, name(sigma(1), bounds[sigma(1) - 1])))
        for i in range(1, k):
            s, t = sigma(i), sigma(i + 1)
            trans.add((name(s, bounds[s]), None, name(t, bounds[t - 1])))
        last = sigma(k)
        accepts.add(name(last, bounds[last]))
    return Nfa(frozenset(new_states), m.alphabet, frozenset(trans), start, frozenset(accepts))


def random_nfa(seed: int, max_states: int = 4, alphabet=("a", "b"),
               density: float = 0.3, eps_density: float = 0.1) -> Nfa:
    """A small pseudo-random NFA; the same seed always gives the same automaton."""
    rng = random.Random(seed)
    n = rng.randint(1, max_states)
    states = [f"q{i}" for i in range(n)]
    trans = set()
    for src in states:
        for dst in states:
            for a in alphabet:
                if rng.random() < density:
                    trans.add((src, a, dst))
            if src != dst and rng.random() < eps_density:
                trans.add((src, None, dst))
    accepts = {q for q in states if rng.random() < 0.4}
    return Nfa(frozenset(states), frozenset(alphabet), frozenset(trans), states[0], frozenset(accepts))
