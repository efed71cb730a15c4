"""Symbolic types: words, context-free grammars, indexed grammars, automata."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Union

END = "$"
EPS = "eps"
RESERVED = frozenset({"->", "|", "^", "$", "eps", "#"})
# characters that would break the line-oriented text format
_FORBIDDEN_CHARS = frozenset("^|")

Word = tuple  # tuple[str, ...] of terminal names


class GrammarError(ValueError):
    """Base class for malformed grammars and automata."""


class UndeclaredSymbol(GrammarError):
    pass


class DuplicateDeclaration(GrammarError):
    pass


def check_name(name: str, what: str = "symbol") -> None:
    if not isinstance(name, str) or not name:
        raise GrammarError(f"empty {what} name")
    if name in RESERVED:
        raise GrammarError(f"{what} name {name!r} is a reserved token")
    if any(c.isspace() or c in _FORBIDDEN_CHARS for c in name):
        raise GrammarError(f"{what} name {name!r} contains a forbidden character")


def _check_disjoint(**sets: Iterable[str]) -> None:
    items = list(sets.items())
    for i, (a, sa) in enumerate(items):
        for b, sb in items[i + 1:]:
            common = set(sa) & set(sb)
            if common:
                raise GrammarError(f"{a} and {b} overlap: {sorted(common)}")


def word_str(w: Word) -> str:
    """Render a word; single-character alphabets are written without spaces."""
    if not w:
        return "eps"
    if all(len(s) == 1 for s in w):
        return "".join(w)
    return " ".join(w)


def shortlex(words: Iterable[Word]) -> list:
    return sorted(words, key=lambda w: (len(w), w))


# ----------------------------------------------------------------------------
# context-free grammars


@dataclass(frozen=True, order=True)
class CfgProduction:
    lhs: str
    rhs: tuple

    def __str__(self):
        return f"{self.lhs} -> {' '.join(self.rhs) if self.rhs else EPS}"


@dataclass(frozen=True)
class ContextFreeGrammar:
    nonterminals: frozenset
    terminals: frozenset
    start: str
    productions: frozenset
    cnf: bool = False

    def __post_init__(self):
        object.__setattr__(self, "nonterminals", frozenset(self.nonterminals))
        object.__setattr__(self, "terminals", frozenset(self.terminals))
        object.__setattr__(self, "productions", frozenset(self.productions))
        for n in self.nonterminals | self.terminals:
            check_name(n)
        _check_disjoint(nonterminals=self.nonterminals, terminals=self.terminals)
        if self.start not in self.nonterminals:
            raise UndeclaredSymbol(f"start symbol {self.start!r} is not a nonterminal")
        symbols = self.nonterminals | self.terminals
        for p in self.productions:
            if p.lhs not in self.nonterminals:
                raise UndeclaredSymbol(f"{p}: lhs is not a nonterminal")
            for s in p.rhs:
                if s not in symbols:
                    raise UndeclaredSymbol(f"{p}: undeclared symbol {s!r}")
        if self.cnf and not self.is_cnf():
            raise GrammarError("grammar is marked CNF but has non-CNF productions")

    def is_cnf(self) -> bool:
        for p in self.productions:
            if len(p.rhs) == 1 and p.rhs[0] in self.terminals:
                continue
            if len(p.rhs) == 2 and all(s in self.nonterminals for s in p.rhs):
                continue
            return False
        return True

    @cached_property
    def by_lhs(self) -> dict:
        table = {n: [] for n in self.nonterminals}
        for p in sorted(self.productions):
            table[p.lhs].append(p.rhs)
        return table


# ----------------------------------------------------------------------------
# indexed grammars


@dataclass(frozen=True, order=True)
class Push:
    """``lhs -> rhs^flags``; the leftmost flag ends up on top of the stack."""

    lhs: str
    rhs: str
    flags: tuple

    def __str__(self):
        return f"{self.lhs} -> {self.rhs}^{' '.join(self.flags)}"


@dataclass(frozen=True, order=True)
class Pop:
    """``lhs^flag -> rhs``; the remaining stack is copied to every nonterminal of rhs."""

    lhs: str
    flag: str
    rhs: tuple

    def __str__(self):
        return f"{self.lhs}^{self.flag} -> {' '.join(self.rhs) if self.rhs else EPS}"


@dataclass(frozen=True, order=True)
class Copy:
    """``lhs -> rhs``; the whole stack is copied to every nonterminal of rhs."""

    lhs: str
    rhs: tuple

    def __str__(self):
        return f"{self.lhs} -> {' '.join(self.rhs) if self.rhs else EPS}"


IndexedProduction = Union[Push, Pop, Copy]


@dataclass(frozen=True)
class IndexedGrammar:
    """An indexed grammar. ``$`` is always a member of ``flags``.

    ``flag_weights`` is an optional yield certificate: a weight ``w`` for flag
    ``f`` asserts that in every complete derivation, each distinct occurrence
    of ``f`` ever pushed accounts for at least ``w`` terminals of the derived
    word, disjoint from those of other occurrences.  The enumerator uses it to
    prune; flags without an entry have weight 0.
    """

    nonterminals: frozenset
    terminals: frozenset
    flags: frozenset
    start: str
    productions: frozenset
    flag_weights: Mapping = field(default_factory=dict, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "nonterminals", frozenset(self.nonterminals))
        object.__setattr__(self, "terminals", frozenset(self.terminals))
        object.__setattr__(self, "flags", frozenset(self.flags) | {END})
        object.__setattr__(self, "productions", frozenset(self.productions))
        object.__setattr__(
            self, "flag_weights", {f: w for f, w in dict(self.flag_weights).items() if w}
        )
        for n in self.nonterminals | self.terminals:
            check_name(n)
        for f in self.flags - {END}:
            check_name(f, "flag")
        _check_disjoint(
            nonterminals=self.nonterminals, terminals=self.terminals, flags=self.flags
        )
        if self.start not in self.nonterminals:
            raise UndeclaredSymbol(f"start symbol {self.start!r} is not a nonterminal")
        symbols = self.nonterminals | self.terminals
        for p in self.productions:
            if p.lhs not in self.nonterminals:
                raise UndeclaredSymbol(f"{p}: lhs is not a nonterminal")
            if isinstance(p, Push):
                if p.rhs not in self.nonterminals:
                    raise UndeclaredSymbol(f"{p}: push target is not a nonterminal")
                if not p.flags:
                    raise GrammarError(f"{p}: empty push")
                flags = p.flags
            elif isinstance(p, Pop):
                flags = (p.flag,)
            elif isinstance(p, Copy):
                flags = ()
            else:
                raise GrammarError(f"not an indexed production: {p!r}")
            for f in flags:
                if f not in self.flags:
                    raise UndeclaredSymbol(f"{p}: undeclared flag {f!r}")
            for s in getattr(p, "rhs", ()) if not isinstance(p, Push) else ():
                if s not in symbols:
                    raise UndeclaredSymbol(f"{p}: undeclared symbol {s!r}")
        for f, w in self.flag_weights.items():
            if f not in self.flags:
                raise UndeclaredSymbol(f"weight given for undeclared flag {f!r}")
            if not isinstance(w, int) or w < 0:
                raise GrammarError(f"flag weight for {f!r} must be a non-negative int")

    def __eq__(self, other):
        if not isinstance(other, IndexedGrammar):
            return NotImplemented
        return (
            self.nonterminals == other.nonterminals
            and self.terminals == other.terminals
            and self.flags == other.flags
            and self.start == other.start
            and self.productions == other.productions
            and self.flag_weights == other.flag_weights
        )

    def __hash__(self):
        return hash((self.nonterminals, self.terminals, self.flags, self.start, self.productions))

    @property
    def symbols(self) -> frozenset:
        return self.nonterminals | self.terminals

    def sorted_productions(self) -> list:
        return sorted(self.productions, key=str)


def cfg_as_indexed(g: ContextFreeGrammar) -> IndexedGrammar:
    """Embed a context-free grammar as an indexed grammar with copy-productions only."""
    return IndexedGrammar(
        nonterminals=g.nonterminals,
        terminals=g.terminals,
        flags=frozenset({END}),
        start=g.start,
        productions=frozenset(Copy(p.lhs, p.rhs) for p in g.productions),
    )


# ----------------------------------------------------------------------------
# automata


@dataclass(frozen=True)
class Nfa:
    """Finite automaton; a transition label of ``None`` is an epsilon-move."""

    states: frozenset
    alphabet: frozenset
    transitions: frozenset
    start: str
    accepts: frozenset

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        object.__setattr__(self, "accepts", frozenset(self.accepts))
        for s in self.states:
            check_name(str(s), "state")
        for a in self.alphabet:
            check_name(a, "terminal")
        if self.start not in self.states:
            raise UndeclaredSymbol(f"start state {self.start!r} is not declared")
        if not self.accepts <= self.states:
            raise UndeclaredSymbol(f"undeclared accept states {sorted(self.accepts - self.states)}")
        for src, a, dst in self.transitions:
            if src not in self.states or dst not in self.states:
                raise UndeclaredSymbol(f"transition {src} {a} -> {dst} uses an undeclared state")
            if a is not None and a not in self.alphabet:
                raise UndeclaredSymbol(f"transition {src} {a} -> {dst} uses an undeclared terminal")

    @cached_property
    def delta(self) -> dict:
        table = {}
        for src, a, dst in self.transitions:
            table.setdefault((src, a), set()).add(dst)
        return table

    def eps_closure(self, states) -> frozenset:
        seen = set(states)
        stack = list(seen)
        while stack:
            q = stack.pop()
            for r in self.delta.get((q, None), ()):
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return frozenset(seen)

    def step(self, states, a) -> frozenset:
        out = set()
        for q in states:
            out |= self.delta.get((q, a), set())
        return self.eps_closure(out)

    def accepts_word(self, word) -> bool:
        current = self.eps_closure({self.start})
        for a in word:
            current = self.step(current, a)
            if not current:
                return False
        return bool(current & self.accepts)


# ----------------------------------------------------------------------------
# language samples


@dataclass(frozen=True)
class LanguageSample:
    """All words of a language up to length ``bound`` (exactly so when ``exhaustive``)."""

    words: frozenset
    bound: int
    exhaustive: bool = True

    def __post_init__(self):
        words = frozenset(tuple(w) for w in self.words)
        object.__setattr__(self, "words", words)
        for w in words:
            if len(w) > self.bound:
                raise ValueError(f"word {word_str(w)!r} is longer than the bound {self.bound}")

    def __contains__(self, w):
        return tuple(w) in self.words

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(shortlex(self.words))

    def restrict(self, bound: int) -> "LanguageSample":
        if bound > self.bound:
            raise ValueError("cannot extend a sample beyond its bound")
        return LanguageSample(frozenset(w for w in self.words if len(w) <= bound), bound, self.exhaustive)

    def lines(self) -> list:
        return [word_str(w) for w in self]


def sample(words: Iterable, bound: int, exhaustive: bool = True) -> LanguageSample:
    """Build a sample from strings (one character per terminal) or tuples."""
    return LanguageSample(frozenset(tuple(w) for w in words), bound, exhaustive)
