"""Permutations, subpatterns and brute-force word-set oracles.

The oracles work on finite, exhaustive samples: permuting the parts of a
word preserves its length, so the output is exhaustive at the input bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

from .core import LanguageSample


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection on {1..k} in one-line notation (images[i-1] = sigma(i))."""

    images: tuple

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        object.__setattr__(self, "images", images)
        if not images or sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation in one-line notation: {images}")

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __str__(self):
        return ",".join(map(str, self.images))

    def __repr__(self):
        return f"Permutation({self})"

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.degree + 1))

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        try:
            return cls(tuple(int(x) for x in text.replace(" ", "").split(",")))
        except ValueError as exc:
            raise ValueError(f"bad permutation {text!r}: {exc}") from None

    @classmethod
    def identity(cls, k: int) -> "Permutation":
        return cls(tuple(range(1, k + 1)))


def all_permutations(k: int) -> list:
    """S_k in lexicographic order."""
    return [Permutation(p) for p in permutations(range(1, k + 1))]


def subpatterns(sigma: Permutation) -> set:
    """Patterns left after deleting some (not all) parts and renumbering."""
    out = set()
    k = sigma.degree
    for size in range(1, k + 1):
        for kept in combinations(range(1, k + 1), size):
            rank = {j: r for r, j in enumerate(kept, start=1)}
            out.add(Permutation(tuple(rank[sigma(i)] for i in range(1, k + 1) if sigma(i) in rank)))
    return out


def _splits(n: int, parts: int, min_first: int, min_rest: int):
    """Cut points 0 = c0 <= c1 <= ... <= c_parts = n with part-size minimums."""
    def rec(start, remaining, first):
        if remaining == 1:
            size = n - start
            if size >= (min_first if first else min_rest):
                yield (n,)
            return
        lo = min_first if first else min_rest
        for cut in range(start + lo, n + 1):
            for rest in rec(cut, remaining - 1, False):
                yield (cut,) + rest
    return rec(0, parts, True)


def _apply(word: tuple, cuts: tuple, perm: Permutation) -> tuple:
    bounds = (0,) + cuts
    pieces = [word[bounds[i]:bounds[i + 1]] for i in range(len(cuts))]
    out = ()
    for i in range(1, perm.degree + 1):
        out += pieces[perm(i) - 1]
    return out


def oracle_ltau(w: LanguageSample, tau: Permutation, relaxed: bool = False) -> LanguageSample:
    """All w_{tau(1)}...w_{tau(l)} over splits of sample words into non-empty parts.

    With ``relaxed`` the first part may be empty (only meaningful for l >= 2).
    """
    min_first = 0 if relaxed and tau.degree >= 2 else 1
    out = set()
    for word in w.words:
        for cuts in _splits(len(word), tau.degree, min_first, 1):
            out.add(_apply(word, cuts, tau))
    return LanguageSample(frozenset(out), w.bound, w.exhaustive)


def oracle_sigma(w: LanguageSample, sigma: Permutation) -> LanguageSample:
    """sigma(L) as the union of strict L_tau over subpatterns, plus eps if present."""
    out = set()
    for tau in subpatterns(sigma):
        out |= oracle_ltau(w, tau).words
    if () in w.words:
        out.add(())
    return LanguageSample(frozenset(out), w.bound, w.exhaustive)


def oracle_sigma_direct(w: LanguageSample, sigma: Permutation) -> LanguageSample:
    """sigma(L) straight from the definition: every split, empty parts allowed."""
    out = set()
    for word in w.words:
        for cuts in _splits(len(word), sigma.degree, 0, 0):
            out.add(_apply(word, cuts, sigma))
    return LanguageSample(frozenset(out), w.bound, w.exhaustive)


def oracle_cyc(w: LanguageSample) -> LanguageSample:
    """All rotations of all sample words."""
    out = set()
    for word in w.words:
        out.add(word)
        for i in range(1, len(word)):
            out.add(word[i:] + word[:i])
    return LanguageSample(frozenset(out), w.bound, w.exhaustive)


def oracle_ck(w: LanguageSample, k: int) -> LanguageSample:
    """C^k: the union of sigma(L) over every sigma in S_k."""
    if k < 1:
        raise ValueError("k must be positive")
    out = set()
    for sigma in all_permutations(k):
        out |= oracle_sigma(w, sigma).words
    return LanguageSample(frozenset(out), w.bound, w.exhaustive)
