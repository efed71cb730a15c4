import pytest
from hypothesis import given, settings, strategies as st

from permclosure import (
    Permutation,
    all_permutations,
    oracle_ck,
    oracle_cyc,
    oracle_ltau,
    oracle_sigma,
    subpatterns,
)
from permclosure.core import sample
from permclosure.perm import oracle_sigma_direct

from conftest import words


def P(*images):
    return Permutation(images)


def W(*items, bound=8):
    return sample(words(*items), bound)


def test_permutation_parsing_and_validation():
    assert Permutation.parse("2, 3,1") == P(2, 3, 1)
    assert P(2, 3, 1)(1) == 2
    with pytest.raises(ValueError):
        Permutation.parse("1,1")
    with pytest.raises(ValueError):
        Permutation.parse("a,b")


def test_all_permutations_counts():
    assert [len(all_permutations(k)) for k in (1, 2, 3, 4)] == [1, 2, 6, 24]


def test_subpatterns_examples():
    assert subpatterns(P(1)) == {P(1)}
    assert subpatterns(P(2, 3, 1)) == {P(2, 3, 1), P(1, 2), P(2, 1), P(1)}
    assert subpatterns(P(1, 2)) == {P(1, 2), P(1)}


def test_ltau_examples():
    assert oracle_ltau(W("aabb"), P(2, 1)).words == words("abba", "bbaa", "baab")
    assert oracle_ltau(W("a"), P(2, 1), relaxed=True).words == words("a")
    assert oracle_ltau(W("a"), P(2, 1)).words == frozenset()
    w = W("eps", "ab", "aab")
    assert oracle_ltau(w, P(1)).words == w.words - {()}


def test_sigma_examples():
    assert oracle_sigma(W("ab"), P(2, 1)).words == words("ab", "ba")
    w = W("ab", "aab", "abb")
    assert oracle_sigma(w, P(1, 2, 3)).words == w.words
    assert oracle_sigma(W("eps"), P(3, 1, 2)).words == words("eps")


def test_cyc_examples():
    assert oracle_cyc(W("aabb")).words == words("aabb", "abba", "bbaa", "baab")
    assert oracle_cyc(W("eps")).words == words("eps")
    assert oracle_cyc(W("ab")).words == words("ab", "ba")


def test_ck_examples():
    assert oracle_ck(W("abc"), 3).words == words("abc", "acb", "bac", "bca", "cab", "cba")
    w = W("ab", "aab")
    assert oracle_ck(w, 1).words == w.words
    assert oracle_ck(w, 2).words == oracle_cyc(w).words


def test_exhaustiveness_is_carried_through():
    w = sample(words("ab"), 4, exhaustive=False)
    assert not oracle_sigma(w, P(2, 1)).exhaustive


word_sets = st.frozensets(st.text(alphabet="ab", max_size=5).map(tuple), max_size=6)
perms = st.integers(1, 4).flatmap(lambda k: st.permutations(range(1, k + 1))).map(Permutation)


@settings(max_examples=80, deadline=None)
@given(word_sets, perms)
def test_sigma_is_union_of_strict_subpatterns(ws, sigma):
    w = sample(ws, 5)
    expected = set()
    for tau in subpatterns(sigma):
        expected |= oracle_ltau(w, tau).words
    expected |= ws & {()}
    assert oracle_sigma(w, sigma).words == expected
    assert oracle_sigma_direct(w, sigma).words == expected


@settings(max_examples=80, deadline=None)
@given(word_sets, perms)
def test_sigma_contains_input_and_preserves_lengths(ws, sigma):
    out = oracle_sigma(sample(ws, 5), sigma).words
    assert ws <= out
    lengths = {len(x) for x in ws}
    assert {len(x) for x in out} <= lengths


@settings(max_examples=60, deadline=None)
@given(word_sets)
def test_cyc_closed_under_rotation(ws):
    out = oracle_cyc(sample(ws, 5)).words
    assert all(x[1:] + x[:1] in out for x in out)


@settings(max_examples=60, deadline=None)
@given(word_sets, word_sets, perms)
def test_monotone(ws1, ws2, sigma):
    small, big = sample(ws1, 5), sample(ws1 | ws2, 5)
    assert oracle_sigma(small, sigma).words <= oracle_sigma(big, sigma).words
    assert oracle_cyc(small).words <= oracle_cyc(big).words
