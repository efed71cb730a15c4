import pytest

from permclosure import (
    GrammarError,
    IndexedGrammar,
    NotNormalForm,
    Copy,
    cyc_grammar,
    enumerate_ig,
    ig_to_normal_form,
    is_ig_normal_form,
    oracle_cyc,
    replay,
)
from permclosure.cyc import CYC_GUESS, CYC_START, hat
from permclosure.enumeration import replay_forms

from conftest import load, words


def nf_inputs():
    return {
        "abc_plus": ig_to_normal_form(load("ig_abc_plus")),
        "anbn": load("ig_anbn_nf"),
        "aba": load("ig_aba_nf"),
    }


def test_rotations_of_abc():
    g = ig_to_normal_form(load("ig_abc_plus"))
    out, _ = enumerate_ig(cyc_grammar(g), 9)
    expected = set()
    for n in (1, 2, 3):
        w = "a" * n + "b" * n + "c" * n
        expected |= {w[i:] + w[:i] for i in range(len(w))}
    assert out.words == words(*expected)
    assert out.exhaustive


def test_single_word():
    g = IndexedGrammar({"S", "A", "B"}, {"a", "b"}, set(), "S",
                       {Copy("S", ("A", "B")), Copy("A", ("a",)), Copy("B", ("b",))})
    assert enumerate_ig(cyc_grammar(g), 4)[0].words == words("ab", "ba")


@pytest.mark.parametrize("name", ["abc_plus", "anbn", "aba"])
def test_nonterminal_count(name):
    g = nf_inputs()[name]
    assert len(cyc_grammar(g).nonterminals) == 2 * len(g.nonterminals) + 2


def test_rejects_non_normal_form(ig_abc_plus):
    with pytest.raises(NotNormalForm, match="normalize"):
        cyc_grammar(ig_abc_plus)


def test_name_clash_is_an_error():
    g = IndexedGrammar({"S", hat("A"), "A"}, {"a"}, set(), "S",
                       {Copy("S", ("A", hat("A"))), Copy("A", ("a",)), Copy(hat("A"), ("a",))})
    assert is_ig_normal_form(g)
    with pytest.raises(GrammarError):
        cyc_grammar(g)


def test_guess_never_pushes_end():
    out = cyc_grammar(nf_inputs()["anbn"])
    guessed = {p.flags for p in out.productions if p.lhs == CYC_GUESS and hasattr(p, "flags")}
    assert guessed == {("f",), ("g",)}
    assert out.start == CYC_START


@pytest.mark.parametrize("name", ["abc_plus", "anbn", "aba"])
def test_against_oracle(name):
    g = nf_inputs()[name]
    for n in (4, 7, 9):
        base = enumerate_ig(g, n)[0]
        out = enumerate_ig(cyc_grammar(g), n)[0]
        assert base.exhaustive and out.exhaustive
        assert out.words == oracle_cyc(base).words
        assert base.words <= out.words


@pytest.mark.parametrize("name", ["abc_plus", "anbn", "aba"])
def test_hat_discipline(name):
    g = nf_inputs()[name]
    out = cyc_grammar(g)
    hatted = {hat(a) for a in g.nonterminals}
    _, witnesses = enumerate_ig(out, 8)
    for word, w in witnesses.items():
        assert replay(out, w) == word
        forms = list(replay_forms(out, w))
        for form in forms:
            assert sum(1 for x in form if isinstance(x, tuple) and x[0] in hatted) <= 1
        for (prod, _), before, after in zip(w.steps, forms, forms[1:]):
            had = any(isinstance(x, tuple) and x[0] in hatted for x in before)
            has = any(isinstance(x, tuple) and x[0] in hatted for x in after)
            if had and not has:
                assert prod.lhs == hat(g.start) and prod.rhs == ()
