import pytest

from permclosure import (
    END,
    Permutation,
    Pop,
    all_permutations,
    cfg_to_cnf,
    ck_grammar,
    decode_flag,
    enumerate_cfg,
    enumerate_ig,
    gamma_t,
    l_tau_grammar,
    oracle_ltau,
    parse_grammar,
    replay,
    sigma_grammar,
    subpatterns,
)
from permclosure.enumeration import replay_forms
from permclosure.gamma import DegreeMismatch, MalformedFlag, NotCnf, ig_union
from permclosure.shapes import degenerate_shape, enumerate_shapes

from conftest import words


def P(*images):
    return Permutation(images)


def cfg(rules):
    return parse_grammar("type: cfg\nstart: S\n" + rules)


AB_ONLY = cfg("S -> a b\n")


def test_single_word_swap():
    cnf, _ = cfg_to_cnf(AB_ONLY)
    g = gamma_t(cnf, P(2, 1), degenerate_shape())
    assert enumerate_ig(g, 4)[0].words == words("ba", "ab")


def test_g_ab_swap_on_degenerate_shape(g_ab):
    cnf, _ = cfg_to_cnf(g_ab)
    got = enumerate_ig(gamma_t(cnf, P(2, 1), degenerate_shape()), 8)[0]
    assert got.exhaustive
    assert got.words == oracle_ltau(enumerate_cfg(g_ab, 8), P(2, 1), relaxed=True).words
    assert words("ba", "abba", "bbaa", "baab") <= got.words


def test_finite_rotation(g_fin):
    assert enumerate_ig(l_tau_grammar(g_fin, P(3, 1, 2)), 6)[0].words == words("cab", "bca")


def test_needs_cnf(g_ab):
    with pytest.raises(NotCnf):
        gamma_t(g_ab, P(2, 1), degenerate_shape())


def test_degree_must_match_shape(g_ab):
    cnf, _ = cfg_to_cnf(g_ab)
    with pytest.raises(DegreeMismatch):
        gamma_t(cnf, P(2, 1, 3), degenerate_shape())
    with pytest.raises(DegreeMismatch):
        gamma_t(cnf, P(1,), degenerate_shape())


def test_ready_symbols_skip_everything_else(g_dyck):
    cnf, _ = cfg_to_cnf(g_dyck)
    t = enumerate_shapes(2)[0]
    g = gamma_t(cnf, P(3, 1, 2), t)
    pops = {}
    for p in g.productions:
        if isinstance(p, Pop):
            pops.setdefault(p.lhs, {}).setdefault(p.flag, []).append(p.rhs)
    for name, keep in (("_X1", "#3"), ("_Mbar1.1", "#1"), ("S~", END)):
        table = pops[name]
        assert set(table) == g.flags
        for f, rhss in table.items():
            if f == keep:
                assert rhss != [(name,)]
            else:
                assert rhss == [(name,)]


def test_start_never_reused(g_pal):
    cnf, _ = cfg_to_cnf(g_pal)
    for t in enumerate_shapes(3):
        g = gamma_t(cnf, P(2, 4, 1, 3), t)
        assert all(g.start not in getattr(p, "rhs", ()) and getattr(p, "rhs", None) != g.start
                   for p in g.productions)


def test_decode_flag_single_edge():
    sec = decode_flag(("#1", "a.om", "A.R", "S.al", END), degenerate_shape())
    (s,) = sec.sections
    assert (s.index, s.omega, s.v, s.alpha) == (1, "a.om", ("A.R",), "S.al")
    assert sec.flag() == ("#1", "a.om", "A.R", "S.al", END)


@pytest.mark.parametrize("flag", [
    ("a.om", "S.al", END),
    ("#1", "a.om", "S.al"),
    ("#1", "a.om", "A.R", END),
    ("#1", "a.om", "S.al", "x", END),
])
def test_decode_flag_rejects(flag):
    with pytest.raises(MalformedFlag):
        decode_flag(flag, degenerate_shape())


def test_unpacking_flags_decode(g_dyck):
    cnf, _ = cfg_to_cnf(g_dyck)
    t = enumerate_shapes(3)[1]
    g = gamma_t(cnf, P(2, 4, 1, 3), t)
    _, witnesses = enumerate_ig(g, 8)
    assert witnesses
    for word, w in witnesses.items():
        assert replay(g, w) == word
        mbar = {x for form in replay_forms(g, w) for x in form if isinstance(x, tuple) and x[0] == "_Mbar"}
        assert len(mbar) == 1
        sections = decode_flag(mbar.pop()[1], t, cnf=cnf).sections
        assert [s.index for s in sections] == [5, 4, 3, 2, 1]
        assert sections[0].omega[:-3] in cnf.terminals


def test_identity_of_degree_one(g_dyck):
    assert enumerate_ig(l_tau_grammar(g_dyck, P(1)), 8)[0].words == enumerate_cfg(g_dyck, 8).words


def test_epsilon_branch():
    g = cfg("S -> a S b | eps\n")
    out = enumerate_ig(sigma_grammar(g, P(2, 1)), 4)[0]
    assert () in out.words and words("ab", "ba") <= out.words


def test_identity_sigma(g_pal):
    assert enumerate_ig(sigma_grammar(g_pal, P(1, 2, 3)), 6)[0].words == enumerate_cfg(g_pal, 6).words


def test_ck_on_finite(g_fin):
    out = enumerate_ig(ck_grammar(g_fin, 3), 6)[0]
    assert out.words == words("abc", "acb", "bac", "bca", "cab", "cba")


def test_ck_one_keeps_epsilon():
    g = cfg("S -> a S | eps\n")
    assert enumerate_ig(ck_grammar(g, 1), 4)[0].words == enumerate_cfg(g, 4).words


def test_ck_rejects_zero(g_ab):
    with pytest.raises(ValueError):
        ck_grammar(g_ab, 0)


def test_union():
    ga = l_tau_grammar(cfg("S -> a\n"), P(1))
    gb = l_tau_grammar(cfg("S -> b\n"), P(1))
    assert enumerate_ig(ig_union([ga, gb]), 2)[0].words == words("a", "b")
    assert enumerate_ig(ig_union([ga, ga]), 2)[0].words == words("a")
    with pytest.raises(ValueError):
        ig_union([])


@pytest.mark.parametrize("sigma", all_permutations(3))
def test_sigma_is_union_of_ltau(g_ab, sigma):
    n = 6
    union = set()
    for tau in subpatterns(sigma):
        union |= enumerate_ig(l_tau_grammar(g_ab, tau), n)[0].words
    assert enumerate_ig(sigma_grammar(g_ab, sigma), n)[0].words == union
