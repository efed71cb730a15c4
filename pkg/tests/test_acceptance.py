"""The eight acceptance criteria, each at its stated bound and time limit."""

import time
from contextlib import contextmanager
from itertools import product

import pytest

from permclosure import (
    Permutation,
    all_permutations,
    cfg_as_indexed,
    cfg_to_cnf,
    ck_grammar,
    cyc_grammar,
    enumerate_cfg,
    enumerate_ig,
    enumerate_nfa,
    enumerate_shapes,
    ig_to_normal_form,
    is_ig_normal_form,
    l_tau_grammar,
    oracle_ck,
    oracle_cyc,
    oracle_ltau,
    oracle_sigma,
    parse_grammar,
    random_nfa,
    replay,
    sigma_grammar,
    sigma_nfa,
    subpatterns,
)
from permclosure.cli import run
from permclosure.enumeration import cyk

from conftest import ACCEPTANCE, CFG_FIXTURES, load

pytestmark = pytest.mark.acceptance

S2_S3 = all_permutations(2) + all_permutations(3)
S4_PICK = Permutation((2, 4, 1, 3))


@contextmanager
def criterion(number, limit=None):
    """Record PASS/FAIL for a criterion; the body appends notes to the yielded list."""
    notes = []
    t0 = time.perf_counter()
    ok = False
    try:
        yield notes
        elapsed = time.perf_counter() - t0
        assert limit is None or elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
        ok = True
    finally:
        elapsed = time.perf_counter() - t0
        notes.append(f"{elapsed:.2f}s" + (f" (limit {limit}s)" if limit else ""))
        ACCEPTANCE[number] = (ok, "; ".join(notes))


def cfgs():
    return {name: load(name) for name in CFG_FIXTURES}


def test_criterion_1_shape_counts(capsys):
    with criterion(1, limit=1) as notes:
        counts = []
        for leaves in range(2, 7):
            capsys.readouterr()
            assert run(["shapes", "--leaves", str(leaves)]) == 0
            counts.append(capsys.readouterr().out.count("shape "))
        assert counts == [1, 2, 5, 14, 42]
        assert {str(t) for t in enumerate_shapes(3)} == {"((* *) *)", "(* (* *))"}
        notes.append(f"counts {counts}")


def test_criterion_2_regular_construction():
    with criterion(2, limit=10) as notes:
        ab_star = load("ab_star")
        machines = [ab_star] + [random_nfa(seed) for seed in range(20)]
        perms = [Permutation((1,))] + S2_S3
        checked = 0
        for m in machines:
            base = enumerate_nfa(m, 6)
            for sigma in perms:
                assert enumerate_nfa(sigma_nfa(m, sigma), 6).words == oracle_sigma(base, sigma).words
                checked += 1
        notes.append(f"{checked} automaton/permutation pairs equal at length 6")


def test_criterion_3_cyclic_closure():
    with criterion(3, limit=30) as notes:
        grammars = [ig_to_normal_form(load("ig_abc_plus")), load("ig_anbn_nf"), load("ig_aba_nf")]
        sizes = []
        for g in grammars:
            assert is_ig_normal_form(g)
            base = enumerate_ig(g, 9)[0]
            out = enumerate_ig(cyc_grammar(g), 9)[0]
            assert base.exhaustive and out.exhaustive
            assert out.words == oracle_cyc(base).words
            sizes.append(len(out))
        notes.append(f"3 grammars, bound 9, rotation sets of size {sizes}, all exhaustive")


def test_criterion_4_ltau():
    with criterion(4, limit=60) as notes:
        cases = 0
        for name, g in cfgs().items():
            base = enumerate_cfg(g, 8)
            for tau in S2_S3 + [S4_PICK]:
                out = enumerate_ig(l_tau_grammar(g, tau), 8)[0]
                assert out.exhaustive, (name, str(tau))
                assert out.words == oracle_ltau(base, tau, relaxed=True).words, (name, str(tau))
                cases += 1
        notes.append(f"{cases} grammar/permutation pairs equal the relaxed oracle at length 8")


def test_criterion_5_decomposition():
    with criterion(5) as notes:
        for name, g in cfgs().items():
            base = enumerate_cfg(g, 8)
            eps = base.words & {()}
            ltau = {}

            def lt(tau):
                if tau not in ltau:
                    ltau[tau] = enumerate_ig(l_tau_grammar(g, tau), 8)[0].words
                return ltau[tau]

            for sigma in S2_S3:
                got = enumerate_ig(sigma_grammar(g, sigma), 8)[0]
                assert got.exhaustive
                union = set(eps)
                for tau in subpatterns(sigma):
                    union |= lt(tau)
                assert got.words == union == oracle_sigma(base, sigma).words, (name, str(sigma))
            for k in (2, 3):
                got = enumerate_ig(ck_grammar(g, k), 8)[0]
                assert got.exhaustive
                union = set(eps)
                for ell in range(1, k + 1):
                    for tau in all_permutations(ell):
                        union |= lt(tau)
                assert got.words == union == oracle_ck(base, k).words, (name, k)
                if k == 2:
                    assert got.words == oracle_cyc(base).words
        notes.append("sigma over S2+S3 and C^2, C^3 on 4 grammars at length 8; C^2 = cyc")


def test_criterion_6_cross_construction():
    with criterion(6) as notes:
        for name, g in cfgs().items():
            a = enumerate_ig(ck_grammar(g, 2), 8)[0]
            b = enumerate_ig(cyc_grammar(ig_to_normal_form(cfg_as_indexed(g))), 8)[0]
            assert a.exhaustive and b.exhaustive
            assert a.words == b.words, name
        notes.append("C^2 and cyc agree on 4 grammars at length 8")


def test_criterion_7_normal_form():
    with criterion(7) as notes:
        grammars = {name: load(name) for name in ("ig_abc_plus", "ig_anbn_nf", "ig_aba_nf")}
        grammars["multi_push"] = parse_grammar(
            "type: indexed\nflags: f g h\nstart: S\nS -> T^h\nT -> T^f g | A B\n"
            "A^f -> a A\nA^g -> a A\nA^h -> a\nB^f -> B\nB^g -> b B\nB^h -> b\n")
        for name, g in cfgs().items():
            grammars[name + "_indexed"] = cfg_as_indexed(g)
        for name, g in grammars.items():
            nf = ig_to_normal_form(g)
            assert is_ig_normal_form(nf), name
            a, b = enumerate_ig(g, 8)[0], enumerate_ig(nf, 8)[0]
            assert a.exhaustive and b.exhaustive
            assert a.words == b.words, name
        notes.append(f"{len(grammars)} grammars keep their language at length 8")


BINARY_CFGS = {
    "g_ab": None,
    "g_dyck": None,
    "g_pal": None,
    "mixed": "S -> A B | B A | a\nA -> a A | a\nB -> b B b | b\n",
    "unbalanced": "S -> a S b S | b\n",
    "with_eps": "S -> a S | S b | eps\n",
}


def test_criterion_8_soundness():
    with criterion(8) as notes:
        replayed = 0
        subjects = [load(n) for n in ("ig_abc", "ig_abc_plus", "ig_anbn_nf", "ig_aba_nf")]
        subjects.append(cyc_grammar(load("ig_anbn_nf")))
        for g in cfgs().values():
            subjects.append(l_tau_grammar(g, Permutation((3, 1, 2))))
            subjects.append(ck_grammar(g, 2))
        for g in subjects:
            sample, witnesses = enumerate_ig(g, 8)
            assert set(witnesses) == set(sample.words)
            for word, w in witnesses.items():
                assert replay(g, w) == word
                replayed += 1
        checked = 0
        for name, text in BINARY_CFGS.items():
            g = load(name) if text is None else parse_grammar("type: cfg\nstart: S\n" + text)
            cnf, had_eps = cfg_to_cnf(g)
            alphabet = sorted(g.terminals)
            assert len(alphabet) == 2
            got = enumerate_cfg(g, 6).words
            for n in range(7):
                for w in product(alphabet, repeat=n):
                    member = had_eps if n == 0 else cyk(cnf, w)
                    assert (w in got) == member, (name, w)
                    checked += 1
        notes.append(f"{replayed} witnesses replayed; {checked} words checked by CYK")
