"""Permutation closures of regular, context-free and indexed languages."""

from .core import (
    END,
    CfgProduction,
    ContextFreeGrammar,
    Copy,
    GrammarError,
    IndexedGrammar,
    LanguageSample,
    Nfa,
    Pop,
    Push,
    cfg_as_indexed,
)
from .cyc import NotNormalForm, cyc_grammar
from .enumeration import (
    Budget,
    DerivationWitness,
    enumerate_cfg,
    enumerate_ig,
    enumerate_language,
    enumerate_nfa,
    replay,
    samples_equal,
)
from .gamma import ck_grammar, decode_flag, gamma_t, l_tau_grammar, sigma_grammar
from .normal_form import EpsilonProduction, cfg_to_cnf, ig_to_normal_form, is_ig_normal_form
from .perm import (
    Permutation,
    all_permutations,
    oracle_ck,
    oracle_cyc,
    oracle_ltau,
    oracle_sigma,
    subpatterns,
)
from .regular import nfa_single_accept, random_nfa, sigma_nfa
from .shapes import TreeShape, enumerate_shapes
from .textio import ParseError, parse_grammar, serialize_grammar

__version__ = "0.1.0"
