"""Line-oriented text format for grammars and automata.

::

    type: cfg | indexed | nfa
    start: S
    flags: f g              # indexed only; $ is implicit
    terminals: a b          # optional, inferred otherwise
    nonterminals: S T       # optional, inferred from left-hand sides
    flag-weights: f=1       # indexed only, optional
    S -> a S b | eps
    T -> T^f g              # push: T^{f g ...}
    A^f -> a A              # pop
    states: q0 q1           # nfa
    alphabet: a b           # nfa, optional
    accept: q1
    q0 a -> q1
    q0 eps -> q1

A ``#`` standing alone as a token (or at the start of a line) begins a comment;
tokens such as ``#3`` are ordinary symbols.
"""

from __future__ import annotations

from .core import (
    END,
    EPS,
    ContextFreeGrammar,
    CfgProduction,
    Copy,
    DuplicateDeclaration,
    GrammarError,
    IndexedGrammar,
    Nfa,
    Pop,
    Push,
    UndeclaredSymbol,
)

_HEADERS = {
    "type", "start", "flags", "terminals", "nonterminals", "states",
    "accept", "alphabet", "flag-weights", "cnf",
}
_LIST_HEADERS = {"flags", "terminals", "nonterminals", "states", "accept", "alphabet", "flag-weights"}


class ParseError(GrammarError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


def _tokens(line: str) -> list:
    """Whitespace-split tokens with 1-based columns, comments removed."""
    out = []
    i, n = 0, len(line)
    while i < n:
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < n and not line[j].isspace():
            j += 1
        tok = line[i:j]
        if tok == "#" or (not out and tok.startswith("#") and not tok[1:].isdigit()):
            break
        out.append((tok, i + 1))
        i = j
    return out


def parse_grammar(text: str):
    """Parse the text format into a ContextFreeGrammar, IndexedGrammar or Nfa."""
    headers = {}
    header_pos = {}
    rules = []  # (line number, tokens)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw)
        if not toks:
            continue
        first, col = toks[0]
        if first.endswith(":") and first[:-1] in _HEADERS:
            key = first[:-1]
            if key in headers:
                raise DuplicateDeclaration(f"line {lineno}: repeated '{key}:' declaration")
            values = [t for t, _ in toks[1:]]
            if key in _LIST_HEADERS:
                seen = set()
                for v, c in toks[1:]:
                    if v in seen:
                        raise DuplicateDeclaration(f"line {lineno}, column {c}: {v!r} declared twice")
                    seen.add(v)
            elif len(values) != 1:
                raise ParseError(f"'{key}:' takes exactly one value", lineno, col)
            headers[key] = values
            header_pos[key] = (lineno, col)
            continue
        if first.endswith(":"):
            raise ParseError(f"unknown declaration {first!r}", lineno, col)
        rules.append((lineno, toks))

    if "type" not in headers:
        raise ParseError("missing 'type:' declaration", 1, 1)
    kind = headers["type"][0]
    if kind == "nfa":
        return _build_nfa(headers, rules)
    if kind not in ("cfg", "indexed"):
        raise ParseError(f"unknown type {kind!r}", *header_pos["type"])
    return _build_grammar(kind, headers, header_pos, rules)


def _split_alternatives(toks, lineno):
    alts, cur = [], []
    for tok, col in toks:
        if tok == "|":
            alts.append(cur)
            cur = []
        else:
            cur.append((tok, col))
    alts.append(cur)
    for alt in alts:
        if not alt:
            col = toks[0][1] if toks else 1
            raise ParseError("empty alternative (write 'eps' for the empty word)", lineno, col)
    return alts


def _build_grammar(kind, headers, header_pos, rules):
    indexed = kind == "indexed"
    for key in ("flags", "flag-weights"):
        if key in headers and not indexed:
            raise ParseError(f"'{key}:' is only allowed in indexed grammars", *header_pos[key])
    for key in ("states", "accept", "alphabet"):
        if key in headers:
            raise ParseError(f"'{key}:' is only allowed in automata", *header_pos[key])
    if "start" not in headers:
        raise ParseError("missing 'start:' declaration", 1, 1)
    start = headers["start"][0]

    parsed = []  # (kind, lhs, flag, rhs or (target, flags), lineno, col)
    for lineno, toks in rules:
        arrows = [i for i, (t, _) in enumerate(toks) if t == "->"]
        if len(arrows) != 1:
            raise ParseError("expected exactly one '->'", lineno, toks[0][1])
        a = arrows[0]
        if a != 1:
            raise ParseError("left-hand side must be a single symbol", lineno, toks[0][1])
        lhs_tok, lhs_col = toks[0]
        lhs_flag = None
        if "^" in lhs_tok:
            if not indexed:
                raise ParseError("flags are not allowed in a cfg", lineno, lhs_col)
            lhs_tok, _, lhs_flag = lhs_tok.partition("^")
            if not lhs_tok or not lhs_flag or "^" in lhs_flag:
                raise ParseError("malformed flagged left-hand side", lineno, lhs_col)
        for alt in _split_alternatives(toks[a + 1:], lineno):
            words = [t for t, _ in alt]
            for tok, col in alt:
                if tok == "^":
                    raise ParseError("stray '^'", lineno, col)
            carets = [(i, col) for i, (t, col) in enumerate(alt) if "^" in t]
            if carets:
                i, col = carets[0]
                if not indexed:
                    raise ParseError("flags are not allowed in a cfg", lineno, col)
                if i != 0 or len(carets) > 1:
                    raise ParseError("a push right-hand side is a single flagged nonterminal", lineno, col)
                if lhs_flag is not None:
                    raise ParseError("a production cannot both pop and push", lineno, col)
                target, _, f0 = words[0].partition("^")
                flags = ([f0] if f0 else []) + words[1:]
                if not target or not flags or any("^" in f for f in flags):
                    raise ParseError("malformed push", lineno, col)
                parsed.append(("push", lhs_tok, None, (target, tuple(flags)), lineno, col))
                continue
            if words == [EPS]:
                rhs = ()
            else:
                if EPS in words:
                    raise ParseError("'eps' must stand alone", lineno, alt[words.index(EPS)][1])
                for tok, col in alt:
                    if tok in ("->", END, "#"):
                        raise ParseError(f"reserved token {tok!r} in right-hand side", lineno, col)
                rhs = tuple(words)
            kind_ = "pop" if lhs_flag is not None else "copy"
            parsed.append((kind_, lhs_tok, lhs_flag, rhs, lineno, alt[0][1]))

    # symbol classes
    nonterminals = set(headers.get("nonterminals", []))
    nonterminals |= {p[1] for p in parsed}
    nonterminals |= {p[3][0] for p in parsed if p[0] == "push"}
    nonterminals.add(start)
    used = set()
    for p in parsed:
        if p[0] != "push":
            used |= set(p[3])
    if "terminals" in headers:
        terminals = set(headers["terminals"])
        both = terminals & nonterminals
        if both:
            raise DuplicateDeclaration(f"declared both terminal and nonterminal: {sorted(both)}")
        for p in parsed:
            if p[0] == "push":
                continue
            for s in p[3]:
                if s not in terminals and s not in nonterminals:
                    raise UndeclaredSymbol(f"line {p[4]}: undeclared symbol {s!r}")
    else:
        terminals = used - nonterminals

    if not indexed:
        prods = frozenset(CfgProduction(p[1], p[3]) for p in parsed)
        cnf = headers.get("cnf", ["false"])[0] == "true"
        return ContextFreeGrammar(frozenset(nonterminals), frozenset(terminals), start, prods, cnf)

    flags = set(headers.get("flags", []))
    if END in flags:
        raise DuplicateDeclaration("'$' is implicit and must not be declared")
    flags.add(END)
    prods = set()
    for kind_, lhs, flag, rhs, lineno, col in parsed:
        if kind_ == "push":
            target, fl = rhs
            for f in fl:
                if f not in flags:
                    raise UndeclaredSymbol(f"line {lineno}: undeclared flag {f!r}")
            prods.add(Push(lhs, target, fl))
        elif kind_ == "pop":
            if flag not in flags:
                raise UndeclaredSymbol(f"line {lineno}: undeclared flag {flag!r}")
            prods.add(Pop(lhs, flag, rhs))
        else:
            prods.add(Copy(lhs, rhs))
    weights = {}
    for item in headers.get("flag-weights", []):
        f, sep, w = item.rpartition("=")
        if not sep or not f or not w.isdigit():
            raise ParseError(f"malformed flag weight {item!r}", *header_pos["flag-weights"])
        weights[f] = int(w)
    return IndexedGrammar(
        frozenset(nonterminals), frozenset(terminals), frozenset(flags), start, frozenset(prods), weights
    )


def _build_nfa(headers, rules):
    for key in ("flags", "flag-weights", "nonterminals", "terminals", "cnf"):
        if key in headers:
            raise GrammarError(f"'{key}:' is not allowed in an automaton")
    if "start" not in headers:
        raise ParseError("missing 'start:' declaration", 1, 1)
    states = set(headers.get("states", []))
    trans = set()
    labels = set()
    for lineno, toks in rules:
        words = [t for t, _ in toks]
        if len(words) != 4 or words[2] != "->":
            raise ParseError("expected 'state symbol -> state'", lineno, toks[0][1])
        src, a, _, dst = words
        for s, col in ((src, toks[0][1]), (dst, toks[3][1])):
            if s not in states:
                raise UndeclaredSymbol(f"line {lineno}, column {col}: undeclared state {s!r}")
        label = None if a == EPS else a
        if label is not None:
            labels.add(label)
        trans.add((src, label, dst))
    if "alphabet" in headers:
        alphabet = set(headers["alphabet"])
        extra = labels - alphabet
        if extra:
            raise UndeclaredSymbol(f"transition labels not in alphabet: {sorted(extra)}")
    else:
        alphabet = labels
    return Nfa(frozenset(states), frozenset(alphabet), frozenset(trans),
               headers["start"][0], frozenset(headers.get("accept", [])))


def _decl(key, items):
    items = sorted(items)
    return f"{key}:" + ("".join(" " + i for i in items))


def serialize_grammar(g) -> str:
    """Canonical text: declarations first, then one production per line, sorted."""
    lines = []
    if isinstance(g, ContextFreeGrammar):
        lines.append("type: cfg")
        if g.cnf:
            lines.append("cnf: true")
        lines.append(f"start: {g.start}")
        lines.append(_decl("nonterminals", g.nonterminals))
        lines.append(_decl("terminals", g.terminals))
        lines.extend(sorted(str(p) for p in g.productions))
    elif isinstance(g, IndexedGrammar):
        lines.append("type: indexed")
        lines.append(f"start: {g.start}")
        lines.append(_decl("nonterminals", g.nonterminals))
        lines.append(_decl("terminals", g.terminals))
        lines.append(_decl("flags", g.flags - {END}))
        if g.flag_weights:
            lines.append(_decl("flag-weights", (f"{f}={w}" for f, w in g.flag_weights.items())))
        lines.extend(sorted(str(p) for p in g.productions))
    elif isinstance(g, Nfa):
        lines.append("type: nfa")
        lines.append(_decl("states", g.states))
        lines.append(_decl("alphabet", g.alphabet))
        lines.append(f"start: {g.start}")
        lines.append(_decl("accept", g.accepts))
        lines.extend(sorted(f"{s} {EPS if a is None else a} -> {d}" for s, a, d in g.transitions))
    else:
        raise TypeError(f"cannot serialize {type(g).__name__}")
    return "\n".join(lines) + "\n"
