"""Bounded exhaustive enumeration of CFG, NFA and indexed-grammar languages."""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field

from .core import (
    END,
    ContextFreeGrammar,
    Copy,
    IndexedGrammar,
    LanguageSample,
    Nfa,
    Pop,
    Push,
    word_str,
)

INF = float("inf")


class BoundMismatch(ValueError):
    pass


class ReplayError(ValueError):
    pass


@dataclass(frozen=True)
class Budget:
    """Search limits for indexed-grammar enumeration.

    Hitting any of them marks the result as not exhaustive.
    """

    max_flag_depth: int = 64
    max_form_len: int = 48
    max_states: int = 5_000_000

    def __post_init__(self):
        for name in ("max_flag_depth", "max_form_len", "max_states"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


# ----------------------------------------------------------------------------
# context-free grammars and automata


def enumerate_cfg(g: ContextFreeGrammar, n: int) -> LanguageSample:
    """L(g) restricted to words of length <= n, by a least fixpoint."""
    words = {a: set() for a in g.nonterminals}
    prods = sorted(g.productions)
    changed = True
    while changed:
        changed = False
        for p in prods:
            partial = {()}
            for s in p.rhs:
                options = words[s] if s in g.nonterminals else ((s,),)
                partial = {u + v for u in partial for v in options if len(u) + len(v) <= n}
                if not partial:
                    break
            new = partial - words[p.lhs]
            if new:
                words[p.lhs] |= new
                changed = True
    return LanguageSample(frozenset(words[g.start]), n, True)


def enumerate_nfa(m: Nfa, n: int) -> LanguageSample:
    """L(m) restricted to words of length <= n, by DP over (state, word) layers."""
    layer = {(q, ()) for q in m.eps_closure({m.start})}
    out = {w for q, w in layer if q in m.accepts}
    for _ in range(n):
        nxt = set()
        for q, w in layer:
            for a in m.alphabet:
                for r in m.step({q}, a):
                    nxt.add((r, w + (a,)))
        layer = nxt
        out |= {w for q, w in layer if q in m.accepts}
    return LanguageSample(frozenset(out), n, True)


def cyk(g: ContextFreeGrammar, word) -> bool:
    """Membership for a CNF grammar (the empty word is never generated)."""
    if not g.cnf:
        raise ValueError("cyk needs a grammar in Chomsky normal form")
    word = tuple(word)
    n = len(word)
    if n == 0:
        return False
    table = {}
    for i, a in enumerate(word):
        table[i, i + 1] = {p.lhs for p in g.productions if p.rhs == (a,)}
    binary = [p for p in g.productions if len(p.rhs) == 2]
    for span in range(2, n + 1):
        for i in range(n - span + 1):
            j = i + span
            cell = set()
            for k in range(i + 1, j):
                left, right = table[i, k], table[k, j]
                for p in binary:
                    if p.rhs[0] in left and p.rhs[1] in right:
                        cell.add(p.lhs)
            table[i, j] = cell
    return g.start in table[0, n]


# ----------------------------------------------------------------------------
# comparison


@dataclass(frozen=True)
class SampleDiff:
    missing: frozenset  # in expected, not in actual
    extra: frozenset  # in actual, not in expected
    bound: int
    advisory: bool = False  # one side was not exhaustive

    @property
    def equal(self) -> bool:
        return not self.missing and not self.extra

    def as_dict(self) -> dict:
        from .core import shortlex

        return {
            "bound": self.bound,
            "equal": self.equal,
            "advisory": self.advisory,
            "missing": [word_str(w) for w in shortlex(self.missing)],
            "extra": [word_str(w) for w in shortlex(self.extra)],
        }


def samples_equal(actual: LanguageSample, expected: LanguageSample) -> SampleDiff:
    if actual.bound != expected.bound:
        raise BoundMismatch(f"bounds differ: {actual.bound} vs {expected.bound}")
    return SampleDiff(
        missing=expected.words - actual.words,
        extra=actual.words - expected.words,
        bound=actual.bound,
        advisory=not (actual.exhaustive and expected.exhaustive),
    )


# ----------------------------------------------------------------------------
# derivation witnesses


@dataclass(frozen=True)
class DerivationWitness:
    """Productions applied, each with the position of the rewritten nonterminal."""

    steps: tuple

    def __len__(self):
        return len(self.steps)


def _apply_step(g: IndexedGrammar, form: list, prod, pos: int) -> list:
    if not 0 <= pos < len(form) or not isinstance(form[pos], tuple):
        raise ReplayError(f"position {pos} does not hold a nonterminal")
    sym, flag = form[pos]
    if sym != prod.lhs:
        raise ReplayError(f"{prod} applied to {sym}")
    if prod not in g.productions:
        raise ReplayError(f"{prod} is not a production of the grammar")
    if isinstance(prod, Push):
        repl = [(prod.rhs, tuple(prod.flags) + flag)]
    elif isinstance(prod, Pop):
        if not flag or flag[0] != prod.flag:
            raise ReplayError(f"{prod} needs flag {prod.flag} on top of {flag}")
        rest = flag[1:]
        repl = [(s, rest) if s in g.nonterminals else s for s in prod.rhs]
    else:
        repl = [(s, flag) if s in g.nonterminals else s for s in prod.rhs]
    return form[:pos] + repl + form[pos + 1:]


def replay_forms(g: IndexedGrammar, witness: DerivationWitness):
    """Yield every sentential form of the derivation, starting from start^$."""
    form = [(g.start, (END,))]
    yield list(form)
    for prod, pos in witness.steps:
        form = _apply_step(g, form, prod, pos)
        yield list(form)


def replay(g: IndexedGrammar, witness: DerivationWitness) -> tuple:
    """Replay a witness and return the derived word; raises ReplayError."""
    form = None
    for form in replay_forms(g, witness):
        pass
    if any(isinstance(x, tuple) for x in form):
        raise ReplayError("derivation ends with nonterminals left")
    return tuple(form)


# ----------------------------------------------------------------------------
# indexed grammars


class _Flags:
    """Hash-consed flag strings; id 0 is the empty string."""

    def __init__(self, weights):
        self.index = {}
        self.head = [None]
        self.tail = [0]
        self.depth = [0]
        self.weight = [0]
        self._w = weights

    def push(self, f: int, rest: int) -> int:
        key = (f, rest)
        i = self.index.get(key)
        if i is None:
            i = len(self.head)
            self.index[key] = i
            self.head.append(f)
            self.tail.append(rest)
            self.depth.append(self.depth[rest] + 1)
            self.weight.append(self._w[f])
        return i

    def names(self, i: int, flag_names) -> tuple:
        out = []
        while i:
            out.append(flag_names[self.head[i]])
            i = self.tail[i]
        return tuple(out)


class _Compiled:
    def __init__(self, g: IndexedGrammar):
        self.g = g
        self.nts = sorted(g.nonterminals)
        self.nt_id = {a: i for i, a in enumerate(self.nts)}
        self.flag_names = sorted(g.flags)
        self.flag_id = {f: i for i, f in enumerate(self.flag_names)}
        self.K = len(self.nts)
        self.flags = _Flags([g.flag_weights.get(f, 0) for f in self.flag_names])
        self.weighted = bool(g.flag_weights)

        def rhs_items(rhs):
            return tuple(self.nt_id[s] if s in g.nonterminals else s for s in rhs)

        K = self.K
        self.copies = [[] for _ in range(K)]
        self.pushes = [[] for _ in range(K)]
        self.pops = [dict() for _ in range(K)]
        self.pushed_flags = set()
        for p in g.sorted_productions():
            a = self.nt_id[p.lhs]
            if isinstance(p, Copy):
                self.copies[a].append((p, rhs_items(p.rhs)))
            elif isinstance(p, Push):
                ids = tuple(self.flag_id[f] for f in p.flags)
                self.pushed_flags.update(ids)
                self.pushes[a].append((p, self.nt_id[p.rhs], ids))
            else:
                self.pops[a].setdefault(self.flag_id[p.flag], []).append((p, rhs_items(p.rhs)))
        self.fixed = [len(self.copies[a]) + len(self.pushes[a]) for a in range(K)]

        # skip sets: flags a nonterminal can only pop back into itself
        self.skip = [None] * K
        for a in range(K):
            if self.fixed[a]:
                continue
            skips = {}
            for f, opts in self.pops[a].items():
                if len(opts) == 1 and opts[0][1] == (a,):
                    skips[f] = opts[0][0]
            if skips:
                self.skip[a] = skips
        self.static_lb = self._static_bounds()

    def _static_bounds(self) -> list:
        """Minimal yields with all flag constraints ignored."""
        K = self.K
        lb = [INF] * K
        changed = True
        while changed:
            changed = False
            for a in range(K):
                best = lb[a]
                cands = [rhs for _, rhs in self.copies[a]]
                cands += [rhs for opts in self.pops[a].values() for _, rhs in opts]
                cands += [(b,) for _, b, _ in self.pushes[a]]
                for rhs in cands:
                    v = 0
                    for s in rhs:
                        v += lb[s] if s.__class__ is int else 1
                    if v < best:
                        best = v
                if best < lb[a]:
                    lb[a] = best
                    changed = True
        return lb


class _FlagAwareBound:
    """Lower bounds on the yield of A^gamma, computed level by level along gamma.

    Flags pushed above the known string gamma form an unknown stack region
    ("wild").  Every flag in such a region was pushed by a descendant of the
    nonterminal that opened it, so pops inside the region are limited to the
    flags pushable from that opener.  Minimal yields over this relaxation are
    computed with Knuth's generalisation of Dijkstra's algorithm.
    """

    def __init__(self, c: _Compiled):
        self.c = c
        K = c.K
        self.cache = {}
        succ = [set() for _ in range(K)]
        pushed_by = [set() for _ in range(K)]
        for a in range(K):
            for _, rhs in c.copies[a]:
                succ[a].update(s for s in rhs if s.__class__ is int)
            for opts in c.pops[a].values():
                for _, rhs in opts:
                    succ[a].update(s for s in rhs if s.__class__ is int)
            for _, b, ids in c.pushes[a]:
                succ[a].add(b)
                pushed_by[a].update(ids)
        regions = {}
        region_of = []
        for a in range(K):
            seen = {a}
            stack = [a]
            while stack:
                for y in succ[stack.pop()]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            flags = frozenset(f for y in seen for f in pushed_by[y])
            region_of.append(regions.setdefault(flags, len(regions)))
        R = len(regions)
        region_flags = [None] * R
        for flags, r in regions.items():
            region_flags[r] = flags

        # node ids: exact a; wild (a, r) = K + r*K + a; either (a, r) = K + (R + r)*K + a
        def wild(a, r):
            return K + r * K + a

        def either(a, r):
            return K + (R + r) * K + a

        self.size = K * (1 + 2 * R)
        rules = []
        for a in range(K):
            for _, rhs in c.copies[a]:
                const = sum(1 for s in rhs if s.__class__ is str)
                nts = [s for s in rhs if s.__class__ is int]
                rules.append((a, const, tuple(nts)))
                for r in range(R):
                    rules.append((wild(a, r), const, tuple(wild(s, r) for s in nts)))
            for _, b, _ in c.pushes[a]:
                rules.append((a, 0, (wild(b, region_of[a]),)))
                for r in range(R):
                    rules.append((wild(a, r), 0, (wild(b, r),)))
            for f, opts in c.pops[a].items():
                for r in range(R):
                    if f not in region_flags[r]:
                        continue
                    for _, rhs in opts:
                        const = sum(1 for s in rhs if s.__class__ is str)
                        nts = tuple(either(s, r) for s in rhs if s.__class__ is int)
                        rules.append((wild(a, r), const, nts))
            for r in range(R):
                rules.append((either(a, r), 0, (a,)))
                rules.append((either(a, r), 0, (wild(a, r),)))
        self.static_rules = rules
        self.uses = {}
        for i, (_, _, body) in enumerate(rules):
            for x in body:
                self.uses.setdefault(x, []).append(i)

    def level(self, phi: int) -> list:
        vals = self.cache.get(phi)
        if vals is not None:
            return vals
        c = self.c
        K = c.K
        seeds = []
        if phi:
            below = self.level(c.flags.tail[phi])
            head = c.flags.head[phi]
            for a in range(K):
                for _, rhs in c.pops[a].get(head, ()):
                    v = 0
                    for s in rhs:
                        v += below[s] if s.__class__ is int else 1
                    if v < INF:
                        seeds.append((v, a))
        rules = self.static_rules
        remaining = [len(body) for _, _, body in rules]
        sums = [const for _, const, _ in rules]
        heap = seeds
        for r, (h, const, body) in enumerate(rules):
            if not body:
                heap.append((const, h))
        heapq.heapify(heap)
        vals = [INF] * self.size
        done = [False] * self.size
        while heap:
            v, x = heapq.heappop(heap)
            if done[x]:
                continue
            done[x] = True
            vals[x] = v
            for r in self.uses.get(x, ()):
                remaining[r] -= 1
                sums[r] += v
                if remaining[r] == 0:
                    heapq.heappush(heap, (sums[r], rules[r][0]))
        vals = vals[:K]
        self.cache[phi] = vals
        return vals


class _MinYield:
    """Exact least yields of A^phi, capped at the length bound.

    The grammar is read as an alternating pushdown system and saturated
    backwards: ``trans[a][x]`` maps a multiset of nonterminals to the fewest
    terminals A can produce while consuming the top flag ``x``, leaving every
    nonterminal in the multiset to work on the rest of the flag.  Symbol
    ``F`` stands for the bottom of an empty flag.  Costs above the bound are
    dropped, which keeps the automaton finite.
    """

    def __init__(self, c: _Compiled, n: int, limit: int = 200_000):
        self.c = c
        self.n = n
        K = c.K
        F = len(c.flag_names)
        self.bot = F
        lb = c.static_lb
        trans = [dict() for _ in range(K)]
        self.trans = trans
        self.size = 0
        symbols = range(F + 1)

        def add(a, x, ms, cost):
            if x == F and ms:
                return False
            if cost + sum(lb[s] for s in ms) > n:
                return False
            row = trans[a].setdefault(x, {})
            old = row.get(ms)
            if old is not None and old <= cost:
                return False
            if old is None:
                self.size += 1
                if self.size > limit:
                    raise OverflowError
            row[ms] = cost
            return True

        def read(ms, x):
            out = {(): 0}
            for s in ms:
                row = trans[s].get(x)
                if not row:
                    return {}
                nxt = {}
                for m1, c1 in out.items():
                    for m2, c2 in row.items():
                        cost = c1 + c2
                        if cost > n:
                            continue
                        m = tuple(sorted(m1 + m2))
                        if nxt.get(m, INF) > cost:
                            nxt[m] = cost
                out = nxt
            return out

        copies, pushes = [], []
        for a in range(K):
            for f, opts in c.pops[a].items():
                for _, rhs in opts:
                    nts = tuple(sorted(s for s in rhs if s.__class__ is int))
                    add(a, f, nts, len(rhs) - len(nts))
            for _, rhs in c.copies[a]:
                nts = tuple(sorted(s for s in rhs if s.__class__ is int))
                t = len(rhs) - len(nts)
                if nts:
                    copies.append((a, nts, t))
                else:
                    for x in symbols:
                        add(a, x, (), t)
            for _, b, ids in c.pushes[a]:
                pushes.append((a, b, ids))

        changed = True
        while changed:
            changed = False
            for a, nts, t in copies:
                for x in symbols:
                    for ms, cost in read(nts, x).items():
                        if add(a, x, ms, cost + t):
                            changed = True
            for a, b, ids in pushes:
                reach = {(b,): 0}
                for f in ids:
                    nxt = {}
                    for m1, c1 in reach.items():
                        for m2, c2 in read(m1, f).items():
                            if nxt.get(m2, INF) > c1 + c2:
                                nxt[m2] = c1 + c2
                    reach = nxt
                for m1, c1 in reach.items():
                    for x in symbols:
                        for ms, cost in read(m1, x).items():
                            if add(a, x, ms, c1 + cost):
                                changed = True
        self.memo = {}

    def cost(self, a: int, phi: int) -> float:
        key = phi * self.c.K + a
        v = self.memo.get(key)
        if v is not None:
            return v
        flags = self.c.flags
        if phi:
            row = self.trans[a].get(flags.head[phi], {})
            below = flags.tail[phi]
        else:
            row = self.trans[a].get(self.bot, {})
            below = None
        best = INF
        for ms, c0 in row.items():
            v = c0
            for s in ms:
                v += self.cost(s, below)
                if v >= best:
                    break
            if v < best:
                best = v
        if best > self.n:
            best = INF
        self.memo[key] = best
        return best


class _ReaderCheck:
    """Dead-end detection for nonterminals that only push or never push.

    A push-only nonterminal keeps stacking flags until control passes to a
    nonterminal that reads them.  The readers' walk through the flags that may
    still be pushed is explored once per strongly connected part of the push
    graph; what remains is a question about the known flag below, answered
    exactly by recursion over that flag.
    """

    LOOP = ("loop",)

    def __init__(self, c: _Compiled):
        self.c = c
        K = c.K
        kids = [set() for _ in range(K)]
        linear = [True] * K
        for a in range(K):
            bodies = [rhs for _, rhs in c.copies[a]]
            bodies += [rhs for opts in c.pops[a].values() for _, rhs in opts]
            for rhs in bodies:
                nts = [s for s in rhs if s.__class__ is int]
                kids[a].update(nts)
                if len(nts) > 1:
                    linear[a] = False
            for _, b, _ in c.pushes[a]:
                kids[a].add(b)
        self.linear = linear
        pushes = [bool(c.pushes[a]) for a in range(K)]
        pops = [bool(c.pops[a]) for a in range(K)]
        changed = True
        while changed:
            changed = False
            for a in range(K):
                for b in kids[a]:
                    if pushes[b] and not pushes[a]:
                        pushes[a] = changed = True
                    if pops[b] and not pops[a]:
                        pops[a] = changed = True
        self.push_free = [not x for x in pushes]
        self.flag_free = [not x and not y for x, y in zip(pushes, pops)]
        self.push_only = [bool(c.pushes[a]) and not c.copies[a] and not c.pops[a] for a in range(K)]

        self.edges = []
        self.out_edges = [[] for _ in range(K)]
        self.in_edges = [[] for _ in range(K)]
        for a in range(K):
            if self.push_only[a]:
                for _, b, ids in c.pushes[a]:
                    e = len(self.edges)
                    self.edges.append((a, b, ids))
                    self.out_edges[a].append(e)
                    self.in_edges[b].append(e)
        self.scc = self._components()
        self.exact = {}
        self.alive_cache = {}
        self.scc_info = {}

    def _components(self) -> list:
        c = self.c
        K = c.K
        succ = [[self.edges[e][1] for e in self.out_edges[a] if self.push_only[self.edges[e][1]]]
                for a in range(K)]
        index = [None] * K
        low = [0] * K
        comp = [None] * K
        stack, on = [], [False] * K
        counter = 0
        ncomp = 0
        for root in range(K):
            if not self.push_only[root] or index[root] is not None:
                continue
            work = [(root, 0)]
            while work:
                v, i = work.pop()
                if i == 0:
                    index[v] = low[v] = counter
                    counter += 1
                    stack.append(v)
                    on[v] = True
                if i < len(succ[v]):
                    work.append((v, i + 1))
                    w = succ[v][i]
                    if index[w] is None:
                        work.append((w, 0))
                    elif on[w]:
                        low[v] = min(low[v], index[w])
                    continue
                if low[v] == index[v]:
                    while True:
                        w = stack.pop()
                        on[w] = False
                        comp[w] = ncomp
                        if w == v:
                            break
                    ncomp += 1
                if work:
                    u = work[-1][0]
                    low[u] = min(low[u], low[v])
        return comp

    # -- exact feasibility below a known flag

    def feasible(self, a: int, phi: int) -> bool:
        if self.flag_free[a]:
            return self.c.static_lb[a] < INF
        if not self.push_free[a]:
            return True
        key = (a, phi)
        v = self.exact.get(key)
        if v is not None:
            return v
        self.exact[key] = True  # provisional while on the recursion stack
        c = self.c
        v = False
        for _, rhs in c.copies[a]:
            if all(self.feasible(s, phi) for s in rhs if s.__class__ is int):
                v = True
                break
        if not v and phi:
            below = c.flags.tail[phi]
            for _, rhs in c.pops[a].get(c.flags.head[phi], ()):
                if all(self.feasible(s, below) for s in rhs if s.__class__ is int):
                    v = True
                    break
        self.exact[key] = v
        return v

    # -- the part above the known flag

    def _info(self, s: int):
        info = self.scc_info.get(s, 0)
        if info != 0:
            return info
        c = self.c
        members = {a for a in range(c.K) if self.scc[a] == s}
        loop_flags = set()
        for a in members:
            for e in self.out_edges[a]:
                if self.edges[e][1] in members:
                    loop_flags.update(self.edges[e][2])
        reach = set(members)
        stack = list(members)
        exits = []
        while stack:
            a = stack.pop()
            for e in self.out_edges[a]:
                b = self.edges[e][1]
                if self.push_only[b]:
                    if b not in reach:
                        reach.add(b)
                        stack.append(b)
                else:
                    exits.append(e)
        ctx = (members, frozenset(loop_flags), reach)
        options = []
        always = False
        for e in exits:
            z = self.edges[e][1]
            for opt in self._top_options(z, (e, 0), ctx):
                if opt is None:
                    continue
                if not opt:
                    always = True
                    break
                options.append(opt)
            if always:
                break
        info = None if always else (frozenset(loop_flags), options)
        self.scc_info[s] = info
        return info

    def _advance(self, pos, ctx):
        """Positions reached after reading the flag at pos (None for the loop region)."""
        e, p = pos
        ids = self.edges[e][2]
        if p + 1 < len(ids):
            return [(e, p + 1)]
        return self._boundary(self.edges[e][0], ctx)

    def _boundary(self, y, ctx):
        members, _, reach = ctx
        out = [(e, 0) for e in self.in_edges[y] if self.edges[e][0] in reach]
        if y in members:
            out.append(self.LOOP)
        return out

    def _flag_at(self, pos):
        e, p = pos
        return self.edges[e][2][p]

    def _top_options(self, z, pos, ctx):
        """Conjunctions of clauses for z read at pos; [] means always alive, None dead."""
        c = self.c
        if not self.push_free[z]:
            return [[]]
        if self.linear[z]:
            cl = self._clause(z, pos, ctx)
            return [[] if cl is True else [cl]] if cl is not False else [None]
        out = []
        bodies = [(rhs, [pos]) for _, rhs in c.copies[z]]
        for _, rhs in c.pops[z].get(self._flag_at(pos), ()):
            bodies.append((rhs, self._advance(pos, ctx)))
        for rhs, nexts in bodies:
            for nxt in nexts:
                conj = []
                dead = False
                for s in rhs:
                    if s.__class__ is not int:
                        continue
                    cl = self._clause(s, nxt, ctx) if self.linear[s] else True
                    if cl is False:
                        dead = True
                        break
                    if cl is not True:
                        conj.append(cl)
                if not dead:
                    out.append(conj)
        return out

    def _clause(self, d, pos, ctx):
        """Readers d may hand over to at the known flag: True, False or a frozenset."""
        c = self.c
        loop_flags = ctx[1]
        atoms = set()
        seen = set()
        todo = [(d, pos)]
        while todo:
            state = todo.pop()
            if state in seen:
                continue
            seen.add(state)
            a, where = state
            if self.flag_free[a]:
                if c.static_lb[a] < INF:
                    return True
                continue
            if not self.push_free[a] or not self.linear[a]:
                return True
            moves = [(rhs, [where]) for _, rhs in c.copies[a]]
            if where is self.LOOP:
                atoms.add(a)
                for f in loop_flags:
                    for _, rhs in c.pops[a].get(f, ()):
                        moves.append((rhs, [where]))
            else:
                nexts = self._advance(where, ctx)
                for _, rhs in c.pops[a].get(self._flag_at(where), ()):
                    moves.append((rhs, nexts))
            for rhs, targets in moves:
                nts = [s for s in rhs if s.__class__ is int]
                if not nts:
                    return True
                for t in targets:
                    todo.append((nts[0], t))
        return frozenset(atoms) if atoms else False

    def alive(self, a: int, phi: int) -> bool:
        if not self.push_only[a]:
            return self.feasible(a, phi) if self.push_free[a] else True
        s = self.scc[a]
        info = self._info(s)
        if info is None:
            return True
        loop_flags, options = info
        flags = self.c.flags
        while phi and flags.head[phi] in loop_flags:
            phi = flags.tail[phi]
        key = (s, phi)
        v = self.alive_cache.get(key)
        if v is None:
            v = any(all(any(self.feasible(d, phi) for d in cl) for cl in opt) for opt in options)
            self.alive_cache[key] = v
        return v


def _future_weights(c: _Compiled) -> list:
    """Least total flag weight any completion of each nonterminal still pushes."""
    K = c.K
    w = c.flags._w
    pw = [INF] * K
    changed = True
    while changed:
        changed = False
        for a in range(K):
            best = pw[a]
            bodies = [rhs for _, rhs in c.copies[a]]
            bodies += [rhs for opts in c.pops[a].values() for _, rhs in opts]
            for rhs in bodies:
                v = 0
                for s in rhs:
                    if s.__class__ is int:
                        v += pw[s]
                if v < best:
                    best = v
            for _, b, ids in c.pushes[a]:
                v = pw[b] + sum(w[f] for f in ids)
                if v < best:
                    best = v
            if best < pw[a]:
                pw[a] = best
                changed = True
    return pw


@dataclass
class IgEnumeration:
    sample: LanguageSample
    witnesses: dict  # word -> DerivationWitness
    states: int = 0
    truncated_by: tuple = ()


class _Search:
    def __init__(self, g: IndexedGrammar, n: int, budget: Budget, flag_analysis=None):
        self.c = _Compiled(g)
        self.n = n
        self.budget = budget
        if flag_analysis is None:
            flag_analysis = not self.c.weighted
        self.fab = None
        self.exact = None
        if flag_analysis:
            try:
                self.exact = _MinYield(self.c, n)
            except OverflowError:
                self.fab = _FlagAwareBound(self.c)
        self.readers = _ReaderCheck(self.c)
        self.future = _future_weights(self.c) if self.c.weighted else None
        self.truncated = set()
        self.lb_cache = {}

    # -- helpers

    def count(self, x: int) -> int:
        c = self.c
        a = x % c.K
        phi = x // c.K
        n = c.fixed[a]
        if phi:
            n += len(c.pops[a].get(c.flags.head[phi], ()))
        return n

    def options(self, x: int):
        """(production, replacement tuple) for every applicable production."""
        c = self.c
        K = c.K
        a = x % K
        phi = x // K
        out = []
        for p, rhs in c.copies[a]:
            base = phi * K
            out.append((p, tuple(base + s if s.__class__ is int else s for s in rhs)))
        for p, b, ids in c.pushes[a]:
            psi = phi
            for f in reversed(ids):
                psi = c.flags.push(f, psi)
            out.append((p, (psi * K + b,)))
        if phi:
            opts = c.pops[a].get(c.flags.head[phi])
            if opts:
                base = c.flags.tail[phi] * K
                for p, rhs in opts:
                    out.append((p, tuple(base + s if s.__class__ is int else s for s in rhs)))
        return out

    def lower_bound(self, form) -> float:
        c = self.c
        K = c.K
        terms = 0
        total = 0
        for x in form:
            if x.__class__ is str:
                terms += 1
                continue
            v = self.lb_cache.get(x)
            if v is None:
                a = x % K
                v = c.static_lb[a]
                if self.exact is not None and v < INF:
                    v = max(v, self.exact.cost(a, x // K))
                elif self.fab is not None and v < INF:
                    v = max(v, self.fab.level(x // K)[a])
                if v < INF and not self.readers.alive(a, x // K):
                    v = INF
                self.lb_cache[x] = v
            total += v
        bound = terms + total
        if c.weighted and bound <= self.n:
            seen = set()
            wsum = 0
            flags = c.flags
            future = self.future
            for x in form:
                if x.__class__ is str:
                    continue
                wsum += future[x % K]
                phi = x // K
                while phi and phi not in seen:
                    seen.add(phi)
                    wsum += flags.weight[phi]
                    phi = flags.tail[phi]
            bound = max(bound, wsum)
        return bound

    def within_caps(self, form) -> bool:
        if len(form) > self.budget.max_form_len:
            self.truncated.add("form_len")
            return False
        K = self.c.K
        depth = self.c.flags.depth
        for x in form:
            if x.__class__ is int and depth[x // K] > self.budget.max_flag_depth:
                self.truncated.add("flag_depth")
                return False
        return True

    def settle(self, form: tuple, steps: list):
        """Apply forced moves until a real choice remains.

        Returns (form, steps, position to expand) or None if the form is dead
        or pruned.  A position of -1 means the form is a terminal word.
        """
        c = self.c
        K = c.K
        flags = c.flags
        chain = set()
        while True:
            # skip-runs of flags a nonterminal only pops back into itself
            lst = None
            for pos, x in enumerate(form):
                if x.__class__ is str:
                    continue
                a = x % K
                skips = c.skip[a]
                if skips is None:
                    continue
                phi = x // K
                if not phi or flags.head[phi] not in skips:
                    continue
                if lst is None:
                    lst = list(form)
                while phi and flags.head[phi] in skips:
                    steps.append((skips[flags.head[phi]], pos))
                    phi = flags.tail[phi]
                lst[pos] = phi * K + a
            if lst is not None:
                form = tuple(lst)
            best_pos = -1
            best = None
            terms = 0
            for pos, x in enumerate(form):
                if x.__class__ is str:
                    terms += 1
                    continue
                k = self.count(x)
                if k == 0:
                    return None
                if best is None or k < best or (k == best and k == 1):
                    best, best_pos = k, pos
            if terms > self.n:
                return None
            if best_pos < 0:
                return form, steps, -1
            if best > 1:
                return form, steps, best_pos
            if form in chain:
                return None
            chain.add(form)
            ((p, repl),) = self.options(form[best_pos])
            steps.append((p, best_pos))
            form = form[:best_pos] + repl + form[best_pos + 1:]
            if not self.within_caps(form):
                return None

    def run(self) -> IgEnumeration:
        c = self.c
        g = c.g
        start = c.flags.push(c.flag_id[END], 0) * c.K + c.nt_id[g.start]
        parents = {}
        words = {}
        queue = deque()

        def admit(form, steps, pos, parent):
            if pos < 0:
                word = tuple(form)
                if len(word) <= self.n and word not in words:
                    words[word] = (parent, steps)
                return
            if form in parents:
                return
            if self.lower_bound(form) > self.n:
                return
            parents[form] = (parent, steps)
            queue.append((form, pos))

        settled = self.settle((start,), [])
        if settled is not None:
            admit(*settled, None)
        exhausted = True
        while queue:
            if len(parents) > self.budget.max_states:
                self.truncated.add("states")
                exhausted = False
                break
            form, pos = queue.popleft()
            for p, repl in self.options(form[pos]):
                child = form[:pos] + repl + form[pos + 1:]
                if not self.within_caps(child):
                    continue
                settled = self.settle(child, [(p, pos)])
                if settled is not None:
                    admit(*settled, form)

        witnesses = {}
        for word, (parent, steps) in words.items():
            chunks = [steps]
            while parent is not None:
                parent, s = parents[parent]
                chunks.append(s)
            witnesses[word] = DerivationWitness(tuple(st for ch in reversed(chunks) for st in ch))
        exhaustive = exhausted and not self.truncated
        return IgEnumeration(
            LanguageSample(frozenset(words), self.n, exhaustive),
            witnesses,
            states=len(parents),
            truncated_by=tuple(sorted(self.truncated)),
        )


def enumerate_ig_full(g: IndexedGrammar, n: int, budget: Budget | None = None,
                      flag_analysis: bool | None = None) -> IgEnumeration:
    """Enumerate with witnesses and search statistics."""
    return _Search(g, n, budget or Budget(), flag_analysis).run()


def enumerate_ig(g: IndexedGrammar, n: int, budget: Budget | None = None) -> tuple:
    """Words of L(g) up to length n with a replayable witness for each.

    Returns ``(sample, witnesses)``.  The sample is exhaustive unless a budget
    limit cut the search short.
    """
    res = enumerate_ig_full(g, n, budget)
    return res.sample, res.witnesses


def enumerate_language(g, n: int, budget: Budget | None = None) -> LanguageSample:
    """Dispatch on the object type; indexed grammars drop their witnesses."""
    if isinstance(g, ContextFreeGrammar):
        return enumerate_cfg(g, n)
    if isinstance(g, Nfa):
        return enumerate_nfa(g, n)
    if isinstance(g, IndexedGrammar):
        return enumerate_ig(g, n, budget)[0]
    raise TypeError(f"cannot enumerate {type(g).__name__}")
