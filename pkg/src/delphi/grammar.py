"""Grammars for synthesis targets.

A production is a term in which a Var named like a nonterminal marks a
hole. The default grammar (used when a synth-fun carries none) is a
depth-stratified rendering of the theory signature over the target's
sorts, depth at most 6, with integer leaves drawn from the constraint
store's constants plus {0, 1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import SortError
from .terms import (
    BOOL, INT, Sort, Term, Value, Var, bool_val, bv_val, int_val, subterms, theory_app,
)

DEFAULT_DEPTH = 6


@dataclass(frozen=True)
class Grammar:
    nonterminals: tuple  # tuple[(name, Sort), ...]; first entry is the start symbol
    rules: dict  # name -> tuple[Term, ...]

    def __post_init__(self):
        names = {n for n, _ in self.nonterminals}
        sorts = dict(self.nonterminals)
        for name, prods in self.rules.items():
            if name not in names:
                raise SortError(f"rules for unknown nonterminal {name}")
            for p in prods:
                if p.sort != sorts[name]:
                    raise SortError(f"production {p!r} does not have sort of {name}")

    @property
    def start(self) -> str:
        return self.nonterminals[0][0]

    def sort_of(self, name: str) -> Sort:
        return dict(self.nonterminals)[name]

    def holes(self, production: Term):
        """Nonterminal occurrences in a production, leftmost first."""
        names = {n for n, _ in self.nonterminals}
        out = []

        def walk(t, pos):
            if isinstance(t, Var) and t.name in names:
                out.append((t.name, pos))
                return
            from .terms import children
            for i, c in enumerate(children(t)):
                walk(c, pos + (i,))

        walk(production, ())
        return out

    def is_recursive(self) -> bool:
        """True when some nonterminal can reach itself (infinite language)."""
        deps = {n: set() for n, _ in self.nonterminals}
        for name, prods in self.rules.items():
            for p in prods:
                deps[name] |= {h for h, _ in self.holes(p)}
        seen_stack: set = set()
        done: set = set()

        def cyclic(n):
            if n in done:
                return False
            if n in seen_stack:
                return True
            seen_stack.add(n)
            hit = any(cyclic(m) for m in deps[n])
            seen_stack.discard(n)
            done.add(n)
            return hit

        return any(cyclic(n) for n, _ in self.nonterminals)


def literal_pool(store_terms, sort: Sort) -> list:
    """Distinct literals of the given sort occurring in the store, plus 0/1."""
    lits = []
    if sort == INT:
        lits = [int_val(0), int_val(1)]
    elif sort.kind == "BitVec":
        lits = [bv_val(sort.width, 0), bv_val(sort.width, 1)]
    elif sort == BOOL:
        lits = [bool_val(True), bool_val(False)]
    for t in store_terms:
        for s in subterms(t):
            if isinstance(s, Value) and s.sort == sort and s not in lits:
                lits.append(s)
    return lits


_INT_OPS = [("+", 2), ("-", 2), ("*", 2)]
_BV_OPS = [("bvadd", 2), ("bvsub", 2), ("bvand", 2), ("bvor", 2), ("bvxor", 2), ("bvnot", 1)]
_CMP_OPS = {"Int": ["<=", "<", "="], "BitVec": ["bvule", "bvult", "="]}


def default_grammar(params, ret: Sort, store_terms=(), depth: int = DEFAULT_DEPTH) -> Grammar:
    """Depth-stratified grammar over the theory signature of the involved
    sorts. Acyclic by construction, so its language is finite and
    exhaustion is a sound 'no solution'."""
    data_sorts = []
    for s in [p.sort for p in params] + [ret]:
        if s.kind in ("Int", "BitVec") and s not in data_sorts:
            data_sorts.append(s)

    def nt(sort, d):
        tag = sort.kind if sort.kind != "BitVec" else f"BV{sort.width}"
        return f"G{tag}_{d}"

    nonterminals = []
    rules = {}
    for d in range(depth + 1):
        for s in data_sorts:
            name = nt(s, d)
            leaves = [p for p in params if p.sort == s] + literal_pool(store_terms, s)
            prods = list(leaves)
            if d > 0:
                sub = Var(nt(s, d - 1), s)
                ops = _INT_OPS if s == INT else _BV_OPS
                for op, arity in ops:
                    prods.append(theory_app(op, (sub,) * arity))
                prods.append(theory_app("ite", (Var(nt(BOOL, d - 1), BOOL), sub, sub)))
            nonterminals.append((name, s))
            rules[name] = tuple(dict.fromkeys(prods))
        name = nt(BOOL, d)
        prods = [p for p in params if p.sort == BOOL] + [bool_val(True), bool_val(False)]
        if d > 0:
            for s in data_sorts:
                sub = Var(nt(s, d - 1), s)
                for op in _CMP_OPS[s.kind]:
                    prods.append(theory_app(op, (sub, sub)))
            b = Var(nt(BOOL, d - 1), BOOL)
            prods += [theory_app("and", (b, b)), theory_app("or", (b, b)),
                      theory_app("not", (b,))]
        nonterminals.append((name, BOOL))
        rules[name] = tuple(dict.fromkeys(prods))

    start_sort = ret
    start = nt(ret, depth) if (ret in data_sorts or ret == BOOL) else None
    if start is None:
        raise SortError(f"no default grammar for return sort {ret!r}")
    ordered = [(start, start_sort)] + [x for x in nonterminals if x[0] != start]
    return Grammar(tuple(ordered), rules)


@dataclass(frozen=True)
class SynthTarget:
    name: str
    params: tuple  # tuple[Var, ...]
    ret: Sort
    grammar: Optional[Grammar] = None
