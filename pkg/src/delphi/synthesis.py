"""The synthesis half of the loop: find candidate functions satisfying a
ground constraint store.

Builtin mode enumerates grammar terms in size-lexicographic order (ties
broken by production order) and returns the first candidate under which
every store conjunct folds to true. External mode shells out to a
SyGuS-IF solver. `None` means the (finite) language is exhausted; a
budget stop on an infinite language raises BudgetExhausted instead.
"""

from __future__ import annotations

import itertools
import shlex
import subprocess
from dataclasses import dataclass
from typing import Optional

from .backend import BackendConfig, Verdict, check_sat
from .errors import BudgetExhausted, EvalError, ExternalSolverError
from .fold import find_oracle_application, partial_evaluate
from .grammar import Grammar, SynthTarget, default_grammar
from .oracles import AssumptionSet
from .parser import Script, _Ctx, parse_term, parse_sort, _parse_sorted_vars
from .printer import print_sort, print_term
from .sexpr import Atom, SList, read_all
from .terms import (
    FALSE, TRUE, Lambda, Term, Value, and_, replace_at, subterms, substitute,
)


@dataclass
class SynthQuery:
    targets: tuple  # tuple[SynthTarget, ...]
    store: tuple    # tuple[Term, ...], conjunction, only grows


@dataclass
class SynthConfig:
    mode: str = "builtin"  # "builtin" | "external"
    command: Optional[str] = None
    max_size: int = 24     # total candidate size budget (builtin)
    timeout: Optional[float] = None


@dataclass
class StoreContext:
    """Shared state for deciding conjuncts that still apply oracle symbols:
    first the assumption memo, then a ground backend query."""

    assumptions: AssumptionSet
    backend_cfg: Optional[BackendConfig] = None
    declarations: tuple = ()


def term_size(t: Term) -> int:
    return sum(1 for _ in subterms(t))


class GrammarEnumerator:
    """Size-indexed dynamic programming over one grammar's productions."""

    def __init__(self, grammar: Grammar):
        self.grammar = grammar
        self._cache: dict = {}
        self._prods = {}
        for name, prods in grammar.rules.items():
            self._prods[name] = [(p, grammar.holes(p), term_size(p)) for p in prods]

    def terms(self, nt: str, size: int) -> tuple:
        key = (nt, size)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        out, seen = [], set()
        for prod, holes, psize in self._prods[nt]:
            base = psize - len(holes)
            if not holes:
                if psize == size and prod not in seen:
                    seen.add(prod)
                    out.append(prod)
                continue
            budget = size - base
            if budget < len(holes):
                continue
            for split in _compositions(budget, len(holes)):
                pools = [self.terms(h_nt, n) for (h_nt, _), n in zip(holes, split)]
                if any(not pool for pool in pools):
                    continue
                for choice in itertools.product(*pools):
                    t = prod
                    for (_, pos), sub in zip(holes, choice):
                        t = replace_at(t, pos, sub)
                    if t not in seen:
                        seen.add(t)
                        out.append(t)
        result = tuple(out)
        self._cache[key] = result
        return result

    def max_term_size(self) -> Optional[int]:
        """Largest derivable term size, or None when the language is infinite."""
        if self.grammar.is_recursive():
            return None
        memo: dict = {}

        def biggest(nt):
            if nt in memo:
                return memo[nt]
            best = 0
            for prod, holes, psize in self._prods[nt]:
                base = psize - len(holes)
                best = max(best, base + sum(biggest(h) for h, _ in holes))
            memo[nt] = best
            return best

        return biggest(self.grammar.start)


def _compositions(total: int, k: int):
    """All ways to write total as k positive integers, in order."""
    if k == 1:
        yield (total,)
        return
    for first in range(1, total - k + 2):
        for rest in _compositions(total - first, k - 1):
            yield (first,) + rest


def check_candidate_against_store(candidate: dict, store, context: Optional[StoreContext] = None) -> bool:
    """True iff every conjunct holds under the candidate. Conjuncts are
    ground after substitution; residual oracle applications resolve
    through the assumption memo, then fall back to a ground backend query
    conjoined with the current assumptions."""
    binding = {name: lam for name, lam in candidate.items()}
    for conj in store:
        g = partial_evaluate(substitute(conj, binding))
        while context is not None:
            app = find_oracle_application(g)
            if app is None:
                break
            d = context.assumptions.lookup(app.name, app.inputs)
            if d is None:
                break
            g = partial_evaluate(replace_at(g, app.position, d))
        if g == TRUE:
            continue
        if g == FALSE:
            return False
        if context is None or context.backend_cfg is None:
            raise EvalError(f"conjunct did not fold to a value: {print_term(g)}")
        formula = and_(g, *context.assumptions.to_terms())
        verdict, _ = check_sat(context.backend_cfg, context.declarations, formula)
        if verdict is not Verdict.SAT:
            return False
    return True


def synthesize(query: SynthQuery, cfg: Optional[SynthConfig] = None,
               context: Optional[StoreContext] = None) -> Optional[dict]:
    """First candidate tuple (name -> Lambda) satisfying the store, or None
    when the finite language holds no solution."""
    cfg = cfg or SynthConfig()
    if cfg.mode == "external":
        return _synthesize_external(query, cfg)
    enums, finite_max = [], 0
    for target in query.targets:
        grammar = target.grammar or default_grammar(
            target.params, target.ret, query.store)
        enums.append(GrammarEnumerator(grammar))
    maxes = [e.max_term_size() for e in enums]
    complete_bound = None
    if all(m is not None for m in maxes):
        complete_bound = sum(maxes)
    k = len(query.targets)
    top = cfg.max_size if complete_bound is None else min(cfg.max_size, complete_bound)
    for total in range(k, top + 1):
        for split in _compositions(total, k):
            pools = [e.terms(e.grammar.start, n) for e, n in zip(enums, split)]
            if any(not pool for pool in pools):
                continue
            for bodies in itertools.product(*pools):
                candidate = {
                    t.name: Lambda(t.params, body)
                    for t, body in zip(query.targets, bodies)}
                if check_candidate_against_store(candidate, query.store, context):
                    return candidate
    if complete_bound is not None and top == complete_bound:
        return None
    raise BudgetExhausted(
        f"no candidate up to size {top}; the grammar language is not exhausted")


# ---------------------------------------------------------------------------
# external SyGuS-IF solver

def emit_sygus(query: SynthQuery) -> str:
    lines = ["(set-logic ALL)"]
    for t in query.targets:
        params = " ".join(f"({p.name} {print_sort(p.sort)})" for p in t.params)
        head = f"(synth-fun {t.name} ({params}) {print_sort(t.ret)}"
        if t.grammar is None:
            lines.append(head + ")")
        else:
            nts = " ".join(f"({n} {print_sort(s)})" for n, s in t.grammar.nonterminals)
            groups = []
            for n, s in t.grammar.nonterminals:
                prods = " ".join(print_term(p) for p in t.grammar.rules[n])
                groups.append(f"({n} {print_sort(s)} ({prods}))")
            lines.append(f"{head}\n  ({nts})\n  ({' '.join(groups)}))")
    for conj in query.store:
        lines.append(f"(constraint {print_term(conj)})")
    lines.append("(check-synth)")
    return "\n".join(lines) + "\n"


def _synthesize_external(query: SynthQuery, cfg: SynthConfig) -> Optional[dict]:
    if not cfg.command:
        raise ExternalSolverError("external mode needs a synthesis solver command")
    text = emit_sygus(query)
    try:
        proc = subprocess.run(shlex.split(cfg.command), input=text,
                              capture_output=True, text=True, timeout=cfg.timeout)
    except subprocess.TimeoutExpired:
        raise ExternalSolverError(f"synthesis solver exceeded {cfg.timeout}s")
    except OSError as e:
        raise ExternalSolverError(f"cannot run synthesis solver: {e}")
    out = proc.stdout.strip()
    if out.startswith(("infeasible", "unsat", "no solution")):
        return None
    if proc.returncode != 0:
        raise ExternalSolverError(f"synthesis solver exited {proc.returncode}: {proc.stderr}")
    return parse_sygus_response(out, query.targets)


def parse_sygus_response(text: str, targets) -> dict:
    try:
        nodes = read_all(text)
    except Exception as e:
        raise ExternalSolverError(f"cannot read solver response: {e}")
    defs = []
    for node in nodes:
        if isinstance(node, SList):
            if node.items and isinstance(node[0], Atom) and node[0].text == "define-fun":
                defs.append(node)
            else:
                defs.extend(i for i in node.items
                            if isinstance(i, SList) and len(i) == 5
                            and isinstance(i[0], Atom) and i[0].text == "define-fun")
    by_name = {t.name: t for t in targets}
    out = {}
    script = Script()
    for d in defs:
        if len(d) != 5 or not isinstance(d[1], Atom) or d[1].text not in by_name:
            continue
        target = by_name[d[1].text]
        params = _parse_sorted_vars(d[2], script)
        ret = parse_sort(d[3], script)
        if ret != target.ret or tuple(p.sort for p in params) != tuple(p.sort for p in target.params):
            raise ExternalSolverError(f"solution for {target.name} does not match its rank")
        ctx = _Ctx(script)
        ctx.push(params)
        body = parse_term(d[4], ctx)
        out[target.name] = Lambda(params, body)
    missing = set(by_name) - set(out)
    if missing:
        raise ExternalSolverError(f"solver response lacks definitions for {sorted(missing)}")
    return out
