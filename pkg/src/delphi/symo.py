"""The synthesis loop: synthesize from the store, verify through the
oracle-aware satisfiability engine, refine the store from counterexample
points and constraint-generating oracles.

Routing: assumptions (equalities on oracle symbols) accumulate in A
across iterations; constraints generated by defining interfaces during
verification flow into the store S; the free, constraint-only interfaces
are invoked in a second oracle phase, with inputs inferred by matching
their generator patterns against ground applications of the targets in
the instantiated specification.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .backend import BackendConfig, Verdict
from .errors import (
    BudgetExhausted, InternalProgressFailure, IterationLimit, RankMismatch,
    UnknownTemplate, UnsupportedFragment,
)
from .fold import partial_evaluate
from .grammar import SynthTarget
from .oracles import AssumptionSet, OracleInterface, OracleRuntime, instantiate_generators
from .parser import Script
from .printer import print_define_fun, print_term, print_value
from .report import RunReport
from .smto import SmtoProblem, SmtoResult, smto_solve
from .synthesis import StoreContext, SynthConfig, SynthQuery, synthesize
from .terms import (
    BOOL, App, Lambda, Sort, SymKind, Term, Value, Var, and_, bool_val, eq,
    fn_sort, not_, oracle_apps, subterms, substitute, symbol_names,
)


@dataclass
class SymoProblem:
    targets: tuple            # tuple[SynthTarget, ...]
    oracle_symbols: dict      # name -> (param sorts, ret sort)
    spec_vars: tuple          # universally quantified 0-ary witnesses
    phi: Term                 # quantifier-free specification body
    interfaces: dict          # oracle symbol -> defining interface
    free_interfaces: tuple = ()

    def __post_init__(self):
        if self.phi.sort != BOOL:
            raise UnsupportedFragment("specification body must be Bool")
        target_names = {t.name for t in self.targets}
        if target_names & {v.name for v in self.spec_vars}:
            raise UnsupportedFragment("target and specification variable names collide")
        known = target_names | set(self.oracle_symbols)
        stray = symbol_names(self.phi) - known
        if stray:
            raise UnsupportedFragment(
                f"specification applies undeclared symbols {sorted(stray)}")
        for iface in self.free_interfaces:
            if iface.assumption_gen is not None:
                raise UnsupportedFragment(
                    f"free interface {iface.name} generates assumptions; only "
                    "constraint-generating free interfaces are supported here")
            if iface.constraint_gen is None:
                raise UnsupportedFragment(
                    f"free interface {iface.name} generates nothing")


def symo_problem_from_script(script: Script) -> SymoProblem:
    if script.directive != "check-synth":
        raise UnsupportedFragment("not a synthesis script (missing check-synth)")
    target_names = {t.name for t in script.synth_targets}
    for name in script.ordinary:
        if name not in target_names:
            raise UnsupportedFragment(
                f"declared symbol {name} is neither a synthesis target nor an oracle")
    return SymoProblem(
        targets=tuple(script.synth_targets),
        oracle_symbols=dict(script.oracle_symbols),
        spec_vars=tuple(script.universal_vars),
        phi=and_(*script.constraints) if script.constraints else bool_val(True),
        interfaces=script.definitional_interfaces(),
        free_interfaces=tuple(script.free_interfaces()))


class Outcome(Enum):
    SOLUTION = "solution"
    NO_SOLUTION = "no-solution"
    UNKNOWN = "unknown"


@dataclass
class SymoResult:
    status: Outcome
    candidate: Optional[dict] = None  # target name -> Lambda
    reason: Optional[str] = None
    report: RunReport = field(default_factory=RunReport)
    iterations: int = 0
    assumptions: Optional[AssumptionSet] = None
    store: tuple = ()


def _target_ranks(problem: SymoProblem) -> dict:
    return {t.name: (tuple(p.sort for p in t.params), t.ret) for t in problem.targets}


def verify_candidate(problem: SymoProblem, candidate: dict,
                     assumptions: Optional[AssumptionSet], backend_cfg: BackendConfig,
                     runtime: OracleRuntime, beta_sink=None,
                     report: Optional[RunReport] = None,
                     max_iterations: Optional[int] = None) -> SmtoResult:
    """Check a candidate: decide (not phi){targets -> candidate} with the
    specification variables lifted to 0-ary symbols, seeded with the
    accumulated assumptions. UNSAT certifies the candidate."""
    binding = dict(candidate)
    for v in problem.spec_vars:
        binding[v.name] = App(v.name, SymKind.ORDINARY, (), v.sort)
    rho = partial_evaluate(substitute(not_(problem.phi), binding))
    sub = SmtoProblem(
        ordinary={v.name: ((), v.sort) for v in problem.spec_vars},
        oracle_symbols=dict(problem.oracle_symbols),
        rho=rho,
        interfaces=problem.interfaces)
    return smto_solve(sub, backend_cfg, runtime, seed=assumptions,
                      max_iterations=max_iterations, report=report,
                      beta_sink=beta_sink)


def infer_oracle_inputs(free_interfaces, phi_inst: Term, candidate: dict,
                        targets, already_called: set) -> list:
    """Call plans for the free interfaces this iteration.

    First-order query domains are matched syntactically: a generator
    containing an application of a target to exactly the query variables
    fires once per ground application of that target in the instantiated
    specification. A query domain that is the candidate itself fires once
    with the serialized candidate. Empty query domains fire once per run.
    All plans deduplicate against previously issued calls.
    """
    plans = []
    by_name = {t.name: t for t in targets}

    def propose(iface, inputs):
        key = (iface.name, tuple(inputs))
        if key not in already_called:
            already_called.add(key)
            plans.append((iface, tuple(inputs)))

    for iface in free_interfaces:
        q = iface.query_domain
        if len(q) == 0:
            propose(iface, ())
            continue
        if len(q) == 1 and q[0].sort.kind == "Fn":
            for t in targets:
                if fn_sort((p.sort for p in t.params), t.ret) == q[0].sort:
                    lam = candidate[t.name]
                    propose(iface, (Value(q[0].sort, lam),))
                    break
            continue
        pattern = _query_pattern(iface, by_name)
        if pattern is None:
            continue
        fname, var_order = pattern
        qnames = [v.name for v in q]
        for s in subterms(phi_inst):
            if (isinstance(s, App) and s.name == fname
                    and len(s.args) == len(var_order)
                    and all(isinstance(a, Value) for a in s.args)):
                bound = dict(zip(var_order, s.args))
                propose(iface, tuple(bound[n] for n in qnames))
    return plans


def _query_pattern(iface: OracleInterface, targets_by_name: dict):
    """An application of a target inside the constraint generator whose
    arguments are exactly the query variables: (target name, arg order)."""
    if iface.constraint_gen is None:
        return None
    qnames = {v.name for v in iface.query_domain}
    for s in subterms(iface.constraint_gen):
        if isinstance(s, App) and s.name in targets_by_name and s.args:
            names = [a.name if isinstance(a, Var) else None for a in s.args]
            if None not in names and set(names) == qnames and len(names) == len(qnames):
                return s.name, names
    return None


def symo_solve(problem: SymoProblem, backend_cfg: BackendConfig,
               runtime: OracleRuntime, synth_cfg: Optional[SynthConfig] = None,
               max_iterations: Optional[int] = None,
               report: Optional[RunReport] = None) -> SymoResult:
    report = report if report is not None else RunReport()
    synth_cfg = synth_cfg or SynthConfig()
    assumptions = AssumptionSet()
    store: list = []
    store_seen: set = set()
    called: set = set()
    oracle_decls = [(n, tuple(p), r) for n, (p, r) in problem.oracle_symbols.items()]

    def store_add(term: Term) -> bool:
        if term == bool_val(True) or term in store_seen:
            return False
        store_seen.add(term)
        store.append(term)
        report.record("store-add", conjunct=print_term(term))
        return True

    iteration = 0
    while True:
        iteration += 1
        if max_iterations is not None and iteration > max_iterations:
            raise IterationLimit(f"no outcome after {max_iterations} iterations")
        context = StoreContext(assumptions, backend_cfg, tuple(oracle_decls))
        try:
            candidate = synthesize(
                SynthQuery(problem.targets, tuple(store)), synth_cfg, context)
        except BudgetExhausted as e:
            report.record("symo-final", outcome="unknown", reason=str(e))
            return SymoResult(Outcome.UNKNOWN, reason=str(e), report=report,
                              iterations=iteration, assumptions=assumptions,
                              store=tuple(store))
        if candidate is None:
            report.record("symo-final", outcome="no-solution", iterations=iteration)
            return SymoResult(Outcome.NO_SOLUTION, report=report, iterations=iteration,
                              assumptions=assumptions, store=tuple(store))
        report.record(
            "symo-iteration", index=iteration,
            candidate=[print_define_fun(n, lam) for n, lam in sorted(candidate.items())],
            store=tuple(print_term(c) for c in store),
            store_size=len(store), assumption_size=len(assumptions))
        pending_beta: list = []
        result = verify_candidate(problem, candidate, assumptions, backend_cfg,
                                  runtime, beta_sink=pending_beta.append, report=report)
        if result.status is Verdict.UNSAT:
            report.record("symo-final", outcome="solution", iterations=iteration)
            return SymoResult(Outcome.SOLUTION, candidate=candidate, report=report,
                              iterations=iteration, assumptions=result.assumptions,
                              store=tuple(store))
        if result.status is Verdict.UNKNOWN:
            report.record("symo-final", outcome="unknown", reason=result.reason)
            return SymoResult(Outcome.UNKNOWN, reason=result.reason, report=report,
                              iterations=iteration, assumptions=result.assumptions,
                              store=tuple(store))
        assumptions = result.assumptions
        progressed = False
        counterexample = {v.name: result.model[v.name] for v in problem.spec_vars}
        if problem.spec_vars:
            report.record("counterexample", point={
                k: print_term(v) if not isinstance(v, Value) else print_value(v)
                for k, v in counterexample.items()})
            phi_inst = partial_evaluate(substitute(problem.phi, counterexample))
            progressed |= store_add(phi_inst)
        else:
            # no refinement point exists; the instantiated spec is phi itself.
            # Keep it out of the store when it applies oracles: those
            # applications are on candidates, and the generated constraints
            # already summarize their answers (the classic-loop store shape).
            phi_inst = partial_evaluate(problem.phi)
            if not any(True for _ in oracle_apps(phi_inst)):
                progressed |= store_add(phi_inst)
        for beta in pending_beta:
            progressed |= store_add(beta)
        for iface, inputs in infer_oracle_inputs(
                problem.free_interfaces, phi_inst, candidate, problem.targets, called):
            outputs = runtime.call(iface, inputs)
            report.record("phase2-call", interface=iface.name,
                          inputs=[print_value(v) for v in inputs],
                          outputs=[print_value(v) for v in outputs])
            _, beta = instantiate_generators(iface, inputs, outputs)
            if beta is not None:
                progressed |= store_add(beta)
        if not progressed:
            raise InternalProgressFailure(
                "verification refuted the candidate but nothing new reached "
                "the store; the loop cannot make progress")


# ---------------------------------------------------------------------------
# the standard interface catalog

TEMPLATES = ("membership", "io", "neg_witness", "pos_witness", "implication",
             "counterexample", "distinguishing_input", "correctness",
             "correctness_with_cex")


def standard_interface(template: str, target: SynthTarget, executable: str,
                       phi: Optional[Term] = None, spec_vars: tuple = (),
                       theta_name: Optional[str] = None) -> OracleInterface:
    """Instantiate one of the catalog interfaces for an n-ary target."""
    if template not in TEMPLATES:
        raise UnknownTemplate(f"unknown interface template {template}")
    n = len(target.params)
    psorts = [p.sort for p in target.params]
    cand_sort = fn_sort(psorts, target.ret)

    def f_on(args):
        return App(target.name, SymKind.ORDINARY, tuple(args), target.ret)

    def mk(name, q, r, alpha=None, beta=None, defines=None, alpha_index=None):
        return OracleInterface(
            name=name, query_domain=tuple(q), response_codomain=tuple(r),
            assumption_gen=alpha, constraint_gen=beta, executable=executable,
            kind="definitional" if defines else "free",
            defines_symbol=defines, alpha_value_index=alpha_index)

    if template == "membership":
        ys = [Var(f"y{i + 1}", s) for i, s in enumerate(psorts)]
        y = Var("y", target.ret)
        zb = Var("zb", BOOL)
        return mk(f"mem_{target.name}", ys + [y], [zb],
                  beta=eq(zb, eq(f_on(ys), y)))
    if template == "io":
        ys = [Var(f"y{i + 1}", s) for i, s in enumerate(psorts)]
        y = Var("y", target.ret)
        zb = Var("zb", BOOL)
        return mk(f"io_{target.name}", ys + [y], [zb],
                  beta=eq(zb, not_(eq(f_on(ys), y))))
    if template == "neg_witness":
        zs = [Var(f"z{i + 1}", s) for i, s in enumerate(psorts)]
        z = Var("z", target.ret)
        return mk(f"neg_{target.name}", [], zs + [z],
                  beta=not_(eq(f_on(zs), z)))
    if template == "pos_witness":
        zs = [Var(f"z{i + 1}", s) for i, s in enumerate(psorts)]
        z = Var("z", target.ret)
        return mk(f"pos_{target.name}", [], zs + [z],
                  beta=eq(f_on(zs), z))
    if template == "implication":
        if target.ret != BOOL:
            raise RankMismatch("implication queries need a Bool-valued target")
        y = Var("y", cand_sort)
        zs = [Var(f"z{i + 1}", s) for i, s in enumerate(psorts)]
        zps = [Var(f"zp{i + 1}", s) for i, s in enumerate(psorts)]
        return mk(f"imp_{target.name}", [y], zs + zps,
                  beta=App("=>", SymKind.THEORY, (f_on(zs), f_on(zps)), BOOL))
    if template == "counterexample":
        if phi is None or len(spec_vars) == 0:
            raise RankMismatch("counterexample queries need the specification and its variables")
        y = Var("y", cand_sort)
        zs = [Var(f"z{i + 1}", v.sort) for i, v in enumerate(spec_vars)]
        inst = substitute(phi, {v.name: z for v, z in zip(spec_vars, zs)})
        return mk(f"cex_{target.name}", [y], zs, beta=inst)
    if template == "distinguishing_input":
        y = Var("y", cand_sort)
        zs = [Var(f"z{i + 1}", s) for i, s in enumerate(psorts)]
        z = Var("z", target.ret)
        return mk(f"di_{target.name}", [y], zs + [z],
                  beta=eq(f_on(zs), z))
    theta = theta_name or f"theta_{target.name}"
    y = Var("y", cand_sort)
    zb = Var("zb", BOOL)
    alpha = eq(App(theta, SymKind.ORACLE, (y,), BOOL), zb)
    if template == "correctness":
        return mk(theta, [y], [zb], alpha=alpha,
                  defines=theta, alpha_index=0)
    # correctness_with_cex
    if phi is None or len(spec_vars) == 0:
        raise RankMismatch("correctness-with-counterexample needs the specification "
                           "and its variables")
    zs = [Var(f"z{i + 1}", v.sort) for i, v in enumerate(spec_vars)]
    inst = substitute(phi, {v.name: z for v, z in zip(spec_vars, zs)})
    return mk(theta, [y], [zb] + zs, alpha=alpha, beta=inst,
              defines=theta, alpha_index=0)


def theta_rank(template_interface: OracleInterface) -> tuple:
    """Declaration rank of the oracle symbol a correctness-style template
    defines: ((candidate sort,), Bool)."""
    return (tuple(v.sort for v in template_interface.query_domain), BOOL)
