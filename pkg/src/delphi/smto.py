"""Deciding satisfiability when formulas apply oracle function symbols.

The solving loop alternates backend checks of rho /\ A with the oracle
consistency checker, which grounds the backend model's oracle
applications through real calls until the formula folds to true (accept)
or to anything else (refute, with A grown by at least one new equality).
Supported inputs are definitional: every oracle symbol has exactly one
defining, functional interface.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .backend import BackendConfig, Verdict, check_sat, default_value, model_binding
from .errors import InternalProgressFailure, IterationLimit, UnsupportedFragment
from .fold import find_oracle_application, partial_evaluate
from .oracles import AssumptionSet, OracleRuntime, instantiate_generators
from .parser import Script
from .printer import print_term, print_value
from .report import RunReport
from .terms import TRUE, Term, and_, replace_at, substitute, symbol_names


@dataclass
class SmtoProblem:
    ordinary: dict        # name -> (param sorts, ret sort)
    oracle_symbols: dict  # name -> (param sorts, ret sort)
    rho: Term
    interfaces: dict      # oracle symbol -> defining OracleInterface

    def __post_init__(self):
        free = symbol_names(self.rho)
        known = set(self.ordinary) | set(self.oracle_symbols)
        if not free <= known:
            raise UnsupportedFragment(
                f"formula applies undeclared symbols {sorted(free - known)}")
        for theta in self.oracle_symbols:
            iface = self.interfaces.get(theta)
            if iface is None or iface.kind != "definitional":
                raise UnsupportedFragment(
                    "not in the definitional fragment: oracle symbol "
                    f"{theta} needs exactly one interface generating only "
                    "equalities theta(y*) ~ z backed by a functional oracle")

    def declarations(self):
        decls = [(n, tuple(p), r) for n, (p, r) in self.ordinary.items()]
        decls += [(n, tuple(p), r) for n, (p, r) in self.oracle_symbols.items()]
        return decls


def smto_problem_from_script(script: Script) -> SmtoProblem:
    if script.directive != "check-sat":
        raise UnsupportedFragment("not a satisfiability script (missing check-sat)")
    if script.free_interfaces():
        raise UnsupportedFragment(
            "not in the definitional fragment: free oracle interfaces "
            "(oracle-assumption/oracle-constraint without a defining shape) "
            "are only supported for synthesis")
    return SmtoProblem(
        ordinary=dict(script.ordinary),
        oracle_symbols=dict(script.oracle_symbols),
        rho=and_(*script.assertions),
        interfaces=script.definitional_interfaces())


@dataclass
class SmtoResult:
    status: Verdict
    assumptions: AssumptionSet
    model: Optional[dict] = None  # f-symbol name -> Value | Lambda, restricted
    reason: Optional[str] = None
    report: RunReport = field(default_factory=RunReport)
    iterations: int = 0


def smto_solve(problem: SmtoProblem, backend_cfg: BackendConfig,
               runtime: OracleRuntime, seed: Optional[AssumptionSet] = None,
               max_iterations: Optional[int] = None,
               report: Optional[RunReport] = None,
               beta_sink: Optional[Callable] = None) -> SmtoResult:
    report = report if report is not None else RunReport()
    assumptions = seed.copy() if seed is not None else AssumptionSet()
    decls = problem.declarations()
    iteration = 0
    while True:
        iteration += 1
        if max_iterations is not None and iteration > max_iterations:
            raise IterationLimit(f"no verdict after {max_iterations} iterations")
        formula = and_(problem.rho, *assumptions.to_terms())
        verdict, model = check_sat(backend_cfg, decls, formula)
        report.record("smto-iteration", index=iteration, backend=verdict.value)
        if verdict is Verdict.UNSAT:
            report.record("smto-final", verdict="unsat", iterations=iteration,
                          assumptions=len(assumptions))
            return SmtoResult(Verdict.UNSAT, assumptions,
                              report=report, iterations=iteration)
        if verdict is Verdict.UNKNOWN:
            report.record("smto-final", verdict="unknown", iterations=iteration,
                          assumptions=len(assumptions))
            return SmtoResult(Verdict.UNKNOWN, assumptions, reason="backend returned unknown",
                              report=report, iterations=iteration)
        size_before = len(assumptions)
        ok = consistency_check(problem, model, assumptions, runtime,
                               beta_sink=beta_sink, report=report)
        if ok:
            restricted = _restrict(model, problem.ordinary, report)
            report.record("smto-final", verdict="sat", iterations=iteration,
                          assumptions=len(assumptions))
            return SmtoResult(Verdict.SAT, assumptions, model=restricted,
                              report=report, iterations=iteration)
        if len(assumptions) == size_before:
            raise InternalProgressFailure(
                "consistency check failed without learning a new assumption; "
                "the backend returned a previously refuted model")


def consistency_check(problem: SmtoProblem, model, assumptions: AssumptionSet,
                      runtime: OracleRuntime, beta_sink=None, report=None) -> bool:
    """Ground the model's oracle applications through calls; True iff the
    instantiated formula folds to true. New equalities land in
    `assumptions` either way."""
    binding = model_binding(model, problem.ordinary,
                            warn=report.warn if report else None)
    mu = partial_evaluate(substitute(problem.rho, binding))
    while True:
        app = find_oracle_application(mu)
        if app is None:
            break
        d = assumptions.lookup(app.name, app.inputs)
        if d is None:
            iface = problem.interfaces[app.name]
            outputs = runtime.call(iface, app.inputs)
            _, beta = instantiate_generators(iface, app.inputs, outputs)
            d = outputs[iface.alpha_value_index]
            assumptions.add(app.name, app.inputs, d)
            if beta is not None and beta_sink is not None:
                beta_sink(beta)
            if report:
                report.record("oracle-call", symbol=app.name,
                              inputs=[print_value(v) for v in app.inputs],
                              outputs=[print_value(v) for v in outputs])
                report.record("assumption",
                              term=f"(= ({app.name} "
                                   f"{' '.join(print_value(v) for v in app.inputs)}) "
                                   f"{print_value(d)})")
        mu = partial_evaluate(replace_at(mu, app.position, d))
    ok = mu == TRUE
    if report:
        report.record("consistency", ok=ok, residual=print_term(mu))
    return ok


def _restrict(model, ranks: dict, report=None) -> dict:
    """Model restricted to the ordinary symbols, with per-sort defaults
    materialized for entries the backend omitted."""
    from .terms import fn_sort

    out = {}
    for name, (params, ret) in ranks.items():
        if name in model.entries:
            out[name] = model.closure(name)
        else:
            if report:
                report.warn(f"model omits {name}; using the default value of its sort")
            out[name] = default_value(fn_sort(params, ret) if params else ret)
    return out
