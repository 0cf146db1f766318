"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Heavy solver work happens in session-scoped fixtures so that several
criteria can judge one run (the random finite-domain suite feeds both
the equivalence and the termination-bound criteria; the synthesis
fixtures feed the soundness criterion).
"""

import os
import random
import time
from dataclasses import dataclass, field

import pytest

from delphi.backend import Verdict
from delphi.oracles import AssumptionSet, OracleRuntime
from delphi.parser import parse_script
from delphi.printer import print_define_fun, print_term
from delphi.smto import smto_problem_from_script, smto_solve
from delphi.symo import Outcome, symo_problem_from_script, symo_solve, verify_candidate
from delphi.synthesis import SynthConfig
from conftest import REPO_ROOT
from ice_demo import cegis_problem, ice_problem, is_inductive_invariant
from reference_eval import ref_eval
from smto_gen import brute_force_satisfiable, domain_budget, make_random_problem
from symo_helpers import PBE_TASKS, pbe_script, write_ccex_oracle, write_io_oracle

BENCH = os.path.join(REPO_ROOT, "benchmarks")


def report_line(name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"\nACCEPTANCE[{name}] {status} {detail}")
    assert ok, f"{name}: {detail}"


# --- independent number-theory checkers (test-side oracles) ---

def check_prime(n):
    if n <= 1:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def check_square(n):
    if n < 0:
        return False
    r = 0
    while r * r < n:
        r += 1
    return r * r == n


def check_triangle(n):
    total, k = 0, 1
    while total < n:
        total += k
        k += 1
    return n > 0 and total == n


CHECKERS = {"isPrime": check_prime, "isSquare": check_square,
            "isTriangle": check_triangle}


# ---------------------------------------------------------------------------
# criterion 1: prime factorization (Fig. 1 shape)

def test_prime_factorization_under_10s(backend_cfg):
    problem = smto_problem_from_script(parse_script(
        open(os.path.join(BENCH, "prime76.smt2")).read()))
    start = time.monotonic()
    result = smto_solve(problem, backend_cfg, OracleRuntime(base_dir=BENCH))
    elapsed = time.monotonic() - start
    ok = result.status is Verdict.SAT
    factors = [result.model[n].payload for n in ("f1", "f2", "f3")] if ok else []
    ok = ok and factors and abs(factors[0] * factors[1] * factors[2]) == 76
    ok = ok and all(check_prime(f) for f in factors)
    ok = ok and elapsed < 10.0
    report_line("prime-factorization", ok,
                f"factors={factors} wall={elapsed:.2f}s (<10s)")


# ---------------------------------------------------------------------------
# criterion 2: math suite

MATH_EXPECTED = {
    "m01_square": "sat", "m02_prime": "sat", "m03_prime_sum": "sat",
    "m04_triangle": "sat", "m05_square_prime": "sat", "m06_triangle_sum": "sat",
    "m07_prime_product": "sat", "m08_prime_even_unsat": "unsat",
    "m09_square_gap": "sat", "m10_tri_prime": "sat", "m11_prime76": "sat",
    "m12_square_triangle_unsat": "unsat",
}


@pytest.fixture(scope="session")
def math_results(backend_cfg):
    out = {}
    for name in sorted(MATH_EXPECTED):
        path = os.path.join(BENCH, "math", f"{name}.smt2")
        script = parse_script(open(path).read())
        problem = smto_problem_from_script(script)
        runtime = OracleRuntime(base_dir=os.path.dirname(path))
        start = time.monotonic()
        try:
            result = smto_solve(problem, backend_cfg, runtime)
            verdict = result.status.value
        except Exception as e:  # pragma: no cover - a criterion failure path
            result, verdict = None, f"error:{e}"
        out[name] = (result, verdict, time.monotonic() - start, problem)
    return out


def test_math_suite(math_results):
    solved = 0
    details = []
    for name, (result, verdict, elapsed, problem) in math_results.items():
        good = verdict == MATH_EXPECTED[name] and elapsed < 60.0
        if good and verdict == "sat":
            for sym, (params, _ret) in problem.oracle_symbols.items():
                for (theta, inputs), value in result.assumptions.items():
                    if theta == sym:
                        expect = CHECKERS[sym](inputs[0].payload)
                        good = good and (value.payload == expect)
            good = good and _model_satisfies(problem, result)
        solved += bool(good)
        details.append(f"{name}={verdict}:{elapsed:.1f}s{'' if good else '!'}")
    report_line("math-suite", solved >= 9, f"solved {solved}/12 :: {' '.join(details)}")


class _TotalTable(dict):
    """Oracle table backed by a checker for entries outside the cache."""

    def __init__(self, entries, checker):
        super().__init__(entries)
        self._checker = checker

    def __missing__(self, key):
        return self._checker(key[0])


def _model_satisfies(problem, result):
    env = {n: v.payload for n, v in result.model.items()}
    tables = {}
    for (theta, inputs), value in result.assumptions.items():
        tables.setdefault(theta, {})[tuple(v.payload for v in inputs)] = value.payload
    for sym in problem.oracle_symbols:
        tables[sym] = _TotalTable(tables.get(sym, {}), CHECKERS[sym])
    return ref_eval(problem.rho, env=env, tables=tables) is True


# ---------------------------------------------------------------------------
# criteria 3+4: the random finite-domain suite

@dataclass
class RandomRun:
    problem: object
    tables: dict
    domains: dict
    result: object
    runtime: object
    budget: int


@pytest.fixture(scope="session")
def random_suite(backend_cfg, tmp_path_factory):
    directory = str(tmp_path_factory.mktemp("rand_oracles"))
    rng = random.Random(76)
    runs = []
    for i in range(100):
        problem, tables, domains = make_random_problem(rng, directory, f"a{i}")
        runtime = OracleRuntime()
        result = smto_solve(problem, backend_cfg, runtime)
        runs.append(RandomRun(problem, tables, domains, result, runtime,
                              domain_budget(problem)))
    return runs


def test_smto_brute_force_equivalence(random_suite):
    agree = 0
    for i, run in enumerate(random_suite):
        expected = brute_force_satisfiable(run.problem, run.tables, run.domains)
        got = run.result.status is Verdict.SAT
        if run.result.status is not Verdict.UNKNOWN and got == expected:
            agree += 1
    report_line("smto-brute-force-equivalence", agree == 100, f"{agree}/100 verdicts agree")


def test_smto_termination_bound(random_suite):
    ok = True
    worst = 0
    for run in random_suite:
        worst = max(worst, run.result.iterations - run.budget)
        if run.result.iterations > run.budget + 1:
            ok = False
        for theta, (params, _r) in run.problem.oracle_symbols.items():
            size = 1
            for p in params:
                size *= 2 ** p.width
            distinct = {r.inputs for r in run.runtime.records if r.interface == theta}
            if len(distinct) > size:
                ok = False
    report_line("smto-termination-bound", ok,
                "iterations <= domain+1 and queries <= domain size in all 100 runs")


# ---------------------------------------------------------------------------
# criterion 7: PBE tasks

@dataclass
class SynthRecord:
    name: str
    problem: object
    candidate: dict
    iterations: int
    elapsed: float
    pointwise: object = None  # callable () -> bool


@pytest.fixture(scope="session")
def pbe_results(backend_cfg, tmp_path_factory):
    directory = str(tmp_path_factory.mktemp("pbe_oracles"))
    records = []
    for name, (expr, arity, bounds, prods) in PBE_TASKS.items():
        io_path = write_io_oracle(directory, name, expr, arity)
        script = parse_script(pbe_script(io_path, arity, bounds, prods))
        problem = symo_problem_from_script(script)
        start = time.monotonic()
        result = symo_solve(problem, backend_cfg, OracleRuntime(),
                            SynthConfig(max_size=14))
        elapsed = time.monotonic() - start
        if result.status is not Outcome.SOLUTION:
            records.append(SynthRecord(name, problem, None, result.iterations, elapsed))
            continue
        records.append(SynthRecord(
            name, problem, result.candidate, result.iterations, elapsed,
            pointwise=_pbe_pointwise(expr, arity, bounds, result.candidate)))
    return records


def _pbe_pointwise(expr, arity, bounds, candidate):
    lo, hi = bounds

    def io_fn(*vals):
        a = vals[0]
        b = vals[1] if arity == 2 else None
        return eval(expr)

    lam = candidate["f"]

    def check():
        points = [(v,) for v in range(lo, hi + 1)] if arity == 1 else \
            [(v, w) for v in range(lo, hi + 1) for w in range(lo, hi + 1)]
        for point in points:
            env = {p.name: v for p, v in zip(lam.params, point)}
            if ref_eval(lam.body, env=env) != io_fn(*point):
                return False
        return True

    return check


def test_pbe_suite(pbe_results):
    solved = [r for r in pbe_results if r.candidate is not None]
    within = [r for r in solved if r.elapsed < 30.0]
    mean_iterations = sum(r.iterations for r in solved) / max(len(solved), 1)
    ok = (len(pbe_results) >= 20 and len(solved) == len(pbe_results)
          and len(within) == len(solved) and mean_iterations <= 10.0)
    report_line("pbe-suite", ok,
                f"{len(solved)}/{len(pbe_results)} solved, mean iterations "
                f"{mean_iterations:.1f} (<=10), max wall "
                f"{max(r.elapsed for r in pbe_results):.1f}s (<30s)")


# ---------------------------------------------------------------------------
# criterion 6: CEGIS equivalence

@pytest.fixture(scope="session")
def cegis_result(backend_cfg, tmp_path_factory):
    from delphi.grammar import Grammar, SynthTarget
    from delphi.parser import parse_term_string
    from delphi.symo import SymoProblem, standard_interface, theta_rank
    from delphi.terms import (
        App, BOOL, INT, SymKind, Var, bool_val, eq, fn_sort,
    )

    directory = str(tmp_path_factory.mktemp("cegis_oracle"))
    ccex = write_ccex_oracle(directory, "gtx", "f(x) > x", 0, 3)
    x = Var("x", INT)
    grammar = Grammar((("S", INT),), {"S": tuple(
        parse_term_string(p, scope=[x, Var("S", INT)])
        for p in ["x", "0", "1", "(+ S S)"])})
    target = SynthTarget("f", (x,), INT, grammar)
    spec = App(">", SymKind.THEORY, (App("f", SymKind.ORDINARY, (x,), INT), x), BOOL)
    iface = standard_interface("correctness_with_cex", target, ccex,
                               phi=spec, spec_vars=(x,))
    theta = iface.defines_symbol
    fref = App("f", SymKind.ORDINARY, (), fn_sort((INT,), INT))
    phi = eq(App(theta, SymKind.ORACLE, (fref,), BOOL), bool_val(True))
    problem = SymoProblem(targets=(target,), oracle_symbols={theta: theta_rank(iface)},
                          spec_vars=(), phi=phi, interfaces={theta: iface},
                          free_interfaces=())
    result = symo_solve(problem, backend_cfg, OracleRuntime(), SynthConfig(max_size=10))
    return problem, result


def test_cegis_equivalence(cegis_result):
    problem, result = cegis_result
    stores = [e.data["store"] for e in result.report.of_kind("symo-iteration")]
    hand_derived = [
        (),
        ("(> (f 0) 0)",),
        ("(> (f 0) 0)", "(> (f 1) 1)"),
    ]
    ok = (result.status is Outcome.SOLUTION and len(stores) >= 3
          and list(stores[:3]) == hand_derived)
    report_line("cegis-equivalence", ok,
                f"per-iteration store matched the classic loop for {len(stores)} iterations")


# ---------------------------------------------------------------------------
# criterion 10: invariant demo, white-box loop vs witness oracles

@pytest.fixture(scope="session")
def invariant_results(backend_cfg, tmp_path_factory):
    directory = str(tmp_path_factory.mktemp("ice_oracles"))
    out = {}
    for config, problem in (("cegis", cegis_problem()),
                            ("ice", ice_problem(directory))):
        result = symo_solve(problem, backend_cfg, OracleRuntime(),
                            SynthConfig(max_size=8))
        out[config] = (problem, result)
    return out


def test_invariant_demo_both_configs(invariant_results):
    details = []
    ok = True
    for config, (problem, result) in invariant_results.items():
        good = result.status is Outcome.SOLUTION
        if good:
            lam = result.candidate["inv"]

            def accepts(s, lam=lam):
                return ref_eval(lam.body, env={lam.params[0].name: s}) is True

            good = is_inductive_invariant(accepts)
            details.append(f"{config}:{print_term(lam.body)}")
        ok = ok and good
    ice_report = invariant_results["ice"][1].report
    pos_fired = any(e.data.get("interface", "").startswith("pos_")
                    for e in ice_report.of_kind("phase2-call"))
    ok = ok and pos_fired
    report_line("ice-vs-cegis", ok,
                f"{'; '.join(details)}; positive-witness constraints issued: {pos_fired}")


# ---------------------------------------------------------------------------
# criterion 5: SyMO soundness across all synthesized solutions

def test_symo_soundness(pbe_results, cegis_result, invariant_results, backend_cfg):
    checked = 0
    sound = 0
    for record in pbe_results:
        if record.candidate is None:
            continue
        checked += 1
        fresh = verify_candidate(record.problem, record.candidate, AssumptionSet(),
                                 backend_cfg, OracleRuntime())
        if fresh.status is Verdict.UNSAT and record.pointwise():
            sound += 1
    problem, result = cegis_result
    if result.status is Outcome.SOLUTION:
        checked += 1
        fresh = verify_candidate(problem, result.candidate, AssumptionSet(),
                                 backend_cfg, OracleRuntime())
        lam = result.candidate["f"]
        pointwise = all(
            ref_eval(lam.body, env={lam.params[0].name: v}) > v for v in range(0, 4))
        if fresh.status is Verdict.UNSAT and pointwise:
            sound += 1
    for config, (prob, res) in invariant_results.items():
        if res.status is Outcome.SOLUTION:
            checked += 1
            fresh = verify_candidate(prob, res.candidate, AssumptionSet(),
                                     backend_cfg, OracleRuntime())
            if fresh.status is Verdict.UNSAT:
                sound += 1
    report_line("symo-soundness", checked > 0 and sound == checked,
                f"{sound}/{checked} solutions re-verified UNSAT with empty seed "
                "and pointwise-checked on finite domains")
