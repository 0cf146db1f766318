"""Command-line entry point.

The mode is inferred from the input's final directive: check-sat runs the
satisfiability loop, check-synth the synthesis loop. Exit codes: 0 for
sat/solution, 1 for unsat/no-solution, 2 for unknown, 3 for usage or
parse errors, 4 for oracle or backend faults.
"""

from __future__ import annotations

import argparse
import os
import shutil
import sys

from .backend import BackendConfig, Verdict
from .errors import (
    BackendError, DelphiError, IterationLimit, OracleError, ParseError,
)
from .oracles import OracleRuntime
from .parser import parse_script
from .printer import print_define_fun, print_term
from .report import RunReport
from .smto import smto_problem_from_script, smto_solve
from .symo import Outcome, symo_problem_from_script, symo_solve
from .synthesis import SynthConfig
from .terms import Lambda, Value

EXIT_SAT = 0
EXIT_UNSAT = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 3
EXIT_FAULT = 4


def default_smt_solver() -> str | None:
    """Resolution order: $DELPHI_SMT_SOLVER, z3/cvc5 on PATH, the bundled
    z3 WASM wrapper next to this repository."""
    env = os.environ.get("DELPHI_SMT_SOLVER")
    if env:
        return env
    if shutil.which("z3"):
        return "z3 -in"
    if shutil.which("cvc5"):
        return "cvc5 --lang smt2"
    here = os.path.dirname(os.path.abspath(__file__))
    for root in (os.getcwd(), os.path.normpath(os.path.join(here, "..", "..", ".."))):
        wrapper = os.path.join(root, "tools", "z3cli.mjs")
        if os.path.exists(wrapper) and shutil.which("node"):
            return f"node {wrapper}"
    return None


def build_arg_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="delphi",
        description="satisfiability and synthesis with black-box oracle executables")
    p.add_argument("input", help="problem file (.smt2 or .sy)")
    p.add_argument("--smt-solver", help="SMT-LIB backend command reading stdin")
    p.add_argument("--synth-solver", help="external SyGuS-IF solver command")
    p.add_argument("--oracle-timeout", type=float, default=10.0, metavar="S")
    p.add_argument("--max-iterations", type=int, default=None, metavar="N")
    p.add_argument("--report", metavar="PATH", help="write the run report here")
    p.add_argument("--seed", type=int, default=0, help="oracle seed (DELPHI_ORACLE_SEED)")
    p.add_argument("--verbose", action="store_true")
    return p


def _print_model_entry(name, value):
    from .printer import print_sort

    if isinstance(value, Value) and value.sort.kind == "Fn":
        print(print_define_fun(name, value.payload))
    elif isinstance(value, Lambda):
        print(print_define_fun(name, value))
    else:
        print(f"(define-fun {name} () {print_sort(value.sort)} {print_term(value)})")


def run(argv) -> int:
    args = build_arg_parser().parse_args(argv)
    report = RunReport()
    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        print(f"delphi: cannot read {args.input}: {e}", file=sys.stderr)
        return EXIT_USAGE

    solver_cmd = args.smt_solver or default_smt_solver()
    if solver_cmd is None:
        print("delphi: no SMT backend found; pass --smt-solver or set "
              "DELPHI_SMT_SOLVER", file=sys.stderr)
        return EXIT_USAGE
    backend_cfg = BackendConfig(command=solver_cmd)
    runtime = OracleRuntime(timeout=args.oracle_timeout, seed=args.seed,
                            base_dir=os.path.dirname(os.path.abspath(args.input)))

    try:
        script = parse_script(text)
        if script.directive == "check-sat":
            code = _run_smto(script, backend_cfg, runtime, args, report)
        else:
            code = _run_symo(script, backend_cfg, runtime, args, report)
    except ParseError as e:
        print(f"delphi: parse error: {e}", file=sys.stderr)
        code = EXIT_USAGE
    except IterationLimit as e:
        print("unknown")
        print(f"delphi: {e}", file=sys.stderr)
        code = EXIT_UNKNOWN
    except (OracleError, BackendError) as e:
        print(f"delphi: {type(e).__name__}: {e}", file=sys.stderr)
        code = EXIT_FAULT
    except DelphiError as e:
        print(f"delphi: {type(e).__name__}: {e}", file=sys.stderr)
        code = EXIT_USAGE
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(report.text())
    if args.verbose:
        sys.stderr.write(report.text())
    return code


def _run_smto(script, backend_cfg, runtime, args, report) -> int:
    problem = smto_problem_from_script(script)
    result = smto_solve(problem, backend_cfg, runtime,
                        max_iterations=args.max_iterations, report=report)
    print(result.status.value)
    if result.status is Verdict.SAT:
        for name in problem.ordinary:
            _print_model_entry(name, result.model[name])
        return EXIT_SAT
    if result.status is Verdict.UNSAT:
        return EXIT_UNSAT
    return EXIT_UNKNOWN


def _run_symo(script, backend_cfg, runtime, args, report) -> int:
    problem = symo_problem_from_script(script)
    synth_cfg = SynthConfig(
        mode="external" if args.synth_solver else "builtin",
        command=args.synth_solver)
    result = symo_solve(problem, backend_cfg, runtime, synth_cfg,
                        max_iterations=args.max_iterations, report=report)
    if result.status is Outcome.SOLUTION:
        for name, lam in sorted(result.candidate.items()):
            print(print_define_fun(name, lam))
        return EXIT_SAT
    if result.status is Outcome.NO_SOLUTION:
        print("no-solution")
        return EXIT_UNSAT
    print("unknown")
    if result.reason:
        print(f"delphi: {result.reason}", file=sys.stderr)
    return EXIT_UNKNOWN


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
