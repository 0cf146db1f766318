"""delphi: satisfiability and synthesis with black-box oracle executables."""

from .backend import BackendConfig, Model, Verdict, check_sat, eval_in_model
from .errors import DelphiError
from .fold import find_oracle_application, partial_evaluate
from .grammar import Grammar, SynthTarget, default_grammar
from .oracles import (
    AssumptionSet, OracleInterface, OracleRuntime, definitional_interface,
    instantiate_generators,
)
from .parser import Script, parse_script, parse_term_string, parse_value
from .printer import print_define_fun, print_sort, print_term, print_value
from .smto import SmtoProblem, SmtoResult, smto_problem_from_script, smto_solve
from .symo import (
    Outcome, SymoProblem, SymoResult, infer_oracle_inputs, standard_interface,
    symo_problem_from_script, symo_solve, verify_candidate,
)
from .synthesis import (
    GrammarEnumerator, StoreContext, SynthConfig, SynthQuery,
    check_candidate_against_store, synthesize,
)
from .terms import (
    BOOL, INT, REAL, STRING, App, Lambda, Quant, Sort, SymKind, Term, Value,
    Var, bitvec, bool_val, bv_val, fn_sort, int_val, real_val, replace_at,
    str_val, substitute,
)

__all__ = [n for n in dir() if not n.startswith("_")]
__version__ = "0.1.0"
