"""The toy transition system for the invariant-learning demo.

States are 3-bit vectors; the system starts at 0, steps by +2 mod 8, and
state 5 must be unreachable. An inductive invariant must contain the
initial state, be closed under stepping, and exclude the bad state.
"""

from delphi.grammar import Grammar, SynthTarget
from delphi.oracles import OracleRuntime
from delphi.parser import parse_term_string
from delphi.symo import SymoProblem, standard_interface, theta_rank
from delphi.terms import (
    BOOL, App, SymKind, Var, bitvec, bool_val, bv_val, eq, fn_sort,
    theory_app,
)
from oracle_scripts import write_oracle

BV3 = bitvec(3)
X = Var("x", BV3)
XP = Var("xp", BV3)

INIT_STATE = 0
BAD_STATE = 5
STEP = 2


def next_state(s: int) -> int:
    return (s + STEP) % 8


def reachable_states():
    seen, frontier = set(), [INIT_STATE]
    while frontier:
        s = frontier.pop()
        if s in seen:
            continue
        seen.add(s)
        frontier.append(next_state(s))
    return seen


def inv_grammar() -> Grammar:
    consts = [bv_val(3, k) for k in range(1, 8)]
    scope = [X, Var("C", BV3)]
    prods = (parse_term_string("(bvule x C)", scope=scope),
             parse_term_string("(= (bvand x C) #b000)", scope=scope))
    return Grammar((("B", BOOL), ("C", BV3)), {"B": prods, "C": tuple(consts)})


def inv_target() -> SynthTarget:
    return SynthTarget("inv", (X,), BOOL, inv_grammar())


def _inv(on):
    return App("inv", SymKind.ORDINARY, (on,), BOOL)


def direct_spec():
    """Fully white-box correctness condition over (x, x')."""
    init = eq(X, bv_val(3, INIT_STATE))
    trans = eq(XP, theory_app("bvadd", (X, bv_val(3, STEP))))
    safe = theory_app("not", (eq(X, bv_val(3, BAD_STATE)),))
    conj = theory_app("and", (
        theory_app("=>", (init, _inv(X))),
        theory_app("=>", (theory_app("and", (_inv(X), trans)), _inv(XP))),
        theory_app("=>", (_inv(X), safe)),
    ))
    return conj


def cegis_problem() -> SymoProblem:
    return SymoProblem(targets=(inv_target(),), oracle_symbols={},
                       spec_vars=(X, XP), phi=direct_spec(),
                       interfaces={}, free_interfaces=())


ICE_ORACLES = {
    "ice_corr": f'''
        f = fn_of_define_fun(sys.argv[1])
        ok = f({INIT_STATE})
        for s in range(8):
            if f(s) and not f((s + {STEP}) % 8):
                ok = False
            if f(s) and s == {BAD_STATE}:
                ok = False
        emit(enc(ok))
    ''',
    "ice_pos": f'''
        emit(enc({next_state(INIT_STATE)}, width=3), enc(True))
    ''',
    "ice_neg": f'''
        emit(enc({BAD_STATE}, width=3), enc(True))
    ''',
    "ice_impl": f'''
        f = fn_of_define_fun(sys.argv[1])
        pair = (0, {STEP})
        for s in range(8):
            if f(s) and not f((s + {STEP}) % 8):
                pair = (s, (s + {STEP}) % 8)
                break
        emit(enc(pair[0], width=3), enc(pair[1], width=3))
    ''',
}


def ice_problem(oracle_dir: str) -> SymoProblem:
    paths = {name: write_oracle(oracle_dir, name, body)
             for name, body in ICE_ORACLES.items()}
    target = inv_target()
    corr = standard_interface("correctness", target, paths["ice_corr"],
                              theta_name="corr_inv")
    pos = standard_interface("pos_witness", target, paths["ice_pos"])
    neg = standard_interface("neg_witness", target, paths["ice_neg"])
    imp = standard_interface("implication", target, paths["ice_impl"])
    inv_ref = App("inv", SymKind.ORDINARY, (), fn_sort((BV3,), BOOL))
    phi = eq(App("corr_inv", SymKind.ORACLE, (inv_ref,), BOOL), bool_val(True))
    return SymoProblem(targets=(target,),
                       oracle_symbols={"corr_inv": theta_rank(corr)},
                       spec_vars=(), phi=phi, interfaces={"corr_inv": corr},
                       free_interfaces=(pos, neg, imp))


def is_inductive_invariant(accepts) -> bool:
    """accepts: state -> bool. Checked against brute-force reachability."""
    if not accepts(INIT_STATE):
        return False
    for s in range(8):
        if accepts(s) and not accepts(next_state(s)):
            return False
    if accepts(BAD_STATE):
        return False
    for s in reachable_states():
        if not accepts(s):
            return False
    return True
