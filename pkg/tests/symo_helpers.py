"""Builders for synthesis problems used by the engine tests, the CLI
tests and the acceptance suite."""

import textwrap

from oracle_scripts import write_oracle

# PBE tasks: name -> (python expression over a/b, arity, verification bounds,
#                     grammar productions)
LIN_GRAMMAR = ["x", "0", "1", "(+ S S)"]
AFFINE_GRAMMAR = ["x", "0", "1", "2", "3", "(+ S S)", "(* S S)"]

PBE_TASKS = {
    "succ": ("a + 1", 1, (0, 4), LIN_GRAMMAR),
    "plus2": ("a + 2", 1, (0, 4), LIN_GRAMMAR),
    "plus3": ("a + 3", 1, (0, 4), LIN_GRAMMAR),
    "plus4": ("a + 4", 1, (0, 4), LIN_GRAMMAR),
    "plus5": ("a + 5", 1, (0, 4), LIN_GRAMMAR),
    "double": ("2 * a", 1, (0, 4), LIN_GRAMMAR),
    "triple": ("3 * a", 1, (0, 4), AFFINE_GRAMMAR),
    "quadruple": ("4 * a", 1, (0, 4), AFFINE_GRAMMAR),
    "quintuple": ("5 * a", 1, (0, 4), AFFINE_GRAMMAR),
    "affine_2x1": ("2 * a + 1", 1, (0, 4), AFFINE_GRAMMAR),
    "affine_2x3": ("2 * a + 3", 1, (0, 4), AFFINE_GRAMMAR),
    "affine_2x5": ("2 * a + 5", 1, (0, 4), AFFINE_GRAMMAR),
    "affine_3x1": ("3 * a + 1", 1, (0, 4), AFFINE_GRAMMAR),
    "affine_3x2": ("3 * a + 2", 1, (0, 4), AFFINE_GRAMMAR),
    "affine_3x3": ("3 * a + 3", 1, (0, 4), AFFINE_GRAMMAR),
    "affine_4x2": ("4 * a + 2", 1, (0, 4), AFFINE_GRAMMAR),
    "const0": ("0", 1, (0, 4), LIN_GRAMMAR),
    "const3": ("3", 1, (0, 4), AFFINE_GRAMMAR),
    "identity": ("a", 1, (0, 4), LIN_GRAMMAR),
    "abs": ("a if a >= 0 else -a", 1, (-3, 3),
            ["x", "0", "(- 0 x)", "(ite B S S)"]),
    "max2": ("a if a >= b else b", 2, (0, 2),
             ["x", "y", "(ite B S S)"]),
    "min2": ("b if a >= b else a", 2, (0, 2),
             ["x", "y", "(ite B S S)"]),
}


def write_io_oracle(directory, name, expr, arity):
    letters = ["a", "b"][:arity]
    unpack = ", ".join(letters)
    body = f'''
        {unpack}{"," if arity == 1 else ""} = ARGS
        emit(enc({expr}))
    '''
    return write_oracle(directory, f"io_{name}", body)


def pbe_script(io_path, arity, bounds, grammar_prods):
    """SyGuS text: a definitional io oracle carries verification, a free io
    interface feeds the learner the correct outputs (phase II)."""
    lo, hi = bounds
    lo_txt = str(lo) if lo >= 0 else f"(- {-lo})"
    params = "(x Int)" if arity == 1 else "(x Int) (y Int)"
    qvars = "(qa Int)" if arity == 1 else "(qa Int) (qb Int)"
    fq = "(f qa)" if arity == 1 else "(f qa qb)"
    xs = ["x"] if arity == 1 else ["x", "y"]
    fx = f"(f {' '.join(xs)})"
    iox = f"(io {' '.join(xs)})"
    in_range = " ".join(f"(and (<= {lo_txt} {v}) (<= {v} {hi}))" for v in xs)
    guard = in_range if arity == 1 else f"(and {in_range})"
    decl_vars = "\n".join(f"(declare-var {v} Int)" for v in xs)
    needs_bool = any("B" in p for p in grammar_prods)
    nts = "((S Int) (B Bool))" if needs_bool else "((S Int))"
    brules = ' (B Bool ((<= S S)))' if needs_bool else ""
    rules = f"((S Int ({' '.join(grammar_prods)})){brules})"
    return textwrap.dedent(f'''\
        (set-logic ALL)
        (synth-fun f ({params}) Int
            {nts}
            {rules})
        {decl_vars}
        (declare-oracle-fun io ({" ".join(["Int"] * arity)}) Int "{io_path}")
        (oracle-constraint "{io_path}" ({qvars}) ((r Int)) (= {fq} r))
        (constraint (=> {guard} (= {fx} {iox})))
        (check-synth)
    ''')


def write_ccex_oracle(directory, name, spec_py, lo, hi):
    """Correctness-with-counterexample oracle: checks a candidate against
    spec_py (a Python expression over f and x) on [lo, hi], answering
    (true, 0) or (false, smallest counterexample)."""
    body = f'''
        f = fn_of_define_fun(sys.argv[1])
        zb, z = True, 0
        for x in range({lo}, {hi} + 1):
            if not ({spec_py}):
                zb, z = False, x
                break
        emit(enc(zb), enc(z))
    '''
    return write_oracle(directory, f"ccex_{name}", body)
