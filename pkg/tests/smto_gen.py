"""Random definitional SMTO problems over BitVec(3)/Bool with tabulated
oracles, plus the exhaustive-enumeration oracle used to judge verdicts."""

import itertools
import random

from delphi.oracles import definitional_interface
from delphi.smto import SmtoProblem
from delphi.terms import BOOL, bitvec, bool_val, bv_val
from oracle_scripts import write_table_oracle
from reference_eval import ref_eval
from term_gen import BV3, random_open_term


def make_random_problem(rng: random.Random, oracle_dir: str, tag: str):
    """Returns (SmtoProblem, oracle tables, ordinary-symbol domains)."""
    n_f = rng.randint(1, 2)
    n_th = rng.randint(1, 2)
    ordinary = {}
    domains = {}
    env = []
    for i in range(n_f):
        sort = BV3 if rng.random() < 0.8 else BOOL
        name = f"v{i + 1}"
        ordinary[name] = ((), sort)
        domains[name] = [bv_val(3, k) for k in range(8)] if sort == BV3 \
            else [bool_val(False), bool_val(True)]
        env.append((name, (), sort, "ordinary"))
    oracle_symbols = {}
    interfaces = {}
    tables = {}
    for i in range(n_th):
        name = f"th{i + 1}"
        ret = BOOL if rng.random() < 0.6 else BV3
        oracle_symbols[name] = ((BV3,), ret)
        table_py = {}
        table_txt = {}
        for k in range(8):
            if ret == BOOL:
                out = rng.random() < 0.5
                table_py[(k,)] = out
                table_txt[(f"#b{k:03b}",)] = "true" if out else "false"
            else:
                out = rng.randrange(8)
                table_py[(k,)] = out
                table_txt[(f"#b{k:03b}",)] = f"#b{out:03b}"
        tables[name] = table_py
        path = write_table_oracle(oracle_dir, f"{tag}_{name}", table_txt)
        interfaces[name] = definitional_interface(name, (BV3,), ret, path)
        env.append((name, (BV3,), ret, "oracle"))
    rho = random_open_term(rng, BOOL, rng.randint(2, 4), env)
    problem = SmtoProblem(ordinary=ordinary, oracle_symbols=oracle_symbols,
                          rho=rho, interfaces=interfaces)
    return problem, tables, domains


def brute_force_satisfiable(problem: SmtoProblem, tables: dict, domains: dict):
    """Exhaustive enumeration over all oracle-consistent assignments:
    satisfiable iff some assignment makes rho true with every oracle
    application reading the actual table."""
    names = list(domains)
    for combo in itertools.product(*(domains[n] for n in names)):
        env = {n: v.payload for n, v in zip(names, combo)}
        if ref_eval(problem.rho, env=env, tables=tables):
            return True
    return False


def domain_budget(problem: SmtoProblem) -> int:
    """Total number of distinct oracle queries possible across all oracles."""
    total = 0
    for name, (params, _ret) in problem.oracle_symbols.items():
        size = 1
        for p in params:
            size *= 2 ** p.width if p.kind == "BitVec" else 2
        total += size
    return total
