#!/usr/bin/env python3
import os, sys

def dec(tok):
    tok = tok.strip()
    if tok == "true":
        return True
    if tok == "false":
        return False
    if tok.startswith("#b"):
        return int(tok[2:], 2)
    if tok.startswith("#x"):
        return int(tok[2:], 16)
    if tok.startswith("(-"):
        return -int(tok[2:].rstrip(")").strip())
    try:
        return int(tok)
    except ValueError:
        return tok  # e.g. a define-fun blob

def enc(v, width=None):
    if isinstance(v, bool):
        return "true" if v else "false"
    if width is not None:
        return "#b" + format(v % (1 << width), "0%db" % width)
    if isinstance(v, int):
        return str(v) if v >= 0 else "(- %d)" % -v
    return str(v)

def emit(*tokens):
    print(" ".join(tokens))

SEED = int(os.environ.get("DELPHI_ORACLE_SEED", "0"))
ARGS = [dec(a) for a in sys.argv[1:]]

# --- tiny interpreter for candidate define-funs over ints/bools/bitvecs
def _tokens(s):
    return s.replace("(", " ( ").replace(")", " ) ").split()

def _read(toks, i=0):
    if toks[i] == "(":
        out = []
        i += 1
        while toks[i] != ")":
            node, i = _read(toks, i)
            out.append(node)
        return out, i + 1
    return toks[i], i + 1

def fn_of_define_fun(text):
    """Python callable from a (define-fun name ((p s)...) s body) blob."""
    node, _ = _read(_tokens(text))
    assert node[0] == "define-fun", "expected a define-fun"
    params = [p[0] for p in node[2]]
    body = node[4]
    widths = {}
    for p in node[2]:
        if isinstance(p[1], list) and p[1][:2] == ["_", "BitVec"]:
            widths[p[0]] = int(p[1][2])
    def ev(n, env):
        if isinstance(n, str):
            if n in env:
                return env[n]
            return dec(n)
        op = n[0]
        if op == "ite":
            return ev(n[2], env) if ev(n[1], env) else ev(n[3], env)
        xs = [ev(a, env) for a in n[1:]]
        W = None
        for a, x in zip(n[1:], xs):
            if isinstance(a, str) and a in widths:
                W = widths[a]
        mask = (1 << W) - 1 if W else None
        if op == "+": return sum(xs)
        if op == "-": return -xs[0] if len(xs) == 1 else xs[0] - sum(xs[1:])
        if op == "*":
            r = 1
            for x in xs: r *= x
            return r
        if op == "div":
            a, d = xs
            q, r = divmod(a, d)
            if r < 0: q += 1 if d < 0 else -1
            return q
        if op == "mod":
            a, d = xs
            r = a % d
            return r + abs(d) if r < 0 else r
        if op == "abs": return abs(xs[0])
        if op == "=": return all(x == xs[0] for x in xs[1:])
        if op == "<=": return xs[0] <= xs[1]
        if op == "<": return xs[0] < xs[1]
        if op == ">=": return xs[0] >= xs[1]
        if op == ">": return xs[0] > xs[1]
        if op == "and": return all(xs)
        if op == "or": return any(xs)
        if op == "not": return not xs[0]
        if op == "=>": return (not xs[0]) or xs[1]
        if op == "bvadd": return (xs[0] + xs[1]) & mask
        if op == "bvsub": return (xs[0] - xs[1]) & mask
        if op == "bvmul": return (xs[0] * xs[1]) & mask
        if op == "bvand": return xs[0] & xs[1]
        if op == "bvor": return xs[0] | xs[1]
        if op == "bvxor": return xs[0] ^ xs[1]
        if op == "bvnot": return (~xs[0]) & mask
        if op == "bvule": return xs[0] <= xs[1]
        if op == "bvult": return xs[0] < xs[1]
        raise ValueError("oracle interpreter: op %s" % op)
    def call(*args):
        return ev(body, dict(zip(params, args)))
    return call

n = ARGS[0]
ok = False
if n >= 0:
    r = int(n ** 0.5)
    ok = any((r + d) * (r + d) == n for d in (-1, 0, 1, 2))
emit(enc(ok))
