#!/usr/bin/env python3
"""Differential driver: feed a batch of encoded queries through the
solver's oracle runtime and print what it decoded.

stdin: one JSON object
  {"executable": "...", "query": [sort...], "response": [sort...],
   "inputs": [[token, ...], ...]}
sorts: "Int" | "Bool" | "String" | ["BitVec", w] | ["Fn", [sort...], sort]

stdout: one line per input batch with the decoded response values
re-encoded in the solver's own syntax, values joined by " | ".
"""

import json
import sys

from delphi.oracles import OracleInterface, OracleRuntime
from delphi.parser import parse_define_fun, parse_value
from delphi.printer import print_value
from delphi.terms import BOOL, INT, STRING, Value, Var, bitvec, fn_sort


def sort_of(spec):
    if spec == "Int":
        return INT
    if spec == "Bool":
        return BOOL
    if spec == "String":
        return STRING
    if isinstance(spec, list) and spec[0] == "BitVec":
        return bitvec(spec[1])
    if isinstance(spec, list) and spec[0] == "Fn":
        return fn_sort([sort_of(s) for s in spec[1]], sort_of(spec[2]))
    raise ValueError(f"bad sort spec {spec!r}")


def decode_input(token, sort):
    if sort.kind == "Fn":
        _name, lam = parse_define_fun(token)
        if lam.sort != sort:
            raise ValueError("candidate does not match the declared query sort")
        return Value(sort, lam)
    return parse_value(token, sort)


def main():
    spec = json.load(sys.stdin)
    qsorts = [sort_of(s) for s in spec["query"]]
    rsorts = [sort_of(s) for s in spec["response"]]
    iface = OracleInterface(
        name="differential",
        query_domain=tuple(Var(f"y{i}", s) for i, s in enumerate(qsorts)),
        response_codomain=tuple(Var(f"z{i}", s) for i, s in enumerate(rsorts)),
        assumption_gen=None, constraint_gen=None,
        executable=spec["executable"], kind="free")
    runtime = OracleRuntime(timeout=30.0)
    for tokens in spec["inputs"]:
        values = [decode_input(t, s) for t, s in zip(tokens, qsorts)]
        outputs = runtime.call(iface, values)
        print(" | ".join(print_value(v) for v in outputs))


if __name__ == "__main__":
    main()
