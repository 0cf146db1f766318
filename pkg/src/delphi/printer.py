"""Concrete SMT-LIB syntax for sorts, values and terms.

The printer is the inverse of the parser on well-sorted terms:
parse_term(print_term(t)) == t. Negative integers print as (- n),
bit-vectors as #b literals zero-padded to their width.
"""

from __future__ import annotations

from fractions import Fraction

from .terms import App, Lambda, Quant, Sort, Term, Value, Var


def print_sort(s: Sort) -> str:
    if s.kind == "BitVec":
        return f"(_ BitVec {s.width})"
    if s.kind == "Fn":
        dom = " ".join(print_sort(d) for d in s.domain)
        return f"(-> {dom} {print_sort(s.codomain)})"
    if s.kind == "Uninterpreted":
        return s.params[0]
    return s.kind


def print_value(v: Value) -> str:
    k = v.sort.kind
    p = v.payload
    if k == "Bool":
        return "true" if p else "false"
    if k == "Int":
        return str(p) if p >= 0 else f"(- {-p})"
    if k == "Real":
        return _print_real(p)
    if k == "BitVec":
        return "#b" + format(p, f"0{v.sort.width}b")
    if k == "String":
        return '"' + p.replace('"', '""') + '"'
    if k == "Fn":
        return _print_lambda(p)
    raise ValueError(f"cannot print value of sort {v.sort!r}")


def _print_real(p: Fraction) -> str:
    sign_wrap = p < 0
    p = abs(p)
    body = f"{p.numerator}.0" if p.denominator == 1 else f"(/ {p.numerator} {p.denominator})"
    return f"(- {body})" if sign_wrap else body


def _print_lambda(lam: Lambda) -> str:
    params = " ".join(f"({v.name} {print_sort(v.sort)})" for v in lam.params)
    return f"(lambda ({params}) {print_term(lam.body)})"


def print_term(t: Term) -> str:
    if isinstance(t, Value):
        return print_value(t)
    if isinstance(t, Var):
        return t.name
    if isinstance(t, App):
        if not t.args:
            return t.name
        return "(" + t.name + " " + " ".join(print_term(a) for a in t.args) + ")"
    if isinstance(t, Quant):
        bound = " ".join(f"({v.name} {print_sort(v.sort)})" for v in t.bound)
        return f"({t.binder} ({bound}) {print_term(t.body)})"
    raise ValueError(f"not a term: {t!r}")


def print_define_fun(name: str, lam: Lambda) -> str:
    """A complete (define-fun ...) for a candidate or model function."""
    params = " ".join(f"({v.name} {print_sort(v.sort)})" for v in lam.params)
    ret = print_sort(lam.body.sort)
    return f"(define-fun {name} ({params}) {ret} {print_term(lam.body)})"
