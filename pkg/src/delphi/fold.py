"""Partial evaluation: fold value-saturated theory subterms to values.

Folding implements SMT-LIB total semantics where one exists (bvudiv by
zero, out-of-range string access); integer div/mod by zero and real
division by zero are left unfolded and delegated to the backend.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import EvalError
from .terms import (
    App, FALSE, Quant, Sort, SymKind, TRUE, Term, Value, bool_val, children,
)


def partial_evaluate(t: Term) -> Term:
    if isinstance(t, Quant):
        return Quant(t.binder, t.bound, partial_evaluate(t.body))
    if not isinstance(t, App):
        return t
    args = tuple(partial_evaluate(a) for a in t.args)
    if t.kind is not SymKind.THEORY:
        return App(t.name, t.kind, args, t.sort)
    return _fold(t.name, args, t.sort)


def _fold(name: str, args: tuple, sort: Sort) -> Term:
    if name == "ite":
        c, a, b = args
        if c == TRUE:
            return a
        if c == FALSE:
            return b
        return App(name, SymKind.THEORY, args, sort)
    if name == "and":
        kept = []
        for a in args:
            if a == FALSE:
                return FALSE
            if a != TRUE:
                kept.append(a)
        if not kept:
            return TRUE
        if len(kept) == 1:
            return kept[0]
        return App(name, SymKind.THEORY, tuple(kept), sort)
    if name == "or":
        kept = []
        for a in args:
            if a == TRUE:
                return TRUE
            if a != FALSE:
                kept.append(a)
        if not kept:
            return FALSE
        if len(kept) == 1:
            return kept[0]
        return App(name, SymKind.THEORY, tuple(kept), sort)
    if name == "not" and isinstance(args[0], Value):
        return bool_val(not args[0].payload)
    if name == "=>":
        a, b = args
        if a == FALSE or b == TRUE:
            return TRUE
        if a == TRUE:
            return b
        if b == FALSE:
            return _fold("not", (a,), sort)
        return App(name, SymKind.THEORY, args, sort)
    if all(isinstance(a, Value) for a in args):
        v = _apply(name, args, sort)
        if v is not None:
            return v
    return App(name, SymKind.THEORY, args, sort)


def _apply(name: str, args: tuple, sort: Sort) -> Optional[Value]:
    """Interpret a theory symbol on values; None means 'leave unfolded'."""
    ps = [a.payload for a in args]
    if name == "xor":
        acc = False
        for p in ps:
            acc ^= p
        return bool_val(acc)
    if name == "=":
        return bool_val(all(a == args[0] for a in args[1:]))
    if name == "distinct":
        return bool_val(len(set(args)) == len(args))

    if sort.kind == "Bool" and name in ("<=", "<", ">=", ">", "bvule", "bvult", "bvuge", "bvugt"):
        op = {"<=": lambda x, y: x <= y, "<": lambda x, y: x < y,
              ">=": lambda x, y: x >= y, ">": lambda x, y: x > y,
              "bvule": lambda x, y: x <= y, "bvult": lambda x, y: x < y,
              "bvuge": lambda x, y: x >= y, "bvugt": lambda x, y: x > y}[name]
        return bool_val(all(op(x, y) for x, y in zip(ps, ps[1:])))

    if name in ("+", "*", "-"):
        if name == "-" and len(ps) == 1:
            r = -ps[0]
        else:
            r = ps[0]
            for p in ps[1:]:
                r = r + p if name == "+" else r * p if name == "*" else r - p
        return Value(sort, r)
    if name == "abs":
        return Value(sort, abs(ps[0]))
    if name == "div" or name == "mod":
        a, d = ps
        if d == 0:
            return None
        q, r = divmod(a, d)
        if r < 0:  # Euclidean: remainder in [0, |d|)
            r += abs(d)
            q = (a - r) // d
        return Value(sort, q if name == "div" else r)
    if name == "/":
        if ps[1] == 0:
            return None
        return Value(sort, Fraction(ps[0]) / ps[1])

    if sort.kind == "BitVec" or (args and args[0].sort.kind == "BitVec"):
        w = args[0].sort.width
        mask = (1 << w) - 1
        if name == "bvadd":
            r = 0
            for p in ps:
                r += p
        elif name == "bvsub":
            r = ps[0]
            for p in ps[1:]:
                r -= p
        elif name == "bvmul":
            r = 1
            for p in ps:
                r *= p
        elif name == "bvand":
            r = mask
            for p in ps:
                r &= p
        elif name == "bvor":
            r = 0
            for p in ps:
                r |= p
        elif name == "bvxor":
            r = 0
            for p in ps:
                r ^= p
        elif name == "bvnot":
            r = ~ps[0]
        elif name == "bvneg":
            r = -ps[0]
        elif name == "bvudiv":
            r = mask if ps[1] == 0 else ps[0] // ps[1]
        elif name == "bvurem":
            r = ps[0] if ps[1] == 0 else ps[0] % ps[1]
        elif name == "bvshl":
            r = 0 if ps[1] >= w else ps[0] << ps[1]
        elif name == "bvlshr":
            r = 0 if ps[1] >= w else ps[0] >> ps[1]
        else:
            raise EvalError(f"no interpretation for bit-vector op {name}")
        return Value(args[0].sort, r & mask)

    if name == "str.++":
        return Value(sort, "".join(ps))
    if name == "str.len":
        return Value(sort, len(ps[0]))
    if name == "str.at":
        s, i = ps
        return Value(sort, s[i] if 0 <= i < len(s) else "")
    if name == "str.substr":
        s, i, n = ps
        if 0 <= i < len(s) and n > 0:
            return Value(sort, s[i:i + n])
        return Value(sort, "")
    if name == "str.contains":
        return bool_val(ps[1] in ps[0])
    raise EvalError(f"no interpretation for theory op {name}")


@dataclass(frozen=True)
class OracleApplication:
    """An oracle symbol applied to values, plus where it sits in the term."""

    name: str
    inputs: tuple  # tuple[Value, ...]
    position: tuple


def find_oracle_application(t: Term, _pos: tuple = ()) -> Optional[OracleApplication]:
    """Innermost-leftmost application of an oracle symbol to values, or None."""
    for i, c in enumerate(children(t)):
        found = find_oracle_application(c, _pos + (i,))
        if found is not None:
            return found
    if (isinstance(t, App) and t.kind is SymKind.ORACLE
            and all(isinstance(a, Value) for a in t.args)):
        return OracleApplication(t.name, t.args, _pos)
    return None
