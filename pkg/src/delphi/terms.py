"""Sorted terms: sorts, values, applications, substitution, positions.

Terms are immutable; every operation returns a new term. Equality and
hashing are structural, which the engines rely on for dedup and memo keys.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from .errors import BadPosition, SortMismatch

# ---------------------------------------------------------------------------
# sorts

@dataclass(frozen=True)
class Sort:
    kind: str
    params: tuple = ()

    def __post_init__(self):
        if self.kind == "BitVec":
            if len(self.params) != 1 or not isinstance(self.params[0], int) or self.params[0] < 1:
                raise SortMismatch(f"bad bit-vector width {self.params}")
        elif self.kind == "Fn":
            dom, cod = self.params
            if len(dom) == 0:
                raise SortMismatch("function sort needs a non-empty domain")

    @property
    def width(self) -> int:
        assert self.kind == "BitVec"
        return self.params[0]

    @property
    def domain(self) -> tuple:
        assert self.kind == "Fn"
        return self.params[0]

    @property
    def codomain(self) -> "Sort":
        assert self.kind == "Fn"
        return self.params[1]

    def __repr__(self):
        if self.kind == "BitVec":
            return f"BitVec({self.width})"
        if self.kind == "Fn":
            return f"Fn({list(self.domain)} -> {self.codomain!r})"
        return self.kind


BOOL = Sort("Bool")
INT = Sort("Int")
REAL = Sort("Real")
STRING = Sort("String")


def bitvec(width: int) -> Sort:
    return Sort("BitVec", (width,))


def fn_sort(domain: Iterable[Sort], codomain: Sort) -> Sort:
    return Sort("Fn", (tuple(domain), codomain))


def uninterpreted(name: str) -> Sort:
    return Sort("Uninterpreted", (name,))


# ---------------------------------------------------------------------------
# terms

class SymKind(Enum):
    THEORY = "theory"
    ORDINARY = "ordinary"
    ORACLE = "oracle"


class Term:
    """Base class; concrete nodes are Value, Var, App and Quant."""

    sort: Sort


@dataclass(frozen=True)
class Lambda:
    """A function literal: parameter list plus body.

    Used as the payload of Fn-sorted values (candidate functions, model
    definitions). A Lambda payload must be closed: no free variables
    besides its own parameters.
    """

    params: tuple  # tuple[Var, ...]
    body: Term

    @property
    def sort(self) -> Sort:
        return fn_sort((p.sort for p in self.params), self.body.sort)


@dataclass(frozen=True)
class Value(Term):
    sort: Sort
    payload: Union[bool, int, Fraction, str, Lambda]

    def __post_init__(self):
        p, k = self.payload, self.sort.kind
        ok = (
            (k == "Bool" and type(p) is bool)
            or (k == "Int" and type(p) is int)
            or (k == "Real" and type(p) is Fraction)
            or (k == "String" and type(p) is str)
            or (k == "BitVec" and type(p) is int and 0 <= p < (1 << self.sort.width))
            or (k == "Fn" and type(p) is Lambda and p.sort == self.sort)
        )
        if not ok:
            raise SortMismatch(f"payload {p!r} does not inhabit sort {self.sort!r}")
        if k == "Fn":
            extra = free_names(self.payload.body) - {v.name for v in self.payload.params}
            if extra:
                raise SortMismatch(f"lambda value has free variables {sorted(extra)}")


@dataclass(frozen=True)
class Var(Term):
    name: str
    sort: Sort


@dataclass(frozen=True)
class App(Term):
    name: str
    kind: SymKind
    args: tuple  # tuple[Term, ...]
    sort: Sort

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if self.kind is SymKind.THEORY:
            expected = theory_sort(self.name, tuple(a.sort for a in self.args))
            if expected is None:
                raise SortMismatch(
                    f"({self.name} {' '.join(repr(a.sort) for a in self.args)}) is not a theory application")
            if expected != self.sort:
                raise SortMismatch(f"({self.name} ...) has sort {expected!r}, not {self.sort!r}")


@dataclass(frozen=True)
class Quant(Term):
    binder: str  # "forall" | "exists"
    bound: tuple  # tuple[Var, ...]
    body: Term
    sort: Sort = field(default=BOOL)

    def __post_init__(self):
        if self.body.sort != BOOL:
            raise SortMismatch("quantifier body must be Bool")


TRUE = Value(BOOL, True)
FALSE = Value(BOOL, False)


# ---------------------------------------------------------------------------
# theory signature

_VARIADIC_BOOL = {"and", "or", "xor"}
_CHAINABLE = {"=", "distinct"}
_ARITH = {"+", "*", "-"}
_CMP = {"<=", "<", ">=", ">"}
_BV_NARY = {"bvadd", "bvsub", "bvmul", "bvand", "bvor", "bvxor"}
_BV_BIN = {"bvudiv", "bvurem", "bvshl", "bvlshr"}
_BV_PRED = {"bvule", "bvult", "bvuge", "bvugt"}


def theory_sort(name: str, arg_sorts: tuple) -> Optional[Sort]:
    """Result sort of a theory application, or None if not applicable."""
    n = len(arg_sorts)
    if name == "not":
        return BOOL if arg_sorts == (BOOL,) else None
    if name in _VARIADIC_BOOL:
        return BOOL if n >= 1 and all(s == BOOL for s in arg_sorts) else None
    if name == "=>":
        return BOOL if n == 2 and all(s == BOOL for s in arg_sorts) else None
    if name in _CHAINABLE:
        return BOOL if n >= 2 and len(set(arg_sorts)) == 1 else None
    if name == "ite":
        if n == 3 and arg_sorts[0] == BOOL and arg_sorts[1] == arg_sorts[2]:
            return arg_sorts[1]
        return None
    if name in _ARITH:
        if n >= 1 and len(set(arg_sorts)) == 1 and arg_sorts[0] in (INT, REAL):
            if name == "-" or n >= 2:
                return arg_sorts[0]
        return None
    if name in ("div", "mod"):
        return INT if n == 2 and arg_sorts == (INT, INT) else None
    if name == "abs":
        return INT if arg_sorts == (INT,) else None
    if name == "/":
        return REAL if n == 2 and arg_sorts == (REAL, REAL) else None
    if name in _CMP:
        if n >= 2 and len(set(arg_sorts)) == 1 and arg_sorts[0] in (INT, REAL):
            return BOOL
        return None
    if name in ("bvnot", "bvneg"):
        return arg_sorts[0] if n == 1 and arg_sorts[0].kind == "BitVec" else None
    if name in _BV_NARY:
        if n >= 2 and len(set(arg_sorts)) == 1 and arg_sorts[0].kind == "BitVec":
            return arg_sorts[0]
        return None
    if name in _BV_BIN:
        if n == 2 and len(set(arg_sorts)) == 1 and arg_sorts[0].kind == "BitVec":
            return arg_sorts[0]
        return None
    if name in _BV_PRED:
        if n == 2 and len(set(arg_sorts)) == 1 and arg_sorts[0].kind == "BitVec":
            return BOOL
        return None
    if name == "str.++":
        return STRING if n >= 2 and all(s == STRING for s in arg_sorts) else None
    if name == "str.len":
        return INT if arg_sorts == (STRING,) else None
    if name == "str.at":
        return STRING if arg_sorts == (STRING, INT) else None
    if name == "str.substr":
        return STRING if arg_sorts == (STRING, INT, INT) else None
    if name == "str.contains":
        return BOOL if arg_sorts == (STRING, STRING) else None
    return None


def is_theory_symbol(name: str) -> bool:
    return name in (
        {"not", "=>", "ite", "div", "mod", "abs", "/", "str.len", "str.at",
         "str.substr", "str.contains", "str.++", "bvnot", "bvneg"}
        | _VARIADIC_BOOL | _CHAINABLE | _ARITH | _CMP | _BV_NARY | _BV_BIN | _BV_PRED
    )


# ---------------------------------------------------------------------------
# constructors

def theory_app(name: str, args: Iterable[Term]) -> App:
    args = tuple(args)
    sort = theory_sort(name, tuple(a.sort for a in args))
    if sort is None:
        raise SortMismatch(
            f"({name} {' '.join(repr(a.sort) for a in args)}) is not a theory application")
    return App(name, SymKind.THEORY, args, sort)


def sym_app(name: str, args: Iterable[Term], sort: Sort, oracle: bool = False) -> App:
    kind = SymKind.ORACLE if oracle else SymKind.ORDINARY
    return App(name, kind, tuple(args), sort)


def int_val(n: int) -> Value:
    return Value(INT, n)


def bool_val(b: bool) -> Value:
    return TRUE if b else FALSE


def bv_val(width: int, n: int) -> Value:
    return Value(bitvec(width), n & ((1 << width) - 1))


def real_val(x) -> Value:
    return Value(REAL, Fraction(x))


def str_val(s: str) -> Value:
    return Value(STRING, s)


def and_(*args: Term) -> Term:
    args = tuple(a for a in args)
    if not args:
        return TRUE
    if len(args) == 1:
        return args[0]
    return theory_app("and", args)


def or_(*args: Term) -> Term:
    args = tuple(a for a in args)
    if not args:
        return FALSE
    if len(args) == 1:
        return args[0]
    return theory_app("or", args)


def not_(a: Term) -> Term:
    return theory_app("not", (a,))


def implies(a: Term, b: Term) -> Term:
    return theory_app("=>", (a, b))


def eq(a: Term, b: Term) -> Term:
    return theory_app("=", (a, b))


def ite(c: Term, t: Term, e: Term) -> Term:
    return theory_app("ite", (c, t, e))


# ---------------------------------------------------------------------------
# traversal

def children(t: Term) -> tuple:
    if isinstance(t, App):
        return t.args
    if isinstance(t, Quant):
        return (t.body,)
    return ()


def with_children(t: Term, new: tuple) -> Term:
    if isinstance(t, App):
        return App(t.name, t.kind, tuple(new), t.sort)
    if isinstance(t, Quant):
        (body,) = new
        return Quant(t.binder, t.bound, body)
    assert not new
    return t


def subterms(t: Term):
    """Yield every subterm of t, root first; does not enter lambda values."""
    yield t
    for c in children(t):
        yield from subterms(c)


def subterm_at(t: Term, pos: tuple) -> Term:
    for i in pos:
        cs = children(t)
        if not (0 <= i < len(cs)):
            raise BadPosition(f"no child {i} at {t!r}")
        t = cs[i]
    return t


def replace_at(t: Term, pos: tuple, replacement: Term) -> Term:
    """Replace the subterm at pos; the replacement must have the same sort."""
    if not pos:
        if replacement.sort != t.sort:
            raise SortMismatch(
                f"replacement sort {replacement.sort!r} differs from {t.sort!r}")
        return replacement
    cs = children(t)
    i = pos[0]
    if not (0 <= i < len(cs)):
        raise BadPosition(f"no child {i} at {t!r}")
    new = list(cs)
    new[i] = replace_at(cs[i], pos[1:], replacement)
    return with_children(t, tuple(new))


def free_names(t: Term) -> set:
    """Free variable names of t (Var nodes only)."""
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Quant):
        return free_names(t.body) - {v.name for v in t.bound}
    out: set = set()
    for c in children(t):
        out |= free_names(c)
    return out


def symbol_names(t: Term) -> set:
    """Names of ordinary and oracle symbols applied anywhere in t."""
    out: set = set()
    for s in subterms(t):
        if isinstance(s, App) and s.kind is not SymKind.THEORY:
            out.add(s.name)
    return out


def oracle_apps(t: Term):
    for s in subterms(t):
        if isinstance(s, App) and s.kind is SymKind.ORACLE:
            yield s


# ---------------------------------------------------------------------------
# substitution

def _replacement_free_names(r) -> set:
    if isinstance(r, Lambda):
        return free_names(r.body) - {p.name for p in r.params}
    return free_names(r)


def _fresh(base: str, avoid: set) -> str:
    i = 1
    while f"{base}!{i}" in avoid:
        i += 1
    return f"{base}!{i}"


def substitute(t: Term, binding: Mapping[str, Union[Term, Lambda]]) -> Term:
    """Simultaneous, capture-avoiding substitution.

    Keys name either variables or applied symbols. A Var is replaced by a
    Term of identical sort. An App of a bound symbol is replaced by
    beta-reducing a Lambda against its (already substituted) arguments;
    0-ary applications accept any Term of the symbol's sort. Lambda values
    are closed and are never entered.
    """
    if not binding:
        return t
    if isinstance(t, Value):
        return t
    if isinstance(t, Var):
        r = binding.get(t.name)
        if r is None:
            return t
        if isinstance(r, Lambda):
            r = Value(r.sort, r)
        if r.sort != t.sort:
            raise SortMismatch(
                f"replacement for {t.name} has sort {r.sort!r}, expected {t.sort!r}")
        return r
    if isinstance(t, App):
        args = tuple(substitute(a, binding) for a in t.args)
        r = binding.get(t.name) if t.kind is not SymKind.THEORY else None
        if r is None:
            return App(t.name, t.kind, args, t.sort)
        if isinstance(r, Value) and isinstance(r.payload, Lambda):
            r = r.payload
        if isinstance(r, Lambda):
            if not args:
                return Value(r.sort, r)
            if len(r.params) != len(args) or any(
                    p.sort != a.sort for p, a in zip(r.params, args)):
                raise SortMismatch(f"definition for {t.name} does not match its rank")
            return substitute(r.body, {p.name: a for p, a in zip(r.params, args)})
        if args:
            raise SortMismatch(f"cannot apply non-function replacement for {t.name}")
        if r.sort != t.sort:
            raise SortMismatch(
                f"replacement for {t.name} has sort {r.sort!r}, expected {t.sort!r}")
        return r
    if isinstance(t, Quant):
        bound_names = {v.name for v in t.bound}
        live = {k: v for k, v in binding.items() if k not in bound_names}
        relevant = {k: v for k, v in live.items() if k in free_names(t.body) or k in symbol_names(t.body)}
        if not relevant:
            return t
        clash = set()
        for r in relevant.values():
            clash |= _replacement_free_names(r)
        body, bound = t.body, t.bound
        if clash & bound_names:
            avoid = clash | free_names(body) | bound_names
            renaming, new_bound = {}, []
            for v in bound:
                if v.name in clash:
                    nv = Var(_fresh(v.name, avoid), v.sort)
                    avoid.add(nv.name)
                    renaming[v.name] = nv
                    new_bound.append(nv)
                else:
                    new_bound.append(v)
            body = substitute(body, renaming)
            bound = tuple(new_bound)
        return Quant(t.binder, bound, substitute(body, relevant))
    raise TypeError(f"not a term: {t!r}")
