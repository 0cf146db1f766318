"""Parser for the extended SMT-LIB/SyGuS-IF input language.

Beyond the standard commands, the language has three oracle forms:

  (declare-oracle-fun <name> (<sort>*) <sort> <binary>)
      declares an oracle function symbol together with the interface
      that defines it (query y1..yn, response z, assumption
      (= (<name> y1..yn) z)).

  (oracle-assumption <binary> ((y <sort>)*) ((z <sort>)*) <term>)
  (oracle-constraint <binary> ((y <sort>)*) ((z <sort>)*) <term>)
      declare the assumption/constraint generator of a free interface.
      Both commands naming the same binary with identical variable lists
      describe one interface. When an assumption generator has exactly
      the shape (= (<sym> y1..yn) z) for a fresh symbol, the interface
      defines <sym> as an oracle function symbol.

Function sorts are written (-> <sort>+ <sort>); they may appear only in
oracle interface declarations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import (
    DuplicateOracleDefinition, ParseError, SortError, SortMismatch, UnknownLogic,
    ValueSyntaxError,
)
from .grammar import Grammar, SynthTarget
from .oracles import OracleInterface, definitional_interface
from .sexpr import Atom, SList, read_all, read_one
from .terms import (
    BOOL, INT, REAL, STRING, App, Lambda, Quant, Sort, SymKind, Term, Value, Var,
    bitvec, bool_val, bv_val, fn_sort, int_val, is_theory_symbol, real_val, str_val,
    substitute, theory_app, theory_sort, uninterpreted,
)

_LOGIC_RE = re.compile(r"(QF_)?(ALL|[A-Z]+)")
_NUMERAL_RE = re.compile(r"(0|[1-9][0-9]*)")
_DECIMAL_RE = re.compile(r"(0|[1-9][0-9]*)\.[0-9]+")


def _pos(sx):
    return sx.line, sx.col


def _err(sx, msg, cls=ParseError):
    if cls is ParseError or issubclass(cls, ParseError):
        return cls(msg, *_pos(sx))
    return cls(f"{sx.line}:{sx.col}: {msg}")


@dataclass
class Script:
    logic: Optional[str] = None
    sorts: dict = field(default_factory=dict)          # name -> Sort
    ordinary: dict = field(default_factory=dict)       # name -> (param sorts, ret)
    oracle_symbols: dict = field(default_factory=dict)  # name -> (param sorts, ret)
    interfaces: list = field(default_factory=list)     # OracleInterface, declaration order
    defines: dict = field(default_factory=dict)        # name -> Lambda | Term
    assertions: list = field(default_factory=list)
    constraints: list = field(default_factory=list)
    universal_vars: list = field(default_factory=list)  # Var, declaration order
    synth_targets: list = field(default_factory=list)   # SynthTarget
    directive: Optional[str] = None                     # "check-sat" | "check-synth"

    def definitional_interfaces(self) -> dict:
        return {i.defines_symbol: i for i in self.interfaces if i.kind == "definitional"}

    def free_interfaces(self) -> list:
        return [i for i in self.interfaces if i.kind == "free"]


class _Ctx:
    """Symbol environment for term parsing."""

    def __init__(self, script: Script):
        self.script = script
        self.scopes = []  # list[dict[str, Var]]

    def push(self, vars_):
        self.scopes.append({v.name: v for v in vars_})

    def pop(self):
        self.scopes.pop()

    def lookup_var(self, name):
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        return None


# ---------------------------------------------------------------------------
# sorts

def parse_sort(sx, script: Script) -> Sort:
    if isinstance(sx, Atom):
        t = sx.text
        if t == "Bool":
            return BOOL
        if t == "Int":
            return INT
        if t == "Real":
            return REAL
        if t == "String":
            return STRING
        if t in script.sorts:
            return script.sorts[t]
        raise _err(sx, f"unknown sort {t}", SortError)
    items = sx.items
    if len(items) == 3 and isinstance(items[0], Atom) and items[0].text == "_" \
            and isinstance(items[1], Atom) and items[1].text == "BitVec":
        try:
            return bitvec(int(items[2].text))
        except (ValueError, SortMismatch):
            raise _err(sx, "bad bit-vector width", SortError)
    if items and isinstance(items[0], Atom) and items[0].text == "->":
        if len(items) < 3:
            raise _err(sx, "function sort needs a domain and a codomain", SortError)
        return fn_sort([parse_sort(s, script) for s in items[1:-1]],
                       parse_sort(items[-1], script))
    raise _err(sx, "unknown sort", SortError)


def _parse_sorted_vars(sx, script: Script):
    if not isinstance(sx, SList):
        raise _err(sx, "expected a list of sorted variables")
    out = []
    for entry in sx.items:
        if not isinstance(entry, SList) or len(entry) != 2 or not isinstance(entry[0], Atom):
            raise _err(entry, "expected (name sort)")
        out.append(Var(entry[0].text, parse_sort(entry[1], script)))
    if len({v.name for v in out}) != len(out):
        raise _err(sx, "duplicate variable names")
    return tuple(out)


# ---------------------------------------------------------------------------
# terms

def parse_term(sx, ctx: _Ctx) -> Term:
    if isinstance(sx, Atom):
        return _parse_atom(sx, ctx)
    if len(sx) == 0:
        raise _err(sx, "empty application")
    head = sx[0]
    if isinstance(head, SList):
        if head.items and isinstance(head[0], Atom) and head[0].text == "_":
            raise _err(sx, "indexed operators are not supported")
        raise _err(sx, "application head must be a symbol")
    name = head.text
    script = ctx.script

    if name == "_":
        return _parse_indexed_value(sx)
    if name == "let":
        return _parse_let(sx, ctx)
    if name in ("forall", "exists"):
        if len(sx) != 3:
            raise _err(sx, f"malformed {name}")
        bound = _parse_sorted_vars(sx[1], script)
        ctx.push(bound)
        try:
            body = parse_term(sx[2], ctx)
        finally:
            ctx.pop()
        if body.sort != BOOL:
            raise _err(sx, "quantifier body must be Bool", SortError)
        return Quant(name, bound, body)
    if name == "lambda":
        if len(sx) != 3:
            raise _err(sx, "malformed lambda")
        params = _parse_sorted_vars(sx[1], script)
        ctx.push(params)
        try:
            body = parse_term(sx[2], ctx)
        finally:
            ctx.pop()
        return Value(fn_sort((p.sort for p in params), body.sort), Lambda(params, body))

    # literal forms (- n), (/ p q), (- (/ p q))
    lit = _try_literal_list(sx)
    if lit is not None:
        return lit

    args = [parse_term(a, ctx) for a in sx.items[1:]]

    if name == "=>":  # right-associative
        if len(args) < 2 or any(a.sort != BOOL for a in args):
            raise _err(sx, "=> needs Bool arguments", SortError)
        t = args[-1]
        for a in reversed(args[:-1]):
            t = theory_app("=>", (a, t))
        return t
    if is_theory_symbol(name) or name == "ite":
        try:
            return theory_app(name, args)
        except SortMismatch as e:
            raise _err(sx, str(e), SortError)
    if name in script.defines:
        return _expand_define(sx, name, args, script)
    rank = script.ordinary.get(name) or script.oracle_symbols.get(name)
    if rank is not None:
        return _apply_declared(sx, name, args, rank, oracle=name in script.oracle_symbols)
    if ctx.lookup_var(name) is not None:
        if args:
            raise _err(sx, f"variable {name} cannot be applied")
        return ctx.lookup_var(name)
    raise _err(sx, f"unknown symbol {name}")


def _apply_declared(sx, name, args, rank, oracle):
    params, ret = rank
    if not args and params:
        # bare reference to an n-ary symbol: a function-sorted constant
        return App(name, SymKind.ORACLE if oracle else SymKind.ORDINARY, (), fn_sort(params, ret))
    if len(args) != len(params):
        raise _err(sx, f"{name} expects {len(params)} arguments, got {len(args)}", SortError)
    for a, p in zip(args, params):
        if a.sort != p:
            raise _err(sx, f"argument of {name} has sort {a.sort!r}, expected {p!r}", SortError)
    return App(name, SymKind.ORACLE if oracle else SymKind.ORDINARY, tuple(args), ret)


def _expand_define(sx, name, args, script):
    d = script.defines[name]
    if isinstance(d, Lambda):
        if len(args) != len(d.params):
            raise _err(sx, f"{name} expects {len(d.params)} arguments", SortError)
        for a, p in zip(args, d.params):
            if a.sort != p.sort:
                raise _err(sx, f"argument of {name} has sort {a.sort!r}, expected {p.sort!r}",
                           SortError)
        return substitute(d.body, {p.name: a for p, a in zip(d.params, args)})
    if args:
        raise _err(sx, f"{name} takes no arguments", SortError)
    return d


def _parse_let(sx, ctx):
    if len(sx) != 3 or not isinstance(sx[1], SList):
        raise _err(sx, "malformed let")
    pairs = []
    for b in sx[1].items:
        if not isinstance(b, SList) or len(b) != 2 or not isinstance(b[0], Atom):
            raise _err(b, "expected (name term) in let")
        pairs.append((b[0].text, parse_term(b[1], ctx)))
    if len({n for n, _ in pairs}) != len(pairs):
        raise _err(sx, "duplicate let bindings")
    ctx.push([Var(n, t.sort) for n, t in pairs])
    try:
        body = parse_term(sx[2], ctx)
    finally:
        ctx.pop()
    return substitute(body, dict(pairs))


def _parse_atom(sx: Atom, ctx: _Ctx) -> Term:
    t = sx.text
    if sx.is_string:
        return str_val(t)
    if t == "true":
        return bool_val(True)
    if t == "false":
        return bool_val(False)
    if _NUMERAL_RE.fullmatch(t):
        return int_val(int(t))
    if _DECIMAL_RE.fullmatch(t):
        return real_val(Fraction(t))
    if t.startswith("#b"):
        bits = t[2:]
        if not bits or set(bits) - {"0", "1"}:
            raise _err(sx, f"bad binary literal {t}", ValueSyntaxError)
        return bv_val(len(bits), int(bits, 2))
    if t.startswith("#x"):
        digits = t[2:]
        try:
            return bv_val(4 * len(digits), int(digits, 16))
        except ValueError:
            raise _err(sx, f"bad hex literal {t}", ValueSyntaxError)
    v = ctx.lookup_var(t)
    if v is not None:
        return v
    script = ctx.script
    if t in script.defines:
        d = script.defines[t]
        return Value(d.sort, d) if isinstance(d, Lambda) else d
    for table, oracle in ((script.ordinary, False), (script.oracle_symbols, True)):
        if t in table:
            params, ret = table[t]
            kind = SymKind.ORACLE if oracle else SymKind.ORDINARY
            if params:
                return App(t, kind, (), fn_sort(params, ret))
            return App(t, kind, (), ret)
    raise _err(sx, f"unknown symbol {t}")


def _try_literal_list(sx) -> Optional[Value]:
    """(- 5), (/ 3 2), (- (/ 3 2)), (- 1.5) as value literals."""

    def numeral(a):
        return isinstance(a, Atom) and _NUMERAL_RE.fullmatch(a.text)

    def decimal(a):
        return isinstance(a, Atom) and _DECIMAL_RE.fullmatch(a.text)

    head = sx[0].text
    if head == "-" and len(sx) == 2:
        a = sx[1]
        if numeral(a):
            return int_val(-int(a.text))
        if decimal(a):
            return real_val(-Fraction(a.text))
        if isinstance(a, SList) and len(a) == 3 and isinstance(a[0], Atom) and a[0].text == "/":
            inner = _try_literal_list(a)
            if inner is not None:
                return real_val(-inner.payload)
    if head == "/" and len(sx) == 3 and numeral(sx[1]) and numeral(sx[2]) and int(sx[2].text):
        return real_val(Fraction(int(sx[1].text), int(sx[2].text)))
    return None


def _parse_indexed_value(sx) -> Value:
    # (_ bvN width)
    if len(sx) == 3 and isinstance(sx[1], Atom) and sx[1].text.startswith("bv"):
        try:
            return bv_val(int(sx[2].text), int(sx[1].text[2:]))
        except ValueError:
            pass
    raise _err(sx, "unsupported indexed form")


# ---------------------------------------------------------------------------
# values

def parse_value(text: str, expected: Sort) -> Value:
    """One SMT-LIB value literal of the expected sort (oracle stdout,
    backend model constants)."""
    try:
        sx = read_one(text)
    except ParseError as e:
        raise ValueSyntaxError(str(e))
    return value_from_sexpr(sx, expected)


def value_from_sexpr(sx, expected: Sort) -> Value:
    v = _value_or_none(sx)
    if v is None:
        raise _err(sx, "not a value literal", ValueSyntaxError)
    if v.sort != expected:
        # hex/binary literals carry their own width; everything else must match
        raise SortMismatch(f"value {v!r} does not have expected sort {expected!r}")
    return v


def _value_or_none(sx) -> Optional[Value]:
    if isinstance(sx, Atom):
        t = sx.text
        if sx.is_string:
            return str_val(t)
        if t == "true":
            return bool_val(True)
        if t == "false":
            return bool_val(False)
        if _NUMERAL_RE.fullmatch(t):
            return int_val(int(t))
        if _DECIMAL_RE.fullmatch(t):
            return real_val(Fraction(t))
        if t.startswith("#b") and len(t) > 2 and not set(t[2:]) - {"0", "1"}:
            return bv_val(len(t) - 2, int(t[2:], 2))
        if t.startswith("#x") and len(t) > 2:
            try:
                return bv_val(4 * (len(t) - 2), int(t[2:], 16))
            except ValueError:
                return None
        return None
    if len(sx) == 0 or not isinstance(sx[0], Atom):
        return None
    if sx[0].text == "_":
        try:
            return _parse_indexed_value(sx)
        except ParseError:
            return None
    return _try_literal_list(sx)


def values_from_text(text: str, sorts) -> list:
    """Whitespace-separated SMT-LIB values, one per expected sort."""
    nodes = read_all(text)
    if len(nodes) != len(sorts):
        raise ValueSyntaxError(f"expected {len(sorts)} values, found {len(nodes)}")
    return [value_from_sexpr(n, s) for n, s in zip(nodes, sorts)]


# ---------------------------------------------------------------------------
# scripts

def parse_script(text: str) -> Script:
    script = Script()
    ctx = _Ctx(script)
    pending = {}  # (binary, query vars, response vars) -> {"alpha": sx?, "beta": sx?}
    order = []
    for sx in read_all(text):
        if script.directive is not None:
            raise _err(sx, f"command after {script.directive}")
        if not isinstance(sx, SList) or len(sx) == 0 or not isinstance(sx[0], Atom):
            raise _err(sx, "expected a command")
        cmd = sx[0].text
        handler = _COMMANDS.get(cmd)
        if handler is None:
            raise _err(sx, f"unknown command {cmd}")
        handler(sx, script, ctx, pending, order)
    for key in order:
        _finalize_free_interface(key, pending[key], script, ctx)
    _validate(script)
    return script


def _require(sx, n):
    if len(sx) != n:
        raise _err(sx, f"{sx[0].text} expects {n - 1} arguments")


def _name_of(sx, i):
    if not isinstance(sx[i], Atom):
        raise _err(sx[i], "expected a symbol")
    return sx[i].text


def _check_fresh(sx, name, script):
    if name in script.ordinary or name in script.defines:
        raise _err(sx, f"{name} is already declared")
    if name in script.oracle_symbols:
        raise DuplicateOracleDefinition(f"{name} already has a defining oracle interface")


def _cmd_set_logic(sx, script, ctx, pending, order):
    _require(sx, 2)
    logic = _name_of(sx, 1)
    if not _LOGIC_RE.fullmatch(logic):
        raise UnknownLogic(f"unknown logic {logic}")
    script.logic = logic


def _cmd_ignore(sx, script, ctx, pending, order):
    pass


def _cmd_declare_sort(sx, script, ctx, pending, order):
    _require(sx, 3)
    name = _name_of(sx, 1)
    if sx[2].text != "0":
        raise _err(sx, "only 0-arity sorts are supported")
    _check_fresh(sx, name, script)
    script.sorts[name] = uninterpreted(name)


def _cmd_declare_const(sx, script, ctx, pending, order):
    _require(sx, 3)
    name = _name_of(sx, 1)
    _check_fresh(sx, name, script)
    script.ordinary[name] = ((), parse_sort(sx[2], script))


def _cmd_declare_fun(sx, script, ctx, pending, order):
    _require(sx, 4)
    name = _name_of(sx, 1)
    _check_fresh(sx, name, script)
    if not isinstance(sx[2], SList):
        raise _err(sx[2], "expected a sort list")
    params = tuple(parse_sort(s, script) for s in sx[2].items)
    script.ordinary[name] = (params, parse_sort(sx[3], script))


def _cmd_define_fun(sx, script, ctx, pending, order):
    _require(sx, 5)
    name = _name_of(sx, 1)
    _check_fresh(sx, name, script)
    params = _parse_sorted_vars(sx[2], script)
    ret = parse_sort(sx[3], script)
    ctx.push(params)
    try:
        body = parse_term(sx[4], ctx)
    finally:
        ctx.pop()
    if body.sort != ret:
        raise _err(sx, f"body has sort {body.sort!r}, declared {ret!r}", SortError)
    script.defines[name] = Lambda(params, body) if params else body


def _cmd_declare_oracle_fun(sx, script, ctx, pending, order):
    _require(sx, 5)
    name = _name_of(sx, 1)
    _check_fresh(sx, name, script)
    if not isinstance(sx[2], SList):
        raise _err(sx[2], "expected a sort list")
    params = tuple(parse_sort(s, script) for s in sx[2].items)
    ret = parse_sort(sx[3], script)
    if not isinstance(sx[4], Atom):
        raise _err(sx[4], "expected an executable path")
    script.oracle_symbols[name] = (params, ret)
    script.interfaces.append(definitional_interface(name, params, ret, sx[4].text))


def _cmd_oracle_gen(which):
    def handler(sx, script, ctx, pending, order):
        _require(sx, 5)
        if not isinstance(sx[1], Atom):
            raise _err(sx[1], "expected an executable path")
        binary = sx[1].text
        qvars = _parse_sorted_vars(sx[2], script)
        rvars = _parse_sorted_vars(sx[3], script)
        if {v.name for v in qvars} & {v.name for v in rvars}:
            raise _err(sx, "query and response variables must be distinct")
        key = (binary, qvars, rvars)
        for other in pending:
            if other[0] == binary and other != key:
                raise _err(sx, f"interface for {binary} re-declared with different variables")
        entry = pending.setdefault(key, {})
        if key not in order:
            order.append(key)
        if which in entry:
            raise DuplicateOracleDefinition(
                f"duplicate oracle-{which} for {binary}")
        entry[which] = sx[4]
        if which == "assumption":
            # declare a defined oracle symbol right away so later commands
            # can reference it; the interface itself is built at the end
            defines, alpha_index = _detect_definitional(sx[4], qvars, rvars, script)
            if defines is not None:
                script.oracle_symbols[defines] = (
                    tuple(v.sort for v in qvars), rvars[alpha_index].sort)
                entry["defines"] = (defines, alpha_index)
    return handler


def _finalize_free_interface(key, entry, script: Script, ctx: _Ctx):
    binary, qvars, rvars = key
    alpha_sx = entry.get("assumption")
    beta_sx = entry.get("constraint")
    defines, alpha_index = entry.get("defines", (None, None))
    alpha = beta = None
    ctx.push(qvars + rvars)
    try:
        if alpha_sx is not None:
            alpha = parse_term(alpha_sx, ctx)
            if alpha.sort != BOOL:
                raise _err(alpha_sx, "assumption generator must be Bool", SortError)
        if beta_sx is not None:
            beta = parse_term(beta_sx, ctx)
            if beta.sort != BOOL:
                raise _err(beta_sx, "constraint generator must be Bool", SortError)
    finally:
        ctx.pop()
    name = defines if defines is not None else f"iface:{binary}"
    script.interfaces.append(OracleInterface(
        name=name, query_domain=qvars, response_codomain=rvars,
        assumption_gen=alpha, constraint_gen=beta, executable=binary,
        kind="definitional" if defines is not None else "free",
        defines_symbol=defines, alpha_value_index=alpha_index))


def _detect_definitional(alpha_sx, qvars, rvars, script: Script):
    """Recognize (= (<sym> y1..yn) z) with a fresh head symbol: the shape
    that makes an interface define an oracle function symbol."""
    if not isinstance(alpha_sx, SList) or len(alpha_sx) != 3:
        return None, None
    if not (isinstance(alpha_sx[0], Atom) and alpha_sx[0].text == "="):
        return None, None
    app, rhs = alpha_sx[1], alpha_sx[2]
    if not (isinstance(app, SList) and len(app) == 1 + len(qvars)
            and isinstance(app[0], Atom)):
        return None, None
    if [a.text if isinstance(a, Atom) else None for a in app.items[1:]] \
            != [v.name for v in qvars]:
        return None, None
    if not isinstance(rhs, Atom) or rhs.text not in {v.name for v in rvars}:
        return None, None
    sym = app[0].text
    if sym in script.oracle_symbols:
        raise DuplicateOracleDefinition(f"{sym} already has a defining oracle interface")
    if sym in script.ordinary or sym in script.defines or is_theory_symbol(sym):
        return None, None
    for i, v in enumerate(rvars):
        if v.name == rhs.text:
            return sym, i
    return None, None


def _cmd_assert(sx, script, ctx, pending, order):
    _require(sx, 2)
    t = parse_term(sx[1], ctx)
    if t.sort != BOOL:
        raise _err(sx, "assertion must be Bool", SortError)
    script.assertions.append(t)


def _cmd_constraint(sx, script, ctx, pending, order):
    _require(sx, 2)
    ctx.push(script.universal_vars)
    try:
        t = parse_term(sx[1], ctx)
    finally:
        ctx.pop()
    if t.sort != BOOL:
        raise _err(sx, "constraint must be Bool", SortError)
    script.constraints.append(t)


def _cmd_declare_var(sx, script, ctx, pending, order):
    _require(sx, 3)
    name = _name_of(sx, 1)
    if any(v.name == name for v in script.universal_vars):
        raise _err(sx, f"variable {name} already declared")
    script.universal_vars.append(Var(name, parse_sort(sx[2], script)))


def _cmd_synth_fun(sx, script, ctx, pending, order):
    if len(sx) not in (4, 6):
        raise _err(sx, "synth-fun expects (name params ret) with an optional grammar")
    name = _name_of(sx, 1)
    _check_fresh(sx, name, script)
    params = _parse_sorted_vars(sx[2], script)
    ret = parse_sort(sx[3], script)
    grammar = None
    if len(sx) == 6:
        grammar = _parse_grammar(sx[4], sx[5], params, ret, script, ctx)
    script.ordinary[name] = (tuple(p.sort for p in params), ret)
    script.synth_targets.append(SynthTarget(name, params, ret, grammar))


def _parse_grammar(decl_sx, rules_sx, params, ret, script, ctx) -> Grammar:
    if not isinstance(decl_sx, SList) or not isinstance(rules_sx, SList):
        raise _err(decl_sx, "malformed grammar")
    nts = []
    for d in decl_sx.items:
        if not isinstance(d, SList) or len(d) != 2 or not isinstance(d[0], Atom):
            raise _err(d, "expected (Nonterminal Sort)")
        nts.append((d[0].text, parse_sort(d[1], script)))
    if not nts:
        raise _err(decl_sx, "grammar needs at least one nonterminal")
    if nts[0][1] != ret:
        raise _err(decl_sx, "start symbol sort must equal the synth-fun codomain", SortError)
    nt_vars = [Var(n, s) for n, s in nts]
    if {n for n, _ in nts} & {p.name for p in params}:
        raise _err(decl_sx, "nonterminal names must not shadow parameters")
    rules = {}
    for group in rules_sx.items:
        if not isinstance(group, SList) or len(group) != 3 or not isinstance(group[0], Atom):
            raise _err(group, "expected (Nonterminal Sort (production*))")
        gname = group[0].text
        gsort = parse_sort(group[1], script)
        if (gname, gsort) not in nts:
            raise _err(group, f"rule group for undeclared nonterminal {gname}")
        prods = []
        ctx.push(list(params) + nt_vars)
        try:
            for p in group[2].items:
                t = parse_term(p, ctx)
                if t.sort != gsort:
                    raise _err(p, f"production has sort {t.sort!r}, expected {gsort!r}", SortError)
                prods.append(t)
        finally:
            ctx.pop()
        rules[gname] = tuple(prods)
    for n, _s in nts:
        if n not in rules:
            raise _err(rules_sx, f"no productions for nonterminal {n}")
    return Grammar(tuple(nts), rules)


def _cmd_directive(which):
    def handler(sx, script, ctx, pending, order):
        _require(sx, 1)
        script.directive = which
    return handler


_COMMANDS = {
    "set-logic": _cmd_set_logic,
    "set-option": _cmd_ignore,
    "set-info": _cmd_ignore,
    "exit": _cmd_ignore,
    "declare-sort": _cmd_declare_sort,
    "declare-const": _cmd_declare_const,
    "declare-fun": _cmd_declare_fun,
    "define-fun": _cmd_define_fun,
    "declare-oracle-fun": _cmd_declare_oracle_fun,
    "oracle-assumption": _cmd_oracle_gen("assumption"),
    "oracle-constraint": _cmd_oracle_gen("constraint"),
    "assert": _cmd_assert,
    "constraint": _cmd_constraint,
    "declare-var": _cmd_declare_var,
    "synth-fun": _cmd_synth_fun,
    "check-sat": _cmd_directive("check-sat"),
    "check-synth": _cmd_directive("check-synth"),
}


def _validate(script: Script):
    if script.directive is None:
        raise ParseError("no final directive (check-sat or check-synth)")
    if script.directive == "check-sat":
        if script.synth_targets:
            raise ParseError("synth-fun is only allowed with check-synth")
        if script.constraints or script.universal_vars:
            raise ParseError("constraint/declare-var are only allowed with check-synth")
    else:
        if not script.synth_targets:
            raise ParseError("check-synth needs at least one synth-fun")
        if script.assertions:
            raise ParseError("assert is only allowed with check-sat; use constraint")
    defined = [i.defines_symbol for i in script.interfaces if i.kind == "definitional"]
    for name in script.oracle_symbols:
        if defined.count(name) != 1:
            raise DuplicateOracleDefinition(
                f"oracle symbol {name} needs exactly one defining interface, "
                f"found {defined.count(name)}")


# ---------------------------------------------------------------------------
# convenience for tests and engines

def parse_term_string(text: str, script: Optional[Script] = None, scope=()) -> Term:
    ctx = _Ctx(script or Script())
    ctx.push(scope)
    return parse_term(read_one(text), ctx)


def parse_define_fun(text: str, script: Optional[Script] = None):
    """A standalone (define-fun name params ret body); returns (name, Lambda)."""
    sx = read_one(text)
    if not (isinstance(sx, SList) and len(sx) == 5 and isinstance(sx[0], Atom)
            and sx[0].text == "define-fun" and isinstance(sx[1], Atom)):
        raise ParseError("expected a define-fun")
    script = script or Script()
    params = _parse_sorted_vars(sx[2], script)
    ret = parse_sort(sx[3], script)
    ctx = _Ctx(script)
    ctx.push(params)
    try:
        body = parse_term(sx[4], ctx)
    finally:
        ctx.pop()
    if body.sort != ret:
        raise _err(sx, f"body has sort {body.sort!r}, declared {ret!r}", SortError)
    if not params:
        raise _err(sx, "a candidate function needs parameters")
    return sx[1].text, Lambda(params, body)
