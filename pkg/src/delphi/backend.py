"""Client for an external SMT-LIB solver process.

Every query writes a complete fresh benchmark to the solver's stdin and
reads the verdict (and model) from its stdout; there is no incremental
state. Identical inputs produce byte-identical benchmarks.

Oracle applications whose arguments include function-sorted values (a
candidate passed to a correctness oracle) cannot be expressed in
SMT-LIB; they are abstracted to fresh constants before emission, one
constant per distinct ground application.
"""

from __future__ import annotations

import hashlib
import itertools
import os
import shlex
import subprocess
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

from .errors import BackendCrash, BackendTimeout, ModelParseError
from .fold import partial_evaluate
from .parser import Script, _Ctx, parse_term, parse_sort, _parse_sorted_vars
from .printer import print_sort, print_term
from .sexpr import Atom, SList, read_all
from .terms import (
    BOOL, App, Lambda, Sort, SymKind, Term, Value, Var, bv_val, children,
    fn_sort, int_val, real_val, str_val, substitute, with_children,
)


class Verdict(Enum):
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"


@dataclass
class BackendConfig:
    command: str
    logic: str = "ALL"
    timeout: Optional[float] = None
    persist_dir: Optional[str] = None

    def __post_init__(self):
        if not self.command.strip():
            raise ValueError("backend command must be non-empty")


@dataclass
class Model:
    """Backend model: symbol name to value or function definition."""

    entries: dict = field(default_factory=dict)  # name -> Value | Lambda | Term

    def restrict(self, names) -> "Model":
        names = set(names)
        return Model({k: v for k, v in self.entries.items() if k in names})

    def __contains__(self, name):
        return name in self.entries

    def closure(self, name, max_rounds: int = 50):
        """The entry with all references to other model entries resolved."""
        entry = self.entries[name]
        params = entry.params if isinstance(entry, Lambda) else ()
        body = entry.body if isinstance(entry, Lambda) else entry
        if isinstance(body, Value):
            return Value(Lambda(params, body).sort, Lambda(params, body)) if params else body
        binding = {k: v for k, v in self.entries.items() if k != name}
        for _ in range(max_rounds):
            new = partial_evaluate(substitute(body, binding))
            if new == body:
                break
            body = new
        else:
            raise ModelParseError(f"model entry {name} does not resolve to a definition")
        if params:
            return Value(Lambda(params, body).sort, Lambda(params, body))
        return body


def default_value(sort: Sort) -> Value:
    if sort == BOOL:
        return Value(BOOL, False)
    if sort.kind == "Int":
        return int_val(0)
    if sort.kind == "Real":
        return real_val(Fraction(0))
    if sort.kind == "BitVec":
        return bv_val(sort.width, 0)
    if sort.kind == "String":
        return str_val("")
    if sort.kind == "Fn":
        params = tuple(Var(f"p{i + 1}", s) for i, s in enumerate(sort.domain))
        return Value(sort, Lambda(params, default_value(sort.codomain)))
    raise ModelParseError(f"no default value for sort {sort!r}")


def eval_in_model(model: Model, name: str, args, rank, warn=None) -> Value:
    """Apply a model entry to values; a symbol the backend omitted gets the
    sort's default value (and is reported through warn)."""
    params, ret = rank
    if name not in model.entries:
        if warn:
            warn(f"model omits {name}; using default {print_term(default_value(ret))}")
        closed = default_value(fn_sort(params, ret)) if params else default_value(ret)
    else:
        closed = model.closure(name)
    if not params:
        if not isinstance(closed, Value):
            raise ModelParseError(f"model entry {name} is not a value")
        return closed
    lam = closed.payload
    out = partial_evaluate(substitute(lam.body, {
        p.name: a for p, a in zip(lam.params, args)}))
    if not isinstance(out, Value):
        raise ModelParseError(f"applying model entry {name} did not yield a value")
    return out


def model_binding(model: Model, ranks: dict, warn=None) -> dict:
    """Substitution {symbol -> closed value/definition} for every declared
    ordinary symbol, inserting per-sort defaults for omitted ones."""
    out = {}
    for name, (params, ret) in ranks.items():
        if name in model.entries:
            closed = model.closure(name)
        else:
            if warn:
                warn(f"model omits {name}; using the default value of its sort")
            closed = default_value(fn_sort(params, ret)) if params else default_value(ret)
        out[name] = closed.payload if (params and isinstance(closed, Value)) else closed
    return out


# ---------------------------------------------------------------------------
# higher-order abstraction

_ABS_PREFIX = "oapp!"


def abstract_fn_applications(formula: Term):
    """Replace oracle applications with function-sorted value arguments by
    fresh constants (one per distinct application). Returns the rewritten
    formula and the fresh declarations."""
    table: dict = {}
    decls: list = []

    def walk(t: Term) -> Term:
        new_children = tuple(walk(c) for c in children(t))
        t = with_children(t, new_children)
        if isinstance(t, App) and t.kind is SymKind.ORACLE and any(
                a.sort.kind == "Fn" for a in t.args):
            key = t
            if key not in table:
                name = f"{_ABS_PREFIX}{t.name}!{len(table)}"
                table[key] = App(name, SymKind.ORDINARY, (), t.sort)
                decls.append((name, (), t.sort))
            return table[key]
        return t

    return walk(formula), decls


# ---------------------------------------------------------------------------
# emission

def emit_benchmark(cfg: BackendConfig, declarations, formula: Term) -> str:
    """declarations: iterable of (name, param sorts, ret sort)."""
    formula, extra = abstract_fn_applications(formula)
    lines = [f"(set-logic {cfg.logic})", "(set-option :produce-models true)"]
    for name, params, ret in itertools.chain(declarations, extra):
        if any(s.kind == "Fn" for s in params) or ret.kind == "Fn":
            continue  # function-sorted symbols were abstracted away
        ps = " ".join(print_sort(s) for s in params)
        lines.append(f"(declare-fun {name} ({ps}) {print_sort(ret)})")
    lines.append(f"(assert {print_term(formula)})")
    lines.append("(check-sat)")
    lines.append("(get-model)")
    return "\n".join(lines) + "\n"


_psc = itertools.count()


def check_sat(cfg: BackendConfig, declarations, formula: Term):
    """Run one query. Returns (verdict, model-or-None)."""
    bench = emit_benchmark(cfg, declarations, formula)
    if cfg.persist_dir:
        os.makedirs(cfg.persist_dir, exist_ok=True)
        tag = hashlib.sha256(bench.encode()).hexdigest()[:12]
        with open(os.path.join(cfg.persist_dir, f"query-{next(_psc):04d}-{tag}.smt2"), "w") as fh:
            fh.write(bench)
    try:
        proc = subprocess.run(
            shlex.split(cfg.command), input=bench, capture_output=True,
            text=True, timeout=cfg.timeout)
    except subprocess.TimeoutExpired:
        raise BackendTimeout(f"backend exceeded {cfg.timeout}s")
    except OSError as e:
        raise BackendCrash(f"cannot run backend '{cfg.command}': {e}")
    verdict, model = parse_backend_output(proc.stdout, declarations)
    if verdict is None:
        raise BackendCrash(
            f"backend produced no verdict (exit {proc.returncode}): "
            f"{(proc.stdout + proc.stderr).strip()[:500]}")
    return verdict, model


def parse_backend_output(text: str, declarations):
    verdict = None
    rest = []
    for line in text.splitlines():
        word = line.strip()
        if verdict is None:
            if word in ("sat", "unsat", "unknown"):
                verdict = Verdict(word)
            elif word.startswith("(error") or word == "":
                continue
            else:
                rest.append(line)
        else:
            rest.append(line)
    if verdict is None:
        return None, None
    if verdict is not Verdict.SAT:
        return verdict, None
    return verdict, parse_model("\n".join(rest), declarations)


def parse_model(text: str, declarations) -> Model:
    """Parse (model? (define-fun ...)*) output into a Model."""
    cut = text.find("(error")
    if cut >= 0:
        text = text[:cut]
    try:
        nodes = read_all(text)
    except Exception as e:
        raise ModelParseError(f"cannot read model: {e}")
    defs = []
    for node in nodes:
        if isinstance(node, SList):
            items = list(node.items)
            if items and isinstance(items[0], Atom) and items[0].text == "model":
                items = items[1:]
            defs.extend(items)
            break
    script = Script()
    ranks = {name: (tuple(params), ret) for name, params, ret in declarations}
    headers = []
    for d in defs:
        if not (isinstance(d, SList) and len(d) == 5 and isinstance(d[0], Atom)
                and d[0].text == "define-fun" and isinstance(d[1], Atom)):
            raise ModelParseError(f"unexpected model entry: {d}")
        name = d[1].text
        params = _parse_sorted_vars(d[2], script)
        ret = parse_sort(d[3], script)
        headers.append((name, params, ret, d[4]))
        script.ordinary[name] = (tuple(p.sort for p in params), ret)
    model = Model()
    ctx = _Ctx(script)
    for name, params, ret, body_sx in headers:
        ctx.push(params)
        try:
            body = partial_evaluate(parse_term(body_sx, ctx))
        except Exception as e:
            raise ModelParseError(f"bad body for model entry {name}: {e}")
        finally:
            ctx.pop()
        if body.sort != ret:
            raise ModelParseError(f"model entry {name} has sort {body.sort!r}, not {ret!r}")
        if name in ranks:
            dparams, dret = ranks[name]
            if dret != ret or tuple(p.sort for p in params) != dparams:
                raise ModelParseError(f"model entry {name} does not match its declaration")
        model.entries[name] = Lambda(params, body) if params else body
    return model
