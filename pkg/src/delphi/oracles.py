"""Oracle interfaces, the process-call protocol, memoization and the
assumption store.

Wire protocol: one process per query; each input is one argv entry in
SMT-LIB value syntax (function-sorted inputs as a complete define-fun);
the response is whitespace-separated SMT-LIB values on stdout, one per
response variable; exit code 0 means success.
"""

from __future__ import annotations

import os
import shlex
import subprocess
import threading
import time
from dataclasses import dataclass
from typing import Optional

from .errors import (
    FunctionalViolation, MalformedResponse, OracleCrash, OracleTimeout, SortMismatch,
)
from .fold import partial_evaluate
from .printer import print_define_fun, print_value
from .terms import App, Sort, SymKind, Term, Value, Var, free_names, substitute


@dataclass(frozen=True)
class OracleInterface:
    """Query domain, response co-domain, generators and a bound executable."""

    name: str
    query_domain: tuple  # tuple[Var, ...]
    response_codomain: tuple  # tuple[Var, ...]
    assumption_gen: Optional[Term]
    constraint_gen: Optional[Term]
    executable: str
    kind: str  # "definitional" | "free"
    defines_symbol: Optional[str] = None  # oracle symbol pinned by the assumption
    alpha_value_index: Optional[int] = None  # response slot equated with the symbol

    def __post_init__(self):
        names = {v.name for v in self.query_domain} | {v.name for v in self.response_codomain}
        for gen in (self.assumption_gen, self.constraint_gen):
            if gen is not None and not free_names(gen) <= names:
                raise SortMismatch(
                    f"interface {self.name}: generator has variables outside the query/response lists")
        if self.kind == "definitional" and (
                self.defines_symbol is None or self.alpha_value_index is None):
            raise SortMismatch(f"interface {self.name}: definitional interface lacks its equality shape")

    @property
    def query_sorts(self) -> tuple:
        return tuple(v.sort for v in self.query_domain)

    @property
    def response_sorts(self) -> tuple:
        return tuple(v.sort for v in self.response_codomain)


def definitional_interface(symbol: str, param_sorts, ret_sort: Sort, executable: str) -> OracleInterface:
    """The interface declared by (declare-oracle-fun symbol (sorts) ret exe):
    query vars y1..yn, one response var z, assumption (= (symbol y*) z)."""
    ys = tuple(Var(f"y{i + 1}", s) for i, s in enumerate(param_sorts))
    z = Var("z", ret_sort)
    alpha = App("=", SymKind.THEORY,
                (App(symbol, SymKind.ORACLE, ys, ret_sort), z), Sort("Bool"))
    return OracleInterface(
        name=symbol, query_domain=ys, response_codomain=(z,),
        assumption_gen=alpha, constraint_gen=None, executable=executable,
        kind="definitional", defines_symbol=symbol, alpha_value_index=0)


def instantiate_generators(iface: OracleInterface, inputs, outputs):
    """alpha and beta instantiated at concrete inputs/outputs, partially
    evaluated; absent generators yield None."""
    binding = {}
    for var, val in zip(iface.query_domain, inputs):
        binding[var.name] = val
    for var, val in zip(iface.response_codomain, outputs):
        binding[var.name] = val
    alpha = beta = None
    if iface.assumption_gen is not None:
        alpha = partial_evaluate(substitute(iface.assumption_gen, binding))
    if iface.constraint_gen is not None:
        beta = partial_evaluate(substitute(iface.constraint_gen, binding))
    return alpha, beta


@dataclass
class OracleCallRecord:
    interface: str
    inputs: tuple
    outputs: tuple
    wall_time: float
    spawned: bool  # False when served from the memo


class AssumptionSet:
    """Equalities theta(inputs) ~ value, keyed by (symbol, inputs).

    Doubles as the call memo for definitional oracles. At most one value
    per key; a conflicting insert raises FunctionalViolation. Reads and
    read-check-inserts are atomic.
    """

    def __init__(self, entries=None):
        self._table = dict(entries or {})
        self._lock = threading.Lock()

    def lookup(self, symbol: str, inputs) -> Optional[Value]:
        return self._table.get((symbol, tuple(inputs)))

    def add(self, symbol: str, inputs, value: Value) -> bool:
        """Insert; returns True if the entry is new."""
        key = (symbol, tuple(inputs))
        with self._lock:
            old = self._table.get(key)
            if old is None:
                self._table[key] = value
                return True
        if old != value:
            raise FunctionalViolation(
                f"oracle {symbol} answered {print_value(value)} on "
                f"{[print_value(v) for v in inputs]} but previously {print_value(old)}")
        return False

    def copy(self) -> "AssumptionSet":
        return AssumptionSet(self._table)

    def items(self):
        return list(self._table.items())

    def __len__(self):
        return len(self._table)

    def to_terms(self) -> list:
        """The assumption conjunction as equality terms, insertion-ordered."""
        out = []
        for (symbol, inputs), value in self._table.items():
            app = App(symbol, SymKind.ORACLE, inputs, value.sort)
            out.append(App("=", SymKind.THEORY, (app, value), Sort("Bool")))
        return out


def encode_input(value: Value, fn_name: str = "f") -> str:
    """One argv entry for a query input."""
    if value.sort.kind == "Fn":
        return print_define_fun(fn_name, value.payload)
    return print_value(value)


class OracleRuntime:
    """Spawns oracle executables, memoizes definitional calls, keeps the
    call trace. Safe for concurrent callers; duplicate concurrent spawns
    for one key must agree or FunctionalViolation is raised."""

    def __init__(self, timeout: float = 10.0, seed: int = 0, base_dir: Optional[str] = None):
        self.timeout = timeout
        self.seed = seed
        self.base_dir = base_dir  # oracle paths resolve relative to this
        self.records: list = []
        self._memo: dict = {}
        self._lock = threading.Lock()
        self.spawn_counts: dict = {}

    def call(self, iface: OracleInterface, inputs) -> tuple:
        inputs = tuple(inputs)
        if len(inputs) != len(iface.query_domain):
            raise SortMismatch(f"oracle {iface.name} expects {len(iface.query_domain)} inputs")
        for v, var in zip(inputs, iface.query_domain):
            if v.sort != var.sort:
                raise SortMismatch(
                    f"oracle {iface.name}: input {print_value(v)} is not of sort {var.sort!r}")
        key = (iface.name, inputs)
        if iface.kind == "definitional":
            with self._lock:
                hit = self._memo.get(key)
            if hit is not None:
                self.records.append(OracleCallRecord(iface.name, inputs, hit, 0.0, spawned=False))
                return hit
        outputs = self._spawn(iface, inputs)
        if iface.kind == "definitional":
            with self._lock:
                prior = self._memo.get(key)
                if prior is None:
                    self._memo[key] = outputs
            if prior is not None and prior != outputs:
                raise FunctionalViolation(
                    f"oracle {iface.name} is not functional on "
                    f"{[print_value(v) for v in inputs]}")
        return outputs

    def _spawn(self, iface: OracleInterface, inputs) -> tuple:
        argv = shlex.split(iface.executable)
        if self.base_dir:
            argv = [os.path.normpath(os.path.join(self.base_dir, a))
                    if a.startswith(("./", "../")) else a for a in argv]
        fn_name = iface.defines_symbol or "f"
        argv += [encode_input(v, fn_name) for v in inputs]
        env = dict(os.environ, DELPHI_ORACLE_SEED=str(self.seed))
        start = time.monotonic()
        try:
            proc = subprocess.run(
                argv, capture_output=True, text=True, timeout=self.timeout, env=env)
        except subprocess.TimeoutExpired:
            raise OracleTimeout(f"oracle {iface.name} exceeded {self.timeout}s")
        except OSError as e:
            raise OracleCrash(f"cannot run oracle {iface.name}: {e}")
        elapsed = time.monotonic() - start
        if proc.returncode != 0:
            raise OracleCrash(
                f"oracle {iface.name} exited {proc.returncode}: {proc.stderr.strip()}")
        outputs = self._decode(iface, proc.stdout)
        with self._lock:
            self.spawn_counts[iface.name] = self.spawn_counts.get(iface.name, 0) + 1
        self.records.append(OracleCallRecord(iface.name, inputs, outputs, elapsed, spawned=True))
        return outputs

    def _decode(self, iface: OracleInterface, stdout: str) -> tuple:
        from .parser import values_from_text  # local import to avoid a cycle

        try:
            values = values_from_text(stdout, iface.response_sorts)
        except Exception as e:
            raise MalformedResponse(f"oracle {iface.name}: {e}")
        return tuple(values)
