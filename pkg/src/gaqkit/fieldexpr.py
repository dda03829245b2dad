"""Space-time field expressions: parsing, printing, evaluation, derivatives.

Grammar (whitespace ignored)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?          # right associative
    atom    := number | name | name '(' expr ')' | '(' expr ')'
    number  := digits ['.' digits] [('e'|'E') ['+'|'-'] digits]
    name    := [a-zA-Z_][a-zA-Z0-9_]*

``t, x1, x2, x3`` are coordinates; the function names are sin, cos, exp,
sqrt and log; every other name is a parameter bound at evaluation time.
Unary minus binds tighter than * and / but looser than ^, so ``-B0/2*x2``
is ((-B0)/2)*x2 and ``-x1^2`` is -(x1^2).
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Mapping, Sequence

__all__ = [
    "COORDINATES",
    "FUNCTIONS",
    "Expr",
    "Const",
    "Var",
    "Param",
    "Unary",
    "Binary",
    "ExprSyntaxError",
    "EvalError",
    "FieldSpecError",
    "parse",
    "to_text",
    "evaluate",
    "compile_expr",
    "differentiate",
    "parameters",
    "FieldSpec",
    "vector_ops",
    "curl",
    "gradient",
]

COORDINATES = ("t", "x1", "x2", "x3")
FUNCTIONS = ("sin", "cos", "exp", "sqrt", "log")


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class EvalError(ArithmeticError):
    def __init__(self, message: str, node=None, overflow: bool = False):
        loc = f" (node {to_text(node)!r} at offset {node.pos})" if node is not None and node.pos is not None else ""
        super().__init__(message + loc)
        self.node = node
        self.overflow = overflow  # float range exceeded, as opposed to a domain error


class FieldSpecError(ValueError):
    pass


# -- tree ----------------------------------------------------------------------

@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction
    text: str | None = field(default=None, compare=False)
    pos: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Var(Expr):
    name: str
    pos: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Param(Expr):
    name: str
    pos: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Unary(Expr):
    op: str  # neg, sin, cos, exp, sqrt, log
    arg: Expr
    pos: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Binary(Expr):
    op: str  # add, sub, mul, div, pow
    left: Expr
    right: Expr
    pos: int | None = field(default=None, compare=False)


ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))


# -- parser --------------------------------------------------------------------

def _tokenize(text: str):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    while k < n and text[k].isdigit():
                        k += 1
                    j = k
            toks.append(("num", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("name", text[i:j], i))
            i = j
        elif ch in "+-*/^()":
            toks.append((ch, ch, i))
            i += 1
        else:
            raise ExprSyntaxError(f"unexpected character {ch!r}", i)
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ExprSyntaxError(f"expected {kind!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        left = self.term()
        while self.peek()[0] in "+-":
            op, _, pos = self.take()
            left = Binary("add" if op == "+" else "sub", left, self.term(), pos)
        return left

    def term(self):
        left = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.take()
            left = Binary("mul" if op == "*" else "div", left, self.unary(), pos)
        return left

    def unary(self):
        if self.peek()[0] == "-":
            pos = self.take()[2]
            return Unary("neg", self.unary(), pos)
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            pos = self.take()[2]
            return Binary("pow", base, self.unary(), pos)
        return base

    def atom(self):
        kind, text, pos = self.peek()
        if kind == "num":
            self.take()
            return Const(Fraction(text), text, pos)
        if kind == "name":
            self.take()
            if text in FUNCTIONS:
                self.take("(")
                arg = self.expr()
                self.take(")")
                return Unary(text, arg, pos)
            if self.peek()[0] == "(":
                raise ExprSyntaxError(f"unknown function {text!r}", pos)
            if text in COORDINATES:
                return Var(text, pos)
            return Param(text, pos)
        if kind == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        if kind == "end":
            raise ExprSyntaxError("unexpected end of input", pos)
        raise ExprSyntaxError(f"unexpected {text!r}", pos)


def parse(text: str, params: Sequence[str] | None = None) -> Expr:
    """Parse an expression; with ``params`` given, other free names are errors."""
    p = _Parser(text)
    e = p.expr()
    kind, tok, pos = p.peek()
    if kind != "end":
        raise ExprSyntaxError(f"unexpected {tok!r}", pos)
    if params is not None:
        for node in _walk(e):
            if isinstance(node, Param) and node.name not in params:
                raise ExprSyntaxError(f"unknown identifier {node.name!r}", node.pos or 0)
    return e


def _walk(e: Expr):
    yield e
    if isinstance(e, Unary):
        yield from _walk(e.arg)
    elif isinstance(e, Binary):
        yield from _walk(e.left)
        yield from _walk(e.right)


def parameters(e: Expr) -> set[str]:
    return {n.name for n in _walk(e) if isinstance(n, Param)}


# -- printer -------------------------------------------------------------------

_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4}
_SYM = {"add": "+", "sub": "-", "mul": "*", "div": "/", "pow": "^"}


def _const_text(c: Const) -> str:
    if c.text is not None:
        return c.text
    v = c.value
    if v.denominator == 1:
        return str(v.numerator) if v >= 0 else f"-{-v.numerator}"
    return f"{v.numerator}/{v.denominator}"


def _prec(e: Expr) -> int:
    if isinstance(e, Binary):
        return _PREC[e.op]
    if isinstance(e, Unary) and e.op == "neg":
        return _PREC["neg"]
    if isinstance(e, Const):
        v = e.value
        if e.text is None and v > 0 and v.denominator != 1:
            return 2
    return 5


def to_text(e: Expr) -> str:
    """Canonical text with the minimum parentheses needed to parse back to ``e``."""
    if isinstance(e, Const):
        s = _const_text(e)
        return f"({s})" if e.value < 0 and e.text is None else s
    if isinstance(e, (Var, Param)):
        return e.name
    if isinstance(e, Unary):
        if e.op == "neg":
            inner = to_text(e.arg)
            # the operand of unary minus is itself a unary (or power)
            return "-" + (inner if _prec(e.arg) >= _PREC["neg"] else f"({inner})")
        return f"{e.op}({to_text(e.arg)})"
    p = _PREC[e.op]
    lt, rt = to_text(e.left), to_text(e.right)
    lp, rp = _prec(e.left), _prec(e.right)
    if e.op == "pow":
        if lp <= p:
            lt = f"({lt})"
        if rp < _PREC["neg"]:
            rt = f"({rt})"
    else:
        if lp < p:
            lt = f"({lt})"
        if rp <= p:
            rt = f"({rt})"
    return f"{lt} {_SYM[e.op]} {rt}"


# -- constructors with literal folding ----------------------------------------------

def _c(v) -> Const:
    return Const(Fraction(v))


def _is(e, v) -> bool:
    return isinstance(e, Const) and e.value == v


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return _c(-a.value)
    if isinstance(a, Unary) and a.op == "neg":
        return a.arg
    return Unary("neg", a)


def add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return _c(a.value + b.value)
    if _is(a, 0):
        return b
    if _is(b, 0):
        return a
    return Binary("add", a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return _c(a.value - b.value)
    if _is(b, 0):
        return a
    if _is(a, 0):
        return neg(b)
    return Binary("sub", a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return _c(a.value * b.value)
    if _is(a, 0) or _is(b, 0):
        return ZERO
    if _is(a, 1):
        return b
    if _is(b, 1):
        return a
    if _is(a, -1):
        return neg(b)
    if _is(b, -1):
        return neg(a)
    return Binary("mul", a, b)


def div(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const) and b.value != 0:
        return _c(a.value / b.value)
    if _is(a, 0) and not _is(b, 0):
        return ZERO
    if _is(b, 1):
        return a
    return Binary("div", a, b)


def power(a: Expr, b: Expr) -> Expr:
    if _is(b, 0):
        return ONE
    if _is(b, 1):
        return a
    if isinstance(a, Const) and isinstance(b, Const) and b.value.denominator == 1 and (a.value != 0 or b.value > 0):
        return _c(a.value ** b.value.numerator)
    return Binary("pow", a, b)


def func(op: str, a: Expr) -> Expr:
    if isinstance(a, Const) and a.value == 0:
        if op in ("sin", "sqrt"):
            return ZERO
        if op in ("cos", "exp"):
            return ONE
    return Unary(op, a)


# -- evaluation ----------------------------------------------------------------

def _point_map(point) -> dict:
    if isinstance(point, Mapping):
        return dict(point)
    vals = list(point)
    return {n: v for n, v in zip(COORDINATES, vals) if v is not None}


def evaluate(e: Expr | str, point=(0.0, 0.0, 0.0, 0.0), params: Mapping[str, float] | None = None) -> float:
    """IEEE double value at ``point`` = (t, x1, x2, x3) or a name -> value map."""
    if isinstance(e, str):
        e = parse(e)
    env = _point_map(point)
    params = params or {}
    return _eval(e, env, params)


def _eval(e, env, params) -> float:
    if isinstance(e, Const):
        return float(e.value)
    if isinstance(e, Var):
        if e.name not in env:
            raise EvalError(f"coordinate {e.name} not supplied", e)
        return float(env[e.name])
    if isinstance(e, Param):
        if e.name not in params:
            raise EvalError(f"parameter {e.name} is not bound", e)
        return float(params[e.name])
    if isinstance(e, Unary):
        a = _eval(e.arg, env, params)
        if e.op == "neg":
            return -a
        if e.op == "sqrt":
            if a < 0:
                raise EvalError(f"sqrt of negative value {a!r}", e)
            return math.sqrt(a)
        if e.op == "log":
            if a <= 0:
                raise EvalError(f"log of non-positive value {a!r}", e)
            return math.log(a)
        try:
            return getattr(math, e.op)(a)
        except OverflowError:
            raise EvalError(f"{e.op} overflow", e, overflow=True) from None
    a = _eval(e.left, env, params)
    b = _eval(e.right, env, params)
    if e.op == "add":
        return a + b
    if e.op == "sub":
        return a - b
    if e.op == "mul":
        return a * b
    if e.op == "div":
        if b == 0:
            raise EvalError("division by zero", e)
        return a / b
    try:
        r = a ** b
    except (OverflowError, ZeroDivisionError) as exc:
        raise EvalError(f"power failed: {exc}", e, overflow=isinstance(exc, OverflowError)) from None
    if isinstance(r, complex):
        raise EvalError("negative base with fractional exponent", e)
    return r


def _py(e: Expr, params: Mapping[str, float]) -> str:
    if isinstance(e, Const):
        return repr(float(e.value))
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Param):
        if e.name not in params:
            raise EvalError(f"parameter {e.name} is not bound", e)
        return repr(float(params[e.name]))
    if isinstance(e, Unary):
        if e.op == "neg":
            return f"(-{_py(e.arg, params)})"
        return f"_m.{e.op}({_py(e.arg, params)})"
    sym = {"add": "+", "sub": "-", "mul": "*", "div": "/", "pow": "**"}[e.op]
    return f"({_py(e.left, params)} {sym} {_py(e.right, params)})"


def compile_expr(e: Expr | str, params: Mapping[str, float] | None = None) -> Callable[[float, float, float, float], float]:
    """Fast evaluator f(t, x1, x2, x3) with parameters frozen in.

    On any arithmetic failure the slow evaluator is rerun to report the
    offending node.
    """
    if isinstance(e, str):
        e = parse(e)
    params = dict(params or {})
    src = f"lambda t, x1, x2, x3: {_py(e, params)}"
    fast = eval(src, {"_m": math, "__builtins__": {}})

    def f(t, x1, x2, x3):
        try:
            r = fast(t, x1, x2, x3)
        except (ZeroDivisionError, ValueError, OverflowError):
            return evaluate(e, (t, x1, x2, x3), params)
        if isinstance(r, complex):
            return evaluate(e, (t, x1, x2, x3), params)
        return r

    f.expr = e
    return f


# -- differentiation ---------------------------------------------------------------

def _depends(e: Expr, var: str) -> bool:
    return any(isinstance(n, Var) and n.name == var for n in _walk(e))


def differentiate(e: Expr | str, var: str) -> Expr:
    """Exact derivative tree with literal folding only."""
    if isinstance(e, str):
        e = parse(e)
    if var not in COORDINATES:
        raise ValueError(f"can only differentiate in {COORDINATES}, got {var!r}")
    return _d(e, var)


def _d(e: Expr, x: str) -> Expr:
    if isinstance(e, (Const, Param)):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.name == x else ZERO
    if isinstance(e, Unary):
        u = e.arg
        du = _d(u, x)
        if _is(du, 0):
            return ZERO
        if e.op == "neg":
            return neg(du)
        if e.op == "sin":
            return mul(func("cos", u), du)
        if e.op == "cos":
            return neg(mul(func("sin", u), du))
        if e.op == "exp":
            return mul(e, du)
        if e.op == "sqrt":
            return div(du, mul(_c(2), e))
        if e.op == "log":
            return div(du, u)
        raise ValueError(f"unknown function {e.op}")
    a, b = e.left, e.right
    da, db = _d(a, x), _d(b, x)
    if e.op == "add":
        return add(da, db)
    if e.op == "sub":
        return sub(da, db)
    if e.op == "mul":
        return add(mul(da, b), mul(a, db))
    if e.op == "div":
        if _is(db, 0):
            return div(da, b)
        return div(sub(mul(da, b), mul(a, db)), power(b, _c(2)))
    # pow
    if not _depends(b, x):
        if _is(da, 0):
            return ZERO
        return mul(mul(b, power(a, sub(b, ONE))), da)
    return mul(e, add(mul(db, func("log", a)), div(mul(b, da), a)))


def gradient(e: Expr) -> tuple[Expr, Expr, Expr]:
    return tuple(differentiate(e, f"x{i}") for i in (1, 2, 3))


def curl(F: Sequence[Expr]) -> tuple[Expr, Expr, Expr]:
    d = differentiate
    return (
        sub(d(F[2], "x2"), d(F[1], "x3")),
        sub(d(F[0], "x3"), d(F[2], "x1")),
        sub(d(F[1], "x1"), d(F[0], "x2")),
    )


# -- field specifications ----------------------------------------------------------

A_KEYS = ("A0", "A1", "A2", "A3")
H_KEYS = tuple(f"h{a}{b}" for a in range(4) for b in range(a, 4))


@dataclass
class FieldSpec:
    """Potentials A^μ(t, x) and symmetric h^{μν}(t, x) plus parameter values.

    File format (INI)::

        [meta]
        name = uniform_B
        units = natural
        [fields]
        A1 = -B0/2*x2
        A2 = B0/2*x1
        [params]
        B0 = 1

    Missing potentials are zero.  h entries are written with μ <= ν; the
    transposed key (e.g. h10) is accepted as a synonym but not both.
    """

    A: dict[str, Expr] = field(default_factory=dict)
    h: dict[str, Expr] = field(default_factory=dict)
    params: dict[str, float] = field(default_factory=dict)
    name: str = "fields"
    units: str = "natural"

    def __post_init__(self):
        for k in A_KEYS:
            self.A.setdefault(k, ZERO)
        for k in H_KEYS:
            self.h.setdefault(k, ZERO)
        self.A = {k: parse(v) if isinstance(v, str) else v for k, v in self.A.items()}
        self.h = {k: parse(v) if isinstance(v, str) else v for k, v in self.h.items()}
        unknown = set(self.A) - set(A_KEYS) | set(self.h) - set(H_KEYS)
        if unknown:
            raise FieldSpecError(f"unknown field keys {sorted(unknown)}")
        free = set()
        for e in list(self.A.values()) + list(self.h.values()):
            free |= parameters(e)
        missing = sorted(free - set(self.params))
        if missing:
            raise FieldSpecError(f"unbound parameters {missing}")

    @classmethod
    def from_strings(cls, fields: Mapping[str, str], params: Mapping[str, float] | None = None,
                     name: str = "fields", units: str = "natural") -> "FieldSpec":
        A, h = {}, {}
        for key, text in fields.items():
            key = key.strip()
            try:
                e = parse(text)
            except ExprSyntaxError as exc:
                raise FieldSpecError(f"{key}: {exc}") from None
            if key in A_KEYS:
                A[key] = e
            elif len(key) == 3 and key[0] == "h" and key[1:].isdigit():
                a, b = sorted((int(key[1]), int(key[2])))
                canon = f"h{a}{b}"
                if canon not in H_KEYS:
                    raise FieldSpecError(f"unknown field key {key!r}")
                if canon in h:
                    raise FieldSpecError(f"{key} given twice (h is symmetric)")
                h[canon] = e
            else:
                raise FieldSpecError(f"unknown field key {key!r}")
        return cls(A, h, {k: float(v) for k, v in (params or {}).items()}, name, units)

    @classmethod
    def from_ini(cls, text: str) -> "FieldSpec":
        cp = configparser.ConfigParser()
        cp.optionxform = str
        try:
            cp.read_string(text)
        except configparser.Error as exc:
            raise FieldSpecError(str(exc)) from None
        fields = dict(cp["fields"]) if cp.has_section("fields") else {}
        params = {}
        if cp.has_section("params"):
            for k, v in cp["params"].items():
                try:
                    params[k] = float(Fraction(v.strip()))
                except (ValueError, ZeroDivisionError):
                    raise FieldSpecError(f"parameter {k} is not a number: {v!r}") from None
        meta = dict(cp["meta"]) if cp.has_section("meta") else {}
        return cls.from_strings(fields, params, meta.get("name", "fields"), meta.get("units", "natural"))

    @classmethod
    def load(cls, path) -> "FieldSpec":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise FieldSpecError(f"cannot read field spec: {exc}") from None
        return cls.from_ini(text)

    def to_ini(self) -> str:
        lines = ["[meta]", f"name = {self.name}", f"units = {self.units}", "", "[fields]"]
        for k in A_KEYS:
            if not _is(self.A[k], 0):
                lines.append(f"{k} = {to_text(self.A[k])}")
        for k in H_KEYS:
            if not _is(self.h[k], 0):
                lines.append(f"{k} = {to_text(self.h[k])}")
        if self.params:
            lines += ["", "[params]"]
            lines += [f"{k} = {v!r}" for k, v in sorted(self.params.items())]
        return "\n".join(lines) + "\n"

    def hvec(self) -> tuple[Expr, Expr, Expr]:
        return tuple(self.h[f"h0{i}"] for i in (1, 2, 3))

    def hmat(self, i: int, j: int) -> Expr:
        a, b = sorted((i, j))
        return self.h[f"h{a}{b}"]

    def has_gravity(self) -> bool:
        return any(not _is(e, 0) for e in self.h.values())


def vector_ops(spec: FieldSpec, c: float | Fraction = 1) -> dict[str, tuple[Expr, ...]]:
    """Derived 3-vector fields used by the force laws.

    h denotes (h01, h02, h03) and H the spatial block h^{ij}; ∂0 = (1/c)∂_t.
    Keys: curl_A, grad_A0, dA_dt, grad_h00, d0_h, curl_h_row, grad_h_dot_h,
    grad_h00_sq, d0_h00h, curl_h00h, d0_Hh, curl_Hh.
    """
    inv_c = Const(1 / Fraction(c))
    A = [spec.A[f"A{i}"] for i in (1, 2, 3)]
    h = spec.hvec()
    h00 = spec.h["h00"]
    h00h = [mul(h00, hi) for hi in h]
    Hh = []
    for i in (1, 2, 3):
        acc = ZERO
        for j in (1, 2, 3):
            acc = add(acc, mul(spec.hmat(i, j), h[j - 1]))
        Hh.append(acc)
    hdoth = add(add(mul(h[0], h[0]), mul(h[1], h[1])), mul(h[2], h[2]))

    def d0(v):
        return tuple(mul(inv_c, differentiate(e, "t")) for e in v)

    return {
        "curl_A": curl(A),
        "grad_A0": gradient(spec.A["A0"]),
        "dA_dt": tuple(differentiate(e, "t") for e in A),
        "grad_h00": gradient(h00),
        "d0_h": d0(h),
        "curl_h_row": curl(h),
        "grad_h_dot_h": gradient(hdoth),
        "grad_h00_sq": gradient(mul(h00, h00)),
        "d0_h00h": d0(h00h),
        "curl_h00h": curl(h00h),
        "d0_Hh": d0(Hh),
        "curl_Hh": curl(Hh),
    }
