"""A small expression language for ``f(x)`` with symbolic differentiation.

Grammar (``^`` binds tightest and is right-associative, then unary minus,
then ``* /``, then ``+ -``)::

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = "-" unary | "+" unary | power ;
    power   = primary [ "^" unary ] ;
    primary = number | "x" | "pi" | "e" | name "(" expr ")" | "(" expr ")" ;
    name    = "sin" | "cos" | "tan" | "exp" | "log" | "sqrt" | "abs" | "sign" ;

Evaluation works elementwise on numpy arrays.  Domain violations raise
:class:`EvalError` instead of producing NaN.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt", "abs", "sign")
CONSTANTS = {"pi": math.pi, "e": math.e}
MAX_INPUT_BYTES = 64 * 1024


class ExprError(ValueError):
    """Base class for parse and evaluation failures."""


class ParseError(ExprError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class EvalError(ExprError):
    def __init__(self, message: str, subexpr: "Expr"):
        super().__init__(f"{message} in '{to_string(subexpr)}'")
        self.subexpr = subexpr


# expression tree


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    arg: "Expr"


Expr = Union[Const, Var, Neg, BinOp, Call]
X = Var()


# tokenizer and parser

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^(),]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos))
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), _byte_offset(text, start)))
        pos = m.end()
    tokens.append(("end", "", len(text.encode("utf-8"))))
    return tokens


def _byte_offset(text, pos):
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, off = self.peek()
        if val != value or kind != "op":
            found = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected {value!r}, found {found}", off)
        return self.take()

    def parse(self):
        e = self.expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", off)
        return e

    def expr(self):
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            e = BinOp(op, e, self.term())
        return e

    def term(self):
        e = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            e = BinOp(op, e, self.unary())
        return e

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return Neg(self.unary())
        if kind == "op" and val == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.primary()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def primary(self):
        kind, val, off = self.take()
        if kind == "num":
            return Const(float(val))
        if kind == "name":
            if val == "x":
                return X
            if val in CONSTANTS:
                return Const(CONSTANTS[val])
            if val in FUNCTIONS:
                self.expect("(")
                if self.peek()[1] == ")" and self.peek()[0] == "op":
                    raise ParseError(f"{val}() takes exactly one argument, got none", self.peek()[2])
                arg = self.expr()
                if self.peek()[1] == "," and self.peek()[0] == "op":
                    raise ParseError(f"{val}() takes exactly one argument", self.peek()[2])
                self.expect(")")
                return Call(val, arg)
            raise ParseError(f"unknown identifier {val!r}", off)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "end":
            raise ParseError("unexpected end of input", off)
        raise ParseError(f"unexpected {val!r}", off)


def parse(text: str) -> Expr:
    """Parse ``text`` into an expression tree."""
    if len(text.encode("utf-8")) > MAX_INPUT_BYTES:
        raise ParseError("expression longer than 64 KiB", MAX_INPUT_BYTES)
    return _Parser(text).parse()


# printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def _prec(e):
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return _PREC["neg"]
    if isinstance(e, Const) and e.value < 0:
        return _PREC["neg"]
    return 5


def _fmt_const(v):
    if v == math.pi:
        return "pi"
    if v == math.e:
        return "e"
    if float(v).is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def to_string(e: Expr) -> str:
    """Render ``e`` so that :func:`parse` reads it back to the same tree value."""
    if isinstance(e, Const):
        return _fmt_const(e.value)
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Call):
        return f"{e.name}({to_string(e.arg)})"
    if isinstance(e, Neg):
        inner = to_string(e.arg)
        return f"-{inner}" if _prec(e.arg) >= _PREC["neg"] and not isinstance(e.arg, Neg) else f"-({inner})"
    p = _PREC[e.op]
    left, right = to_string(e.left), to_string(e.right)
    if e.op == "^":
        # base needs parens unless atomic; exponent may be a unary
        if _prec(e.left) <= p:
            left = f"({left})"
        if _prec(e.right) < _PREC["neg"]:
            right = f"({right})"
        return f"{left}^{right}"
    if _prec(e.left) < p:
        left = f"({left})"
    if _prec(e.right) <= p:
        right = f"({right})"
    return f"{left}{e.op}{right}"


# evaluation


def evaluate(e: Expr, x):
    """Evaluate ``e`` at ``x`` (a float or numpy array)."""
    scalar = np.ndim(x) == 0
    with np.errstate(all="ignore"):
        out = _eval(e, np.asarray(x, dtype=float))
    return float(out) if scalar else out


def _check(value, e, what):
    if not np.all(np.isfinite(value)):
        raise EvalError(what, e)
    return value


def _eval(e, x):
    if isinstance(e, Const):
        return np.full_like(x, e.value) if x.ndim else np.float64(e.value)
    if isinstance(e, Var):
        return x
    if isinstance(e, Neg):
        return -_eval(e.arg, x)
    if isinstance(e, Call):
        u = _eval(e.arg, x)
        name = e.name
        if name == "log":
            if np.any(u <= 0):
                raise EvalError("log of a nonpositive value", e)
            return np.log(u)
        if name == "sqrt":
            if np.any(u < 0):
                raise EvalError("sqrt of a negative value", e)
            return np.sqrt(u)
        if name == "tan":
            return _check(np.tan(u), e, "tan overflow")
        if name == "exp":
            return _check(np.exp(u), e, "exp overflow")
        return getattr(np, name)(u)
    left = _eval(e.left, x)
    right = _eval(e.right, x)
    op = e.op
    if op == "+":
        return _check(left + right, e, "overflow")
    if op == "-":
        return _check(left - right, e, "overflow")
    if op == "*":
        return _check(left * right, e, "overflow")
    if op == "/":
        if np.any(right == 0):
            raise EvalError("division by zero", e)
        return _check(left / right, e, "overflow")
    # power
    if np.any((left < 0) & (right != np.round(right))):
        raise EvalError("negative base with non-integer exponent", e)
    if np.any((left == 0) & (right < 0)):
        raise EvalError("zero raised to a negative power", e)
    return _check(np.power(left, right), e, "overflow")


# differentiation


def _is_const(e, v=None):
    return isinstance(e, Const) and (v is None or e.value == v)


def add(a, b):
    if _is_const(a) and _is_const(b):
        return Const(a.value + b.value)
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    if isinstance(b, Neg):
        return sub(a, b.arg)
    return BinOp("+", a, b)


def sub(a, b):
    if _is_const(a) and _is_const(b):
        return Const(a.value - b.value)
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return neg(b)
    if isinstance(b, Neg):
        return add(a, b.arg)
    return BinOp("-", a, b)


def neg(a):
    if _is_const(a):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def mul(a, b):
    if _is_const(a) and _is_const(b):
        return Const(a.value * b.value)
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return Const(0.0)
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    if _is_const(a, -1.0):
        return neg(b)
    if _is_const(b, -1.0):
        return neg(a)
    if isinstance(a, Neg):
        return neg(mul(a.arg, b))
    if isinstance(b, Neg):
        return neg(mul(a, b.arg))
    if _is_const(b) and not _is_const(a):
        return BinOp("*", b, a)
    return BinOp("*", a, b)


def div(a, b):
    if _is_const(a, 0.0) and not _is_const(b, 0.0):
        return Const(0.0)
    if _is_const(b, 1.0):
        return a
    if _is_const(a) and _is_const(b) and b.value != 0:
        return Const(a.value / b.value)
    return BinOp("/", a, b)


def power(a, b):
    if _is_const(b, 0.0):
        return Const(1.0)
    if _is_const(b, 1.0):
        return a
    if _is_const(a) and _is_const(b) and (a.value > 0 or float(b.value).is_integer()):
        if a.value != 0 or b.value > 0:
            return Const(a.value**b.value)
    return BinOp("^", a, b)


def fold_constants(e: Expr) -> Expr:
    """Replace every subtree free of ``x`` by its value, where that is finite."""
    if isinstance(e, (Const, Var)):
        return e
    if isinstance(e, Neg):
        return neg(fold_constants(e.arg))
    if isinstance(e, BinOp):
        build = {"+": add, "-": sub, "*": mul, "/": div, "^": power}[e.op]
        return build(fold_constants(e.left), fold_constants(e.right))
    out = Call(e.name, fold_constants(e.arg))
    if _is_const(out.arg):
        try:
            return Const(evaluate(out, 0.0))
        except EvalError:
            pass
    return out


def differentiate(e: Expr) -> Expr:
    """Exact derivative with constant folding and 0/1 identities.

    ``abs'`` is taken as ``sign`` and ``sign'`` as 0, both valid away from
    the argument's zeros.
    """
    return fold_constants(_diff(e))


def _diff(e: Expr) -> Expr:
    if isinstance(e, Const):
        return Const(0.0)
    if isinstance(e, Var):
        return Const(1.0)
    if isinstance(e, Neg):
        return neg(_diff(e.arg))
    if isinstance(e, Call):
        u = e.arg
        du = _diff(u)
        if _is_const(du, 0.0):
            return Const(0.0)
        outer = {
            "sin": lambda: Call("cos", u),
            "cos": lambda: neg(Call("sin", u)),
            "tan": lambda: div(Const(1.0), power(Call("cos", u), Const(2.0))),
            "exp": lambda: Call("exp", u),
            "log": lambda: div(Const(1.0), u),
            "sqrt": lambda: div(Const(1.0), mul(Const(2.0), Call("sqrt", u))),
            "abs": lambda: Call("sign", u),
            "sign": lambda: Const(0.0),
        }[e.name]()
        return mul(outer, du)
    a, b = e.left, e.right
    da, db = _diff(a), _diff(b)
    if e.op == "+":
        return add(da, db)
    if e.op == "-":
        return sub(da, db)
    if e.op == "*":
        return add(mul(da, b), mul(a, db))
    if e.op == "/":
        return div(sub(mul(da, b), mul(a, db)), power(b, Const(2.0)))
    # power
    if _is_const(db, 0.0):
        return mul(mul(b, power(a, sub(b, Const(1.0)))), da)
    # u^v = exp(v log u): d = u^v (v' log u + v u'/u)
    return mul(e, add(mul(db, Call("log", a)), div(mul(b, da), a)))


@dataclass(frozen=True)
class ParsedFunction:
    """``f``, ``f'`` and ``f''`` from one expression string."""

    text: str
    expr: Expr
    d1: Expr
    d2: Expr

    @classmethod
    def from_text(cls, text: str) -> "ParsedFunction":
        e = parse(text)
        d1 = differentiate(e)
        return cls(text, e, d1, differentiate(d1))

    def kinks(self, a: float, b: float, grid: int = 4097) -> tuple:
        """Interior zeros of the arguments of ``abs`` and ``sign``.

        Found by a sign scan on ``grid`` points, then refined with brentq.
        """
        from scipy.optimize import brentq

        args = []
        for tree in (self.expr, self.d1, self.d2):
            args += [c.arg for c in _walk(tree) if isinstance(c, Call) and c.name in ("abs", "sign")]
        xs = np.linspace(a, b, grid)
        found = set()
        for u in dict.fromkeys(args):
            try:
                vals = np.broadcast_to(evaluate(u, xs), xs.shape)
            except EvalError:
                continue
            for i in range(grid - 1):
                v0, v1 = vals[i], vals[i + 1]
                if v0 == 0.0:
                    root = xs[i]
                elif v0 * v1 < 0:
                    g = lambda t: float(evaluate(u, np.float64(t)))
                    root = brentq(g, xs[i], xs[i + 1], xtol=1e-15)
                else:
                    continue
                if a < root < b:
                    found.add(float(root))
        return tuple(sorted(found))

    def jumps(self, a: float, b: float, tree: str = "d1") -> list:
        """``(x, jump)`` of ``f`` (``tree="expr"``) or ``f'`` (``"d1"``) at each kink.

        A jump in ``f'`` means ``f''`` carries a point mass there.
        """
        e = {"expr": self.expr, "d1": self.d1}[tree]
        out = []
        for k in self.kinks(a, b):
            scale = max(1.0, abs(k), b - a)
            # a true jump survives shrinking the step; a cusp like |x|^1.5 does not
            gaps = []
            for eps in (1e-6 * scale, 1e-10 * scale):
                left = float(evaluate(e, np.float64(k - eps)))
                right = float(evaluate(e, np.float64(k + eps)))
                gaps.append((right - left, max(1.0, abs(left), abs(right))))
            (g_wide, _), (g_narrow, size) = gaps
            if abs(g_narrow) > 1e-6 * size and abs(g_narrow) >= 0.5 * abs(g_wide):
                out.append((k, g_narrow))
        return out

    def model(self, breakpoints: tuple = ()):
        from .rules import FunctionModel

        return FunctionModel(
            lambda x: evaluate(self.expr, x),
            lambda x: evaluate(self.d1, x),
            lambda x: evaluate(self.d2, x),
            self.text,
            tuple(breakpoints),
        )


def _walk(e):
    yield e
    if isinstance(e, Neg):
        yield from _walk(e.arg)
    elif isinstance(e, BinOp):
        yield from _walk(e.left)
        yield from _walk(e.right)
    elif isinstance(e, Call):
        yield from _walk(e.arg)
