"""A small analytic-expression language for user-supplied functions.

Grammar (UTF-8 source, byte offsets in errors)::

    expr    := term  (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := atom ("^" unary)?          # right-associative, binds tighter
                                          # than unary minus
    atom    := NUMBER | "x" | "pi" | "e"
             | NAME "(" expr ")"          # NAME in exp sin cos sinh cosh sech sqrt
             | "(" expr ")"

Only analytic building blocks are provided on purpose: the convergence
theory this package certifies assumes analyticity in a strip, and
constructs like abs/conj/Re/Im would silently void it.  Expressions
evaluate over real or complex numpy arrays; poles and branch points
surface as :class:`~hermapprox.exceptions.EvaluationError`, never as NaNs
in returned data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import EvaluationError, ParseError

__all__ = [
    "parse_function",
    "pretty_print",
    "compile_function",
    "FUNCTIONS",
    "CONSTANTS",
]

FUNCTIONS = ("exp", "sin", "cos", "sinh", "cosh", "sech", "sqrt")
CONSTANTS = {"pi": math.pi, "e": math.e}


# ---------------------------------------------------------------------------
# AST nodes (offsets are carried for error reporting but ignored by ==)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float
    offset: int = field(compare=False, default=0)


@dataclass(frozen=True)
class Var:
    offset: int = field(compare=False, default=0)


@dataclass(frozen=True)
class Const:
    name: str
    offset: int = field(compare=False, default=0)


@dataclass(frozen=True)
class Unary:
    op: str
    operand: object
    offset: int = field(compare=False, default=0)


@dataclass(frozen=True)
class Binary:
    op: str
    left: object
    right: object
    offset: int = field(compare=False, default=0)


@dataclass(frozen=True)
class Call:
    name: str
    arg: object
    offset: int = field(compare=False, default=0)


# ---------------------------------------------------------------------------
# tokenizer
# ---------------------------------------------------------------------------

_SINGLE = set("+-*/^()," )


def _tokenize(src: str):
    tokens = []  # (kind, text, offset)
    i, n = 0, len(src)
    while i < n:
        c = src[i]
        if c.isspace():
            i += 1
            continue
        if c in _SINGLE:
            tokens.append(("op", c, i))
            i += 1
            continue
        if c.isdigit() or c == ".":
            j = i
            seen_dot = False
            while j < n and (src[j].isdigit() or (src[j] == "." and not seen_dot)):
                seen_dot = seen_dot or src[j] == "."
                j += 1
            if j < n and src[j] in "eE" and j + 1 < n and (
                src[j + 1].isdigit() or (src[j + 1] in "+-" and j + 2 < n and src[j + 2].isdigit())
            ):
                j += 2 if src[j + 1] in "+-" else 1
                while j < n and src[j].isdigit():
                    j += 1
            text = src[i:j]
            try:
                value = float(text)
            except ValueError:
                raise ParseError(f"malformed number {text!r}", i)
            tokens.append(("num", value, i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(("name", src[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(("end", "", n))
    return tokens


# ---------------------------------------------------------------------------
# recursive-descent parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, symbol: str):
        kind, text, off = self.peek()
        if kind == "op" and text == symbol:
            return self.advance()
        raise ParseError(f"expected {symbol!r}", off)

    def parse(self):
        node = self.expr()
        kind, text, off = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected trailing input {text!r}", off)
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, text, off = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                node = Binary(text, node, self.term(), off)
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            kind, text, off = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                node = Binary(text, node, self.unary(), off)
            else:
                return node

    def unary(self):
        kind, text, off = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Unary("-", self.unary(), off)
        return self.power()

    def power(self):
        base = self.atom()
        kind, text, off = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            # right-associative; the right side may start with a unary minus
            return Binary("^", base, self.unary(), off)
        return base

    def atom(self):
        kind, text, off = self.advance()
        if kind == "num":
            return Num(text, off)
        if kind == "name":
            if text == "x":
                return Var(off)
            if text in CONSTANTS:
                return Const(text, off)
            if text in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                nk, nt, noff = self.peek()
                if nk == "op" and nt == ",":
                    raise ParseError(f"{text} takes exactly one argument", noff)
                self.expect_op(")")
                return Call(text, arg, off)
            raise ParseError(
                f"unknown identifier {text!r} (variable is 'x'; functions: "
                + ", ".join(FUNCTIONS) + "; constants: pi, e)",
                off,
            )
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if kind == "end":
            raise ParseError("unexpected end of input", off)
        raise ParseError(f"unexpected {text!r}", off)


def parse_function(src: str):
    """Parse an expression in the analytic grammar into an AST.

    Raises :class:`ParseError` with a byte offset on malformed input.
    """
    if not isinstance(src, str) or not src.strip():
        raise ParseError("empty expression", 0)
    return _Parser(src).parse()


# ---------------------------------------------------------------------------
# pretty printer (canonical spacing; minimal parentheses)
# ---------------------------------------------------------------------------

_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def _format(node, parent_prec: int, rhs_of: str | None = None) -> str:
    if isinstance(node, Num):
        text = repr(node.value)
        if text.endswith(".0"):
            text = text[:-2]
        return text
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Call):
        return f"{node.name}({_format(node.arg, 0)})"
    if isinstance(node, Unary):
        inner = _format(node.operand, _PRECEDENCE["neg"])
        text = f"-{inner}"
        return f"({text})" if parent_prec > _PRECEDENCE["neg"] else text
    if isinstance(node, Binary):
        prec = _PRECEDENCE[node.op]
        if node.op == "^":
            left = _format(node.left, prec + 1)
            right = _format(node.right, prec)  # right-associative
        else:
            left = _format(node.left, prec)
            # parse is left-associative, so a right-nested operand at equal
            # precedence needs parentheses to round-trip structurally
            right = _format(node.right, prec + 1)
        text = f"{left}{node.op}{right}"
        return f"({text})" if prec < parent_prec else text
    raise TypeError(f"not an AST node: {node!r}")


def pretty_print(node) -> str:
    """Render an AST back to source; re-parsing yields an equal AST."""
    return _format(node, 0)


# ---------------------------------------------------------------------------
# compiler to a numpy evaluator
# ---------------------------------------------------------------------------

def _sech(v):
    # 1/cosh overflows (to nan at complex points) past |Re v| ~ 710; the
    # even-reflected exponential form stays in double range throughout.
    v = np.where(np.real(v) < 0, -v, v)
    e = np.exp(-v)
    return 2.0 * e / (1.0 + e * e)


_NUMPY_FUNCS = {
    "exp": np.exp,
    "sin": np.sin,
    "cos": np.cos,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "sech": _sech,
    "sqrt": np.sqrt,
}


def _eval(node, x):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Unary):
        return -_eval(node.operand, x)
    if isinstance(node, Call):
        return _NUMPY_FUNCS[node.name](_eval(node.arg, x))
    if isinstance(node, Binary):
        left = _eval(node.left, x)
        right = _eval(node.right, x)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if node.op == "/":
            return left / right
        return np.power(left, right)
    raise TypeError(f"not an AST node: {node!r}")


def compile_function(source_or_ast):
    """Compile an expression (source text or AST) into ``f(x)``.

    The result accepts real or complex scalars and numpy arrays and
    preserves the input flavor.  Any non-finite value in the output
    (division poles, sqrt/power branch points fed real arguments,
    overflow) raises :class:`EvaluationError` naming the input that
    produced it.
    """
    ast = parse_function(source_or_ast) if isinstance(source_or_ast, str) else source_or_ast
    label = pretty_print(ast)

    def evaluate(x):
        arr = np.asarray(x)
        scalar = arr.ndim == 0
        with np.errstate(all="ignore"):
            out = np.broadcast_to(np.asarray(_eval(ast, arr)), arr.shape)
        bad = ~np.isfinite(out)
        if bad.any():
            where = arr[bad] if not scalar else arr
            first = where.flat[0] if getattr(where, "size", 1) else where
            raise EvaluationError(
                f"expression {label!r} evaluated to a non-finite value at x = {first!r}"
            )
        if scalar:
            return out[()]
        return np.array(out)

    evaluate.source = label
    return evaluate
