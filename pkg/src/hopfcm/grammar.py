"""Coefficient expression grammar for system-definition documents.

Accepted: integers, parameter identifiers, ``+ - * / ^`` with nonnegative
integer exponents, parentheses, and ``sqrt(...)`` under the float backend
only.  Parsed strings evaluate either into the exact fraction field or into
machine floats at a full parameter assignment.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .errors import SchemaError
from .paramfield import ParamExpr

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos and not m.group(0).strip():
            break
        pos = m.end()
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1))))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2)))
        else:
            ch = m.group(3)
            if ch.strip() == "":
                continue
            if ch not in "+-*/^()":
                raise SchemaError(f"unexpected character {ch!r} in {text!r}")
            tokens.append((ch, ch))
    tokens.append(("end", None))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise SchemaError(f"expected {kind!r} in {self.text!r}, got {tok[0]!r}")
        return tok

    def parse(self):
        node = self.expr()
        if self.peek() != "end":
            raise SchemaError(f"trailing input in {self.text!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek() in ("+", "-"):
            op = self.next()[0]
            rhs = self.term()
            node = (("add" if op == "+" else "sub"), node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek() in ("*", "/"):
            op = self.next()[0]
            rhs = self.factor()
            node = (("mul" if op == "*" else "div"), node, rhs)
        return node

    def factor(self):
        if self.peek() == "-":
            self.next()
            return ("neg", self.factor())
        if self.peek() == "+":
            self.next()
            return self.factor()
        node = self.atom()
        if self.peek() == "^":
            self.next()
            sign = 1
            if self.peek() == "-":
                raise SchemaError(f"negative exponent in {self.text!r}")
            tok = self.expect("int")
            node = ("pow", node, sign * tok[1])
        return node

    def atom(self):
        kind, value = self.next()
        if kind == "int":
            return ("num", Fraction(value))
        if kind == "name":
            if value == "sqrt":
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return ("sqrt", arg)
            return ("var", value)
        if kind == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise SchemaError(f"unexpected token {kind!r} in {self.text!r}")


def parse_expression(text):
    """Parse a grammar string into an AST."""
    return _Parser(str(text)).parse()


def ast_params(node, acc=None):
    """Collect parameter identifiers appearing in an AST."""
    if acc is None:
        acc = set()
    kind = node[0]
    if kind == "var":
        acc.add(node[1])
    elif kind in ("add", "sub", "mul", "div"):
        ast_params(node[1], acc)
        ast_params(node[2], acc)
    elif kind in ("neg", "sqrt"):
        ast_params(node[1], acc)
    elif kind == "pow":
        ast_params(node[1], acc)
    return acc


def eval_exact(node, params) -> ParamExpr:
    """Evaluate an AST into the exact fraction field over ``params``."""
    kind = node[0]
    if kind == "num":
        return ParamExpr.const(params, node[1])
    if kind == "var":
        if node[1] not in params:
            raise SchemaError(f"unknown parameter {node[1]!r}")
        return ParamExpr.var(params, node[1])
    if kind == "add":
        return eval_exact(node[1], params) + eval_exact(node[2], params)
    if kind == "sub":
        return eval_exact(node[1], params) - eval_exact(node[2], params)
    if kind == "mul":
        return eval_exact(node[1], params) * eval_exact(node[2], params)
    if kind == "div":
        den = eval_exact(node[2], params)
        if den.is_zero():
            raise SchemaError("division by zero in coefficient expression")
        return eval_exact(node[1], params) / den
    if kind == "neg":
        return -eval_exact(node[1], params)
    if kind == "pow":
        return eval_exact(node[1], params) ** node[2]
    if kind == "sqrt":
        raise SchemaError("sqrt(...) requires the float backend")
    raise SchemaError(f"bad AST node {kind!r}")


def eval_float(node, values) -> float:
    """Evaluate an AST to a float at a full parameter assignment."""
    kind = node[0]
    if kind == "num":
        return float(node[1])
    if kind == "var":
        if node[1] not in values:
            raise SchemaError(f"parameter {node[1]!r} has no assigned value")
        return float(values[node[1]])
    if kind == "add":
        return eval_float(node[1], values) + eval_float(node[2], values)
    if kind == "sub":
        return eval_float(node[1], values) - eval_float(node[2], values)
    if kind == "mul":
        return eval_float(node[1], values) * eval_float(node[2], values)
    if kind == "div":
        den = eval_float(node[2], values)
        if den == 0.0:
            raise SchemaError("division by zero in coefficient expression")
        return eval_float(node[1], values) / den
    if kind == "neg":
        return -eval_float(node[1], values)
    if kind == "pow":
        return eval_float(node[1], values) ** node[2]
    if kind == "sqrt":
        arg = eval_float(node[1], values)
        if arg < 0:
            raise SchemaError("sqrt of a negative value in coefficient")
        return math.sqrt(arg)
    raise SchemaError(f"bad AST node {kind!r}")
