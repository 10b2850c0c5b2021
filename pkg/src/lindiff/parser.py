"""
Recursive-descent parser for operator and sequence expressions.

Grammar (whitespace-insensitive)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom (("^" | "**") unary)?
    atom   := INT | NAME | NAME "(" expr ")" | "(" expr ")"

Operators are read as polynomials in ``t`` (alias ``tau``) with coefficients
in Q(x) written to the left: ``t/x`` is the operator (1/x)*t.
"""

import re
from dataclasses import dataclass

from .field import ONE, RationalFunction, to_rational
from .ore import OreOperator


class ParseError(ValueError):
    def __init__(self, message, text="", pos=None):
        self.message = message
        self.text = text
        self.pos = pos
        super().__init__(self._render())

    def _render(self):
        if self.pos is None:
            return self.message
        return f"{self.message} at position {self.pos}\n  {self.text}\n  {' ' * self.pos}^"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9']*)|(\*\*|[-+*/^(),]))")


@dataclass
class Token:
    kind: str  # "int", "name", "op", "end"
    value: str
    pos: int


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            at = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[at]!r}", text, at)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(Token("int", m.group(1), start))
        elif m.group(2):
            tokens.append(Token("name", m.group(2), start))
        else:
            op = m.group(3)
            tokens.append(Token("op", "^" if op == "**" else op, start))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


# AST nodes are plain tuples: ("num", int), ("name", str), ("call", name, arg),
# ("neg", a), ("add", a, b), ("sub", a, b), ("mul", a, b), ("div", a, b),
# ("pow", a, b).  Every node carries its source position as the last item.


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok.value != value or tok.kind != "op":
            raise ParseError(f"expected {value!r}", self.text, tok.pos)
        return tok

    def parse(self):
        if self.peek().kind == "end":
            raise ParseError("empty expression", self.text, 0)
        node = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected token {tok.value!r}", self.text, tok.pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek().kind == "op" and self.peek().value in "+-":
            tok = self.take()
            rhs = self.term()
            node = ("add" if tok.value == "+" else "sub", node, rhs, tok.pos)
        return node

    def term(self):
        node = self.unary()
        while self.peek().kind == "op" and self.peek().value in ("*", "/"):
            tok = self.take()
            rhs = self.unary()
            node = ("mul" if tok.value == "*" else "div", node, rhs, tok.pos)
        return node

    def unary(self):
        tok = self.peek()
        if tok.kind == "op" and tok.value in "+-":
            self.take()
            inner = self.unary()
            return inner if tok.value == "+" else ("neg", inner, tok.pos)
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.value == "^":
            self.take()
            exp = self.unary()
            return ("pow", base, exp, tok.pos)
        return base

    def atom(self):
        tok = self.take()
        if tok.kind == "int":
            return ("num", int(tok.value), tok.pos)
        if tok.kind == "name":
            if self.peek().kind == "op" and self.peek().value == "(":
                self.take()
                arg = self.expr()
                self.expect(")")
                return ("call", tok.value, arg, tok.pos)
            return ("name", tok.value, tok.pos)
        if tok.kind == "op" and tok.value == "(":
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "end":
            raise ParseError("unexpected end of input", self.text, tok.pos)
        raise ParseError(f"unexpected token {tok.value!r}", self.text, tok.pos)


def parse_expression(text):
    return _Parser(text).parse()


def _int_exponent(node, text, ctx):
    """Evaluate an exponent node that must be an integer constant."""
    kind = node[0]
    if kind == "num":
        return node[1]
    if kind == "neg":
        return -_int_exponent(node[1], text, ctx)
    raise ParseError(f"exponent must be an integer literal in {ctx}", text, node[-1])


# --- operators -------------------------------------------------------------

_TAU_NAMES = ("t", "tau")


class _TPoly:
    """Commutative polynomial in t over Q(x): {power: coefficient}."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = {k: c for k, c in terms.items() if not c.is_zero()}

    def is_scalar(self):
        return all(k == 0 for k in self.terms)

    def scalar(self):
        return self.terms.get(0, RationalFunction.coerce(0))

    def __add__(self, o):
        out = dict(self.terms)
        for k, c in o.terms.items():
            out[k] = out[k] + c if k in out else c
        return _TPoly(out)

    def __neg__(self):
        return _TPoly({k: -c for k, c in self.terms.items()})

    def __mul__(self, o):
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in o.terms.items():
                k = k1 + k2
                out[k] = out[k] + c1 * c2 if k in out else c1 * c2
        return _TPoly(out)


def parse_operator(text):
    """Parse text such as ``"(x+1)*t^2 - t/x + 3"`` into an OreOperator."""
    node = parse_expression(text)
    val = _eval_op(node, text)
    if not val.terms:
        return OreOperator(())
    n = max(val.terms)
    return OreOperator([val.terms.get(k, RationalFunction.coerce(0)) for k in range(n + 1)])


def _eval_op(node, text):
    kind = node[0]
    if kind == "num":
        return _TPoly({0: RationalFunction.coerce(node[1])})
    if kind == "name":
        name = node[1]
        if name in _TAU_NAMES:
            return _TPoly({1: ONE})
        if name == "x":
            return _TPoly({0: RationalFunction.x()})
        raise ParseError(f"unknown symbol {name!r}", text, node[-1])
    if kind == "call":
        raise ParseError(f"function call {node[1]!r} not allowed in an operator", text, node[-1])
    if kind == "neg":
        return -_eval_op(node[1], text)
    if kind in ("add", "sub"):
        a, b = _eval_op(node[1], text), _eval_op(node[2], text)
        return a + b if kind == "add" else a + (-b)
    if kind == "mul":
        return _eval_op(node[1], text) * _eval_op(node[2], text)
    if kind == "div":
        a, b = _eval_op(node[1], text), _eval_op(node[2], text)
        if not b.is_scalar():
            raise ParseError("division by an expression containing t", text, node[-1])
        d = b.scalar()
        if d.is_zero():
            raise ParseError("division by zero", text, node[-1])
        inv = d.inverse()
        return _TPoly({k: c * inv for k, c in a.terms.items()})
    if kind == "pow":
        base = _eval_op(node[1], text)
        e = _int_exponent(node[2], text, "operator")
        if e < 0:
            if not base.is_scalar():
                raise ParseError("negative power of t", text, node[-1])
            s = base.scalar()
            if s.is_zero():
                raise ParseError("division by zero", text, node[-1])
            return _TPoly({0: s ** e})
        out = _TPoly({0: ONE})
        for _ in range(e):
            out = out * base
        return out
    raise ParseError(f"unsupported construct {kind}", text, node[-1])


def parse_rational_function(text):
    op = parse_operator(text)
    if op.order > 0:
        raise ParseError("expected a rational function of x, found t", text, 0)
    return op[0]


# --- sequence expressions ---------------------------------------------------


def eval_sequence_expr(node, text, n, lookup, names=None):
    """Evaluate a parsed sequence expression at index n.

    ``lookup(name, index)`` returns the value of a named sequence; ``names``
    maps free variable names (besides ``n``) to rational values.
    """
    names = names or {}
    kind = node[0]
    if kind == "num":
        return to_rational(node[1])
    if kind == "name":
        if node[1] == "n":
            return to_rational(n)
        if node[1] in names:
            return to_rational(names[node[1]])
        raise ParseError(f"unknown symbol {node[1]!r}", text, node[-1])
    if kind == "call":
        idx = eval_sequence_expr(node[2], text, n, lookup, names)
        return lookup(node[1], idx)
    if kind == "neg":
        return -eval_sequence_expr(node[1], text, n, lookup, names)
    a = eval_sequence_expr(node[1], text, n, lookup, names)
    if kind == "pow":
        e = _int_exponent(node[2], text, "sequence expression")
        return a ** e
    b = eval_sequence_expr(node[2], text, n, lookup, names)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        if b == 0:
            raise ZeroDivisionError(f"division by zero at n = {n}")
        return a / b
    raise ParseError(f"unsupported construct {kind}", text, node[-1])


def referenced_sequences(node):
    """Names of all sequences called in a parsed expression."""
    out = set()
    stack = [node]
    while stack:
        nd = stack.pop()
        if nd[0] == "call":
            out.add(nd[1])
            stack.append(nd[2])
        elif nd[0] in ("neg",):
            stack.append(nd[1])
        elif nd[0] in ("add", "sub", "mul", "div", "pow"):
            stack.extend([nd[1], nd[2]])
    return out
