"""
Recursive descent parser for the small expression language used to give
the profile functions and closed form surfaces:

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := "-" factor | power
    power  := atom ("^" ["-"] integer)?
    atom   := number | "u" | "v" | "pi" | function "(" expr ")" | "(" expr ")"

Unary minus sits below ``^`` so that ``-u^2`` means ``-(u^2)``.
"""
import collections
import math
import re

from .dual import FUNCTIONS
from .nodes import Add, Call, Const, Div, Expr, Mul, Neg, Pow, Sub, Var
from ..errors import (
    ExprSyntaxError, NonIntegerExponentError, UnknownIdentifierError
)

Token = collections.namedtuple('Token', 'kind text offset')

_TOKEN_RE = re.compile(
    r'(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)'
    r'|(?P<name>[A-Za-z_]\w*)'
    r'|(?P<op>[-+*/^()])'
    r'|(?P<space>\s+)'
)

_INTEGER_RE = re.compile(r'^\d+$')

CONSTANTS = {'pi': math.pi}

_BINARY = {'+': Add, '-': Sub, '*': Mul, '/': Div}


def tokenize(source):
    """
    Yields the `Token`'s of the source, ending with an ``end`` token.
    Offsets are 0-based here; errors report them 1-based.
    """
    i = 0
    while i < len(source):
        match = _TOKEN_RE.match(source, i)
        if match is None:
            raise ExprSyntaxError(
                source, i + 1, 'unexpected character {!r}'.format(source[i]))

        kind = match.lastgroup
        if kind != 'space':
            yield Token(kind, match.group(), i)
        i = match.end()

    yield Token('end', '', len(source))


class _Parser:
    def __init__(self, source):
        self.source = source
        self.tokens = list(tokenize(source))
        self.pos = 0

    @property
    def current(self):
        return self.tokens[self.pos]

    def advance(self):
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def error(self, token, problem):
        return ExprSyntaxError(self.source, token.offset + 1, problem)

    def expect(self, text):
        token = self.current
        if token.text != text or token.kind == 'end':
            raise self.error(token, 'expected {!r} but found {}'.format(
                text, repr(token.text) if token.text else 'end of input'))
        return self.advance()

    def parse(self):
        node = self.expr()
        if self.current.kind != 'end':
            raise self.error(self.current, 'unexpected {!r}'
                             .format(self.current.text))
        return node

    def expr(self):
        node = self.term()
        while self.current.text in ('+', '-') and self.current.kind == 'op':
            op = self.advance()
            node = _BINARY[op.text](node, self.term(), offset=op.offset)
        return node

    def term(self):
        node = self.factor()
        while self.current.text in ('*', '/') and self.current.kind == 'op':
            op = self.advance()
            node = _BINARY[op.text](node, self.factor(), offset=op.offset)
        return node

    def factor(self):
        if self.current.kind == 'op' and self.current.text == '-':
            op = self.advance()
            return Neg(self.factor(), offset=op.offset)
        return self.power()

    def power(self):
        node = self.atom()
        if self.current.kind == 'op' and self.current.text == '^':
            op = self.advance()
            sign = 1
            if self.current.kind == 'op' and self.current.text == '-':
                self.advance()
                sign = -1

            token = self.current
            if token.kind != 'number' or not _INTEGER_RE.match(token.text):
                raise NonIntegerExponentError(self.source, token.offset + 1)

            self.advance()
            node = Pow(node, sign * int(token.text), offset=op.offset)
        return node

    def atom(self):
        token = self.current
        if token.kind == 'number':
            self.advance()
            return Const(float(token.text), offset=token.offset)

        if token.kind == 'name':
            self.advance()
            if token.text in ('u', 'v'):
                return Var(token.text, offset=token.offset)
            if token.text in CONSTANTS:
                return Const(CONSTANTS[token.text], offset=token.offset)
            if token.text in FUNCTIONS:
                self.expect('(')
                argument = self.expr()
                self.expect(')')
                return Call(token.text, argument, offset=token.offset)

            raise UnknownIdentifierError(
                self.source, token.offset + 1, token.text)

        if token.kind == 'op' and token.text == '(':
            self.advance()
            node = self.expr()
            self.expect(')')
            return node

        raise self.error(token, 'expected a number, variable, function or '
                         '"(" but found {}'.format(
                             repr(token.text) if token.text
                             else 'end of input'))


def parse(source):
    """
    Parses the given source into an `Expr` tree.

    :param source: the expression text, e.g. ``'32*sin(8*v)'``.
    :return: the root node of the tree.
    :raises ExprSyntaxError: with the 1-based offset of the problem.
    """
    if isinstance(source, bytes):
        source = source.decode('utf-8')
    return _Parser(source).parse()


def as_expr(value):
    """Parses strings, lifts numbers and passes `Expr` nodes through."""
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, float)):
        return Const(value)
    return parse(value)
