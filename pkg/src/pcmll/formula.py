"""Formulas of partially commutative multiplicative linear logic.

Five binary connectives over atoms:

    A o B    non-commutative product
    A * B    commutative product
    A \\ C   left division, consumes an A on its left
    C / A    right division, consumes an A on its right
    A -o C   linear implication, consumes an A anywhere

Products bind tighter than implications. ``\\`` groups to the right and
``/`` to the left, with ``\\`` binding tighter than ``/``, so
``k \\ d \\ v / d`` reads ``(k \\ (d \\ v)) / d``. ``-o`` groups to the right
and does not mix with the directional implications without parentheses.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class NcProd:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class CProd:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class LDiv:
    arg: Formula
    result: Formula

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class RDiv:
    result: Formula
    arg: Formula

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class LinImp:
    arg: Formula
    result: Formula

    def __str__(self) -> str:
        return format_formula(self)


Formula = Union[Atom, NcProd, CProd, LDiv, RDiv, LinImp]
Product = (NcProd, CProd)
Implication = (LDiv, RDiv, LinImp)


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f'{message} at position {pos}: {text!r}')
        self.message = message
        self.text = text
        self.pos = pos


# ---------------------------------------------------------------- lexing

_TOKEN = re.compile(r'''
    (?P<ws>\s+)
  | (?P<op>-o|\|-|[\\/*(),;<>:\[\]{}]|⊙|⊗|⊸)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
''', re.VERBOSE)

_UNICODE = {'⊙': 'o', '⊗': '*', '⊸': '-o'}


@dataclass(frozen=True)
class Token:
    kind: str   # 'op', 'ident' or 'end'
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError('unexpected character', text, pos)
        if m.lastgroup == 'op':
            tokens.append(Token('op', _UNICODE.get(m.group(), m.group()), pos))
        elif m.lastgroup == 'ident':
            word = m.group()
            tokens.append(Token('op' if word == 'o' else 'ident', word, pos))
        pos = m.end()
    tokens.append(Token('end', '', len(text)))
    return tokens


class TokenStream:
    """Cursor over a token list, shared by the formula, context and proof parsers."""

    def __init__(self, text: str, tokens: list[Token] | None = None):
        self.text = text
        self.tokens = tokenize(text) if tokens is None else tokens
        self.i = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.i]

    def at(self, *texts: str) -> bool:
        tok = self.peek
        return tok.kind == 'op' and tok.text in texts

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f'expected {text!r}')
        return self.next()

    def ident(self) -> str:
        tok = self.peek
        if tok.kind != 'ident':
            self.error('expected identifier')
        self.i += 1
        return tok.text

    def error(self, message: str):
        raise FormulaSyntaxError(message, self.text, self.peek.pos)


# ---------------------------------------------------------------- parsing

def parse_formula(text: str) -> Formula:
    stream = TokenStream(text)
    f = read_formula(stream)
    if stream.peek.kind != 'end':
        stream.error('trailing input')
    return f


def read_formula(s: TokenStream) -> Formula:
    first, bare = _read_ldiv_chain(s)
    if s.at('-o'):
        if bare:
            s.error('mixed implications need parentheses')
        operands = [first]
        while s.at('-o'):
            s.next()
            operand, bare = _read_ldiv_chain(s)
            if bare or s.at('/', '\\'):
                s.error('mixed implications need parentheses')
            operands.append(operand)
        f = operands[-1]
        for operand in reversed(operands[:-1]):
            f = LinImp(operand, f)
        return f
    f = first
    while s.at('/'):
        s.next()
        arg, _ = _read_ldiv_chain(s)
        f = RDiv(f, arg)
    if s.at('-o'):
        s.error('mixed implications need parentheses')
    return f


def _read_ldiv_chain(s: TokenStream) -> tuple[Formula, bool]:
    operands = [_read_product(s)]
    while s.at('\\'):
        s.next()
        operands.append(_read_product(s))
    f = operands[-1]
    for operand in reversed(operands[:-1]):
        f = LDiv(operand, f)
    return f, len(operands) > 1


def _read_product(s: TokenStream) -> Formula:
    f = _read_atom(s)
    while s.at('o', '*'):
        op = s.next().text
        right = _read_atom(s)
        f = NcProd(f, right) if op == 'o' else CProd(f, right)
    return f


def _read_atom(s: TokenStream) -> Formula:
    if s.at('('):
        s.next()
        f = read_formula(s)
        s.expect(')')
        return f
    return Atom(s.ident())


# ---------------------------------------------------------------- printing

def format_formula(f: Formula) -> str:
    match f:
        case Atom(name):
            return name
        case NcProd(left, right) | CProd(left, right):
            op = 'o' if isinstance(f, NcProd) else '*'
            lhs = format_formula(left)
            if not (isinstance(left, Atom) or type(left) is type(f)):
                lhs = f'({lhs})'
            return f'{lhs} {op} {_wrap_unless(right, Atom)}'
        case LDiv(arg, result):
            return f'{_wrap_unless(arg, Atom, *Product)} \\ {_wrap_unless(result, Atom, *Product, LDiv)}'
        case RDiv(result, arg):
            return f'{_wrap_unless(result, Atom, *Product, LDiv, RDiv)} / {_wrap_unless(arg, Atom, *Product)}'
        case LinImp(arg, result):
            return f'{_wrap_unless(arg, Atom, *Product)} -o {_wrap_unless(result, Atom, *Product, LinImp)}'
    raise TypeError(f'not a formula: {f!r}')


def _wrap_unless(f: Formula, *bare: type) -> str:
    text = format_formula(f)
    return text if isinstance(f, bare) else f'({text})'


def subformulas(f: Formula) -> frozenset[Formula]:
    return frozenset(_walk(f))


def _walk(f: Formula) -> Iterator[Formula]:
    yield f
    match f:
        case NcProd(a, b) | CProd(a, b):
            yield from _walk(a)
            yield from _walk(b)
        case LDiv(a, c) | LinImp(a, c):
            yield from _walk(a)
            yield from _walk(c)
        case RDiv(c, a):
            yield from _walk(c)
            yield from _walk(a)


def size(f: Formula) -> int:
    """Number of atom and connective nodes."""
    return sum(1 for _ in _walk(f))
