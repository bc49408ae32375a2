"""
Infix expression parser

Grammar (lowest to highest binding):

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom (('^' | '**') unary)?
    atom   := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

Exponents must fold to a rational literal. Decimal literals are read as
exact fractions.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Collection, List, Mapping, Optional

from apps.core.exceptions import ModelSyntaxError, UndeclaredSymbolError, ValidationError

from . import dag
from .dag import ANALYTIC_FUNCTIONS, Node

FUNCTION_ALIASES = {'ln': 'log'}

_TOKEN = re.compile(r"""
    (?P<space>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|[-+*/^()])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    column: int


def tokenize(text: str, *, line: int = 1, column_offset: int = 0) -> List[Token]:
    tokens = []
    position = 0
    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None:
            raise ModelSyntaxError(f"unexpected character '{text[position]}'",
                                   line=line, column=column_offset + position + 1)
        if match.lastgroup != 'space':
            tokens.append(Token(match.lastgroup, match.group(), column_offset + position + 1))
        position = match.end()
    tokens.append(Token('end', '', column_offset + len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: List[Token], symbols: Collection[str],
                 constants: Mapping[str, Fraction], line: int):
        self.tokens = tokens
        self.index = 0
        self.symbols = symbols
        self.constants = constants
        self.line = line

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def error(self, message: str, token: Optional[Token] = None) -> ModelSyntaxError:
        token = token or self.current
        return ModelSyntaxError(message, line=self.line, column=token.column)

    def accept(self, *texts: str) -> Optional[Token]:
        token = self.current
        if token.kind == 'op' and token.text in texts:
            self.index += 1
            return token
        return None

    def expect(self, text: str) -> Token:
        token = self.accept(text)
        if token is None:
            found = self.current.text or 'end of expression'
            raise self.error(f"expected '{text}', found '{found}'")
        return token

    def parse(self) -> Node:
        node = self.expr()
        if self.current.kind != 'end':
            raise self.error(f"unexpected '{self.current.text}'")
        return node

    def expr(self) -> Node:
        node = self.term()
        while True:
            if self.accept('+'):
                node = dag.add(node, self.term())
            elif self.accept('-'):
                node = dag.sub(node, self.term())
            else:
                return node

    def term(self) -> Node:
        node = self.unary()
        while True:
            if self.accept('*'):
                node = dag.mul(node, self.unary())
            elif token := self.accept('/'):
                divisor = self.unary()
                try:
                    node = dag.div(node, divisor)
                except ValidationError:
                    raise self.error("division by zero", token)
            else:
                return node

    def unary(self) -> Node:
        if self.accept('-'):
            return dag.neg(self.unary())
        if self.accept('+'):
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        token = self.accept('^', '**')
        if token is None:
            return base
        exponent = self.unary()
        if not exponent.is_const:
            raise self.error("exponent must be a numeric literal", token)
        try:
            return dag.power(base, exponent.value)
        except ValidationError as exc:
            raise self.error(str(exc), token)

    def atom(self) -> Node:
        token = self.current
        if token.kind == 'number':
            self.index += 1
            return dag.const(Fraction(token.text))
        if token.kind == 'name':
            self.index += 1
            if self.accept('('):
                name = FUNCTION_ALIASES.get(token.text, token.text)
                if name not in ANALYTIC_FUNCTIONS:
                    raise self.error(f"unknown function '{token.text}'", token)
                argument = self.expr()
                self.expect(')')
                return dag.func(name, argument)
            if token.text in self.constants:
                return dag.const(self.constants[token.text])
            if token.text not in self.symbols:
                raise UndeclaredSymbolError(token.text, line=self.line, column=token.column)
            return dag.symbol(token.text)
        if self.accept('('):
            node = self.expr()
            self.expect(')')
            return node
        found = token.text or 'end of expression'
        raise self.error(f"expected a number, a name or '(', found '{found}'")


def parse_expression(
    text: str,
    symbol_table: Collection[str],
    *,
    constants: Optional[Mapping[str, Fraction]] = None,
    line: int = 1,
    column_offset: int = 0
) -> Node:
    """
    Parse text into a DAG node over the declared names.

    Names in constants are replaced by their value; any other identifier
    must be in symbol_table.
    """
    tokens = tokenize(text, line=line, column_offset=column_offset)
    return _Parser(tokens, symbol_table, constants or {}, line).parse()
