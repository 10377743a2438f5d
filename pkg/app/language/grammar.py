"""
Recursive-descent parser for VML models.

Syntax errors do not stop the parser: after an error it skips to the end of
the broken declaration (a `;` or `}` followed by a declaration keyword) and
carries on, so one run reports every broken declaration.
"""

import logging
from dataclasses import replace

from core.diagnostics import Diagnostic, Span, has_errors
from core.exceptions import DiagnosticError, InvalidType
from core.expressions import (
    COMPARISONS,
    FUNCTIONS,
    EXTREMA,
    Binary,
    Call,
    Extremum,
    Literal,
    Unary,
    VarRef,
)
from core.types import BoolType, EnumLiteral, EnumType, NumericType
from language.nodes import (
    AdaptationRule,
    ContextDecl,
    Direction,
    FunctionDefinition,
    GeneralVarDecl,
    Implication,
    Invariant,
    Model,
    PropertyDecl,
    TypeDefinition,
    VarpointDecl,
)
from language.tokens import scan

logger = logging.getLogger(__name__)

DECLARATION_KEYWORDS = frozenset({
    'enum', 'number', 'boolean', 'var', 'context', 'varpoint', 'property',
    'rule',
})
BOOLEANS = {'true': True, 'false': False}


class _SyntaxError(Exception):
    def __init__(self, diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


def _join(start, end):
    """Span from the first character of `start` to the last of `end`."""
    length = end.offset + end.length - start.offset
    return Span(start.line, start.column, max(length, 0), start.offset)


class Parser:
    """Parses one token stream; use `parse` or `parse_model` instead."""

    def __init__(self, tokens):
        self.tokens = tokens
        self.position = 0
        self.diagnostics = []

    @property
    def current(self):
        return self.tokens[self.position]

    @property
    def previous(self):
        return self.tokens[max(self.position - 1, 0)]

    def _at(self, *texts):
        token = self.current
        return token.kind in ('keyword', 'op') and token.text in texts

    def _at_kind(self, *kinds):
        return self.current.kind in kinds

    def _advance(self):
        token = self.current
        if token.kind != 'eof':
            self.position += 1
        return token

    def _fail(self, expected):
        if len(expected) == 1:
            wanted = expected[0]
        else:
            wanted = 'one of ' + ', '.join(expected)
        raise _SyntaxError(Diagnostic.error(
            self.current.span, 'SyntaxError',
            f'Expected {wanted}, found {self.current.describe()}.',
        ))

    def _expect(self, *texts):
        if self._at(*texts):
            return self._advance()
        self._fail([repr(text) for text in texts])

    def _expect_id(self, what='identifier'):
        if self._at_kind('id'):
            return self._advance()
        self._fail([what])

    def _number(self):
        """A possibly negated INT or REAL literal."""
        negative = self._at('-')
        if negative:
            self._advance()
        if not self._at_kind('int', 'real'):
            self._fail(['number'])
        value = self._advance().value
        return -value if negative else value

    # Declarations

    def parse_model(self):
        declarations = []
        while not self._at_kind('eof'):
            start = self.position
            try:
                declaration = self._declaration()
            except _SyntaxError as error:
                self.diagnostics.append(error.diagnostic)
                self._recover(start)
                continue
            if declaration is not None:
                declarations.append(declaration)
        if not declarations and not self.diagnostics:
            self.diagnostics.append(Diagnostic.error(
                self.current.span, 'SyntaxError',
                'A model needs at least one declaration.',
            ))
        return Model(tuple(declarations))

    def _at_declaration(self):
        return self._at(*DECLARATION_KEYWORDS)

    def _recover(self, start):
        # A missing terminator leaves us on the next declaration already.
        if self.position > start and self._at_declaration():
            return
        while not self._at_kind('eof'):
            token = self._advance()
            if token.text in (';', '}') and (
                    self._at_kind('eof') or self._at_declaration()):
                return

    def _declaration(self):
        if not self._at_declaration():
            self._fail(['a declaration'])
        parse_declaration = {
            'enum': self._enum_type,
            'number': self._numeric_type,
            'boolean': self._boolean_type,
            'var': self._general_var,
            'context': self._context,
            'varpoint': self._varpoint,
            'property': self._property,
            'rule': self._rule,
        }[self.current.text]
        start = self.current.span
        declaration = parse_declaration()
        if declaration is None:
            return None
        return replace(declaration, span=_join(start, self.previous.span))

    def _enum_type(self):
        self._advance()
        name = self._expect_id('type name')
        self._expect('{')
        literals = []
        while True:
            literal_name = self._expect_id('enum literal').text
            if self._at('('):
                self._advance()
                if not self._at_kind('int'):
                    self._fail(['integer code'])
                code = self._advance().value
                self._expect(')')
                literals.append(EnumLiteral(literal_name, code, True))
            else:
                literals.append(EnumLiteral(literal_name, len(literals)))
            self._expect(';')
            if self._at('}'):
                break
        self._advance()
        return self._type(name, EnumType, name.text, tuple(literals))

    def _numeric_type(self):
        self._advance()
        name = self._expect_id('type name')
        self._expect('{')
        self._expect('range')
        self._expect(':')
        self._expect('[')
        lo = self._number()
        self._expect(',')
        hi = self._number()
        self._expect(']')
        self._expect(';')
        self._expect('precision')
        self._expect(':')
        precision = self._number()
        self._expect(';')
        unit = None
        if self._at('unit'):
            self._advance()
            self._expect(':')
            if not self._at_kind('string'):
                self._fail(['unit string'])
            unit = self._advance().value
            self._expect(';')
        self._expect('}')
        return self._type(name, NumericType, name.text, lo, hi, precision,
                          unit)

    def _boolean_type(self):
        self._advance()
        name = self._expect_id('type name')
        self._expect(';')
        return self._type(name, BoolType, name.text)

    def _type(self, name_token, kind, *args):
        """Build the type; a rejected type is reported and dropped."""
        try:
            return TypeDefinition(kind(*args))
        except InvalidType as error:
            self.diagnostics.append(Diagnostic.error(
                name_token.span, 'InvalidType', str(error)))
            return None

    def _general_var(self):
        self._advance()
        name = self._expect_id('variable name').text
        type_name = None
        if self._at(':'):
            self._advance()
            type_name = self._expect_id('type name').text
        self._expect('=')
        expr = self.expression()
        self._expect(';')
        return GeneralVarDecl(name, type_name, expr)

    def _context(self):
        self._advance()
        name = self._expect_id('variable name').text
        self._expect(':')
        type_name = self._expect_id('type name').text
        self._expect(';')
        return ContextDecl(name, type_name)

    def _varpoint(self):
        self._advance()
        name = self._expect_id('variable name').text
        self._expect(':')
        type_name = self._expect_id('type name').text
        if self._at(';'):
            self._advance()
            return VarpointDecl(name, type_name)
        self._expect('{')
        constraints = [self._constraint()]
        while self._at(','):
            self._advance()
            constraints.append(self._constraint())
        self._expect(';')
        self._expect('}')
        return VarpointDecl(name, type_name, tuple(constraints))

    def _constraint(self):
        start = self.current.span
        expr = self.expression()
        if self._at('=>'):
            self._advance()
            consequence = self.expression()
            return Implication(expr, consequence,
                               _join(start, self.previous.span))
        return Invariant(expr, _join(start, self.previous.span))

    def _property(self):
        self._advance()
        name = self._expect_id('property name').text
        self._expect(':')
        type_name = self._expect_id('type name').text
        direction = Direction.UNSPECIFIED
        if self._at('maximized', 'minimized'):
            direction = Direction(self._advance().text)
        self._expect('{')
        self._expect('priorities')
        self._expect(':')
        priorities = self._functions()
        self._expect('definitions')
        self._expect(':')
        definitions = self._functions()
        self._expect('}')
        return PropertyDecl(name, type_name, direction, priorities,
                            definitions)

    def _functions(self):
        functions = [self._function()]
        while self._at(','):
            self._advance()
            functions.append(self._function())
        self._expect(';')
        return tuple(functions)

    def _function(self):
        start = self.current.span
        name = self._expect_id('function name').text
        self._expect('(')
        params = []
        if not self._at(')'):
            params.append(self._expect_id('parameter name').text)
            while self._at(','):
                self._advance()
                params.append(self._expect_id('parameter name').text)
        self._expect(')')
        self._expect('=')
        body = self.expression()
        return FunctionDefinition(name, tuple(params), body,
                                  _join(start, self.previous.span))

    def _rule(self):
        self._advance()
        name = self._expect_id('rule name').text
        self._expect(':')
        condition = self.expression()
        self._expect('=>')
        consequence = self.expression()
        self._expect(';')
        return AdaptationRule(name, condition, consequence)

    # Expressions, lowest precedence first

    def expression(self):
        return self._or()

    def _binary_level(self, operators, operand):
        start = self.current.span
        left = operand()
        while self._at(*operators):
            op = self._advance().text
            right = operand()
            left = Binary(op, left, right, _join(start, self.previous.span))
        return left

    def _or(self):
        return self._binary_level(('|',), self._and)

    def _and(self):
        return self._binary_level(('&',), self._not)

    def _not(self):
        if self._at('!'):
            start = self._advance().span
            operand = self._not()
            return Unary('!', operand, _join(start, self.previous.span))
        return self._comparison()

    def _comparison(self):
        start = self.current.span
        left = self._additive()
        if self._at(*COMPARISONS):
            op = self._advance().text
            right = self._additive()
            left = Binary(op, left, right, _join(start, self.previous.span))
            if self._at(*COMPARISONS):
                raise _SyntaxError(Diagnostic.error(
                    self.current.span, 'SyntaxError',
                    'Comparisons cannot be chained; add parentheses.',
                ))
        return left

    def _additive(self):
        return self._binary_level(('+', '-'), self._multiplicative)

    def _multiplicative(self):
        return self._binary_level(('*', '/'), self._unary)

    def _unary(self):
        if self._at('-'):
            start = self._advance().span
            operand = self._unary()
            return Unary('-', operand, _join(start, self.previous.span))
        return self._primary()

    def _primary(self):
        token = self.current
        if token.kind in ('int', 'real'):
            self._advance()
            return Literal(token.value, token.span)
        if token.kind == 'id' and token.text in BOOLEANS:
            self._advance()
            return Literal(BOOLEANS[token.text], token.span)
        if token.kind == 'id':
            self._advance()
            if self._at('('):
                return self._call(token)
            return VarRef(token.text, token.span)
        if self._at('('):
            self._advance()
            expr = self.expression()
            self._expect(')')
            return expr
        self._fail(['expression'])

    def _call(self, name):
        self._advance()
        args = [self.expression()]
        while self._at(','):
            self._advance()
            args.append(self.expression())
        self._expect(')')
        span = _join(name.span, self.previous.span)
        if name.text not in FUNCTIONS:
            raise _SyntaxError(Diagnostic.error(
                name.span, 'SyntaxError', f'Unknown function {name.text!r}.'))
        if name.text in EXTREMA and len(args) == 1:
            return Extremum(name.text, args[0], span)
        if len(args) != FUNCTIONS[name.text]:
            raise _SyntaxError(Diagnostic.error(
                span, 'SyntaxError',
                f'{name.text}() takes {FUNCTIONS[name.text]} argument(s), '
                f'got {len(args)}.',
            ))
        return Call(name.text, tuple(args), span)


def parse(text):
    """Parse `text`, returning (Model, diagnostics) without raising."""
    tokens, diagnostics = scan(text)
    parser = Parser(tokens)
    model = parser.parse_model()
    diagnostics = diagnostics + parser.diagnostics
    logger.debug('Parsed %d declarations with %d diagnostics.',
                 len(model.declarations), len(diagnostics))
    return model, diagnostics


def parse_model(text):
    """Parse a VML model; raises DiagnosticError on any syntax error."""
    model, diagnostics = parse(text)
    if has_errors(diagnostics):
        raise DiagnosticError(diagnostics)
    return model


def parse_expression(text):
    """Parse a standalone expression such as `ctx_battery < 15`."""
    tokens, diagnostics = scan(text)
    if diagnostics:
        raise DiagnosticError(diagnostics)
    parser = Parser(tokens)
    try:
        expr = parser.expression()
        if not parser._at_kind('eof'):
            parser._fail(['end of input'])
    except _SyntaxError as error:
        raise DiagnosticError([error.diagnostic]) from None
    return expr
