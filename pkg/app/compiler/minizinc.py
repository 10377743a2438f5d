"""
MiniZinc rendering of constraint problems.

Contexts become parameters, variation points decision variables, rules and
varpoint constraints `guard -> relation` constraints, and properties a
`solve minimize` over weighted terms. Nonlinear definitions enter through
an auxiliary variable bound by one constraint per chord segment.
"""

import logging
from dataclasses import dataclass, field

from core.exceptions import NonLinearizedTerm
from core.expressions import (
    COMPARISONS,
    LOGICAL,
    Binary,
    Call,
    Literal,
    Unary,
    VarRef,
)

from analysis.normalization import DEFINITION_SCALE
from language.printer import PRECEDENCE, UNARY_MINUS

logger = logging.getLogger(__name__)

OPERATORS = {'&': '/\\', '|': '\\/'}


@dataclass(frozen=True)
class MznParameter:
    """`kind: name;` or, with `expr`, `kind: name = expr;`."""

    kind: str
    name: str
    expr: object = None
    comment: str = None


@dataclass(frozen=True)
class MznVariable:
    name: str
    domain: str
    comment: str = None


@dataclass(frozen=True)
class MznConstraint:
    guard: object
    relation: object


@dataclass(frozen=True)
class Auxiliary:
    """A variable standing for a chord surrogate, with its segments."""

    variable: MznVariable
    surrogate: object
    constraints: tuple


@dataclass(frozen=True)
class MiniZincModel:
    """Structured MiniZinc model; expressions stay evaluable Exprs."""

    name: str
    parameters: tuple
    variables: tuple
    constraints: tuple
    auxiliaries: tuple
    objective: object
    int_names: frozenset = field(default=frozenset(), repr=False)
    bool_names: frozenset = field(default=frozenset(), repr=False)


def format_float(value):
    """A float literal MiniZinc reads back, e.g. `100.0` or `1.0e-05`."""
    text = repr(float(value))
    if 'e' in text:
        mantissa, exponent = text.split('e')
        if '.' not in mantissa:
            mantissa += '.0'
        text = f'{mantissa}e{exponent}'
    return text


class MiniZincPrinter:
    """
    Renders unit-free expressions as MiniZinc.

    Integer-valued names are wrapped in `int2float` where they meet float
    arithmetic, since MiniZinc does not mix the two implicitly.
    """

    def __init__(self, int_names, bool_names):
        self.int_names = int_names
        self.bool_names = bool_names

    def is_int(self, expr):
        if isinstance(expr, Literal):
            return isinstance(expr.value, int) \
                and not isinstance(expr.value, bool)
        if isinstance(expr, VarRef):
            return expr.name in self.int_names
        if isinstance(expr, Unary):
            return expr.op == '-' and self.is_int(expr.operand)
        if isinstance(expr, Binary) and expr.op in ('+', '-', '*'):
            return self.is_int(expr.left) and self.is_int(expr.right)
        if isinstance(expr, Call) and expr.func != 'exp':
            return all(self.is_int(arg) for arg in expr.args)
        return False

    def is_bool(self, expr):
        if isinstance(expr, Literal):
            return isinstance(expr.value, bool)
        if isinstance(expr, VarRef):
            return expr.name in self.bool_names
        if isinstance(expr, Unary):
            return expr.op == '!'
        if isinstance(expr, Binary):
            return expr.op in LOGICAL or expr.op in COMPARISONS
        return False

    def render(self, expr, as_float=False):
        if isinstance(expr, Literal):
            if isinstance(expr.value, bool):
                return 'true' if expr.value else 'false'
            if as_float or isinstance(expr.value, float):
                return format_float(expr.value)
            return str(expr.value)
        if isinstance(expr, VarRef):
            if as_float and expr.name in self.int_names:
                return f'int2float({expr.name})'
            return expr.name
        if isinstance(expr, Unary):
            if expr.op == '!':
                return f'not ({self.render(expr.operand)})'
            return '-' + self._wrap(expr.operand, UNARY_MINUS, as_float)
        if isinstance(expr, Binary):
            return self._binary(expr, as_float)
        if isinstance(expr, Call):
            floats = as_float or not self.is_int(expr)
            args = ', '.join(self.render(arg, floats) for arg in expr.args)
            return f'{expr.func}({args})'
        raise TypeError(f'Cannot render {expr!r} as MiniZinc.')

    def _binary(self, expr, as_float):
        level = PRECEDENCE[expr.op]
        if expr.op in LOGICAL:
            floats = False
        elif expr.op in COMPARISONS:
            operands = (expr.left, expr.right)
            floats = not any(self.is_bool(o) for o in operands) \
                and not all(self.is_int(o) for o in operands)
        else:
            floats = as_float or not self.is_int(expr)
        left_level = level + 1 if expr.op in COMPARISONS else level
        left = self._wrap(expr.left, left_level, floats)
        right = self._wrap(expr.right, level + 1, floats)
        return f'{left} {OPERATORS.get(expr.op, expr.op)} {right}'

    def _wrap(self, expr, minimum, as_float):
        text = self.render(expr, as_float)
        if _precedence(expr) < minimum:
            return f'({text})'
        return text


def _precedence(expr):
    if isinstance(expr, Binary):
        return PRECEDENCE[expr.op]
    if isinstance(expr, Unary) and expr.op == '-':
        return UNARY_MINUS
    if isinstance(expr, Literal) and not isinstance(expr.value, bool) \
            and expr.value < 0:
        return UNARY_MINUS
    return max(PRECEDENCE.values()) + 2


def _kind(variable):
    if variable.is_boolean:
        return 'bool'
    return 'int' if variable.is_integral else 'float'


def _codes_comment(variable):
    if not variable.is_enum:
        return None
    return ', '.join(f'{code} = {variable.label(code)}'
                     for code in variable.domain)


def _domain_text(variable):
    domain = variable.domain
    if variable.is_boolean:
        return 'bool'
    if variable.is_enum:
        return '{' + ', '.join(str(code) for code in domain) + '}'
    if variable.is_integral:
        return f'{domain.lo}..{domain.last}'
    return f'{format_float(domain.lo)}..{format_float(domain.last)}'


def _segment_constraints(surrogate, aux_name):
    x = VarRef(surrogate.variable)
    constraints = []
    bounds = list(zip(surrogate.breakpoints, surrogate.breakpoints[1:]))
    for index, (start, end) in enumerate(bounds):
        upper = '<=' if index == len(bounds) - 1 else '<'
        guard = Binary('&', Binary('>=', x, Literal(start)),
                       Binary(upper, x, Literal(end)))
        slope = surrogate.slopes[index]
        intercept = surrogate.intercepts[index]
        line = Binary('*', Literal(slope), x)
        if intercept < 0:
            line = Binary('-', line, Literal(-intercept))
        else:
            line = Binary('+', line, Literal(intercept))
        constraints.append(
            MznConstraint(guard, Binary('=', VarRef(aux_name), line)))
    return tuple(constraints)


def _term_value(term, auxiliaries):
    values = []
    for index, definition in enumerate(term.definitions):
        if not definition.is_linearized:
            raise NonLinearizedTerm(
                f'Definition {index + 1} of {term.property!r} is nonlinear '
                f'in {", ".join(definition.variables)} and has no '
                f'piecewise surrogate.')
        if definition.affine:
            values.append(definition.expr)
            continue
        name = f'aux_{term.property}_{index}'
        auxiliaries.append(Auxiliary(
            MznVariable(name, f'0.0..{format_float(DEFINITION_SCALE)}'),
            definition.surrogate,
            _segment_constraints(definition.surrogate, name),
        ))
        values.append(VarRef(name))
    total = values[0]
    for value in values[1:]:
        total = Binary('+', total, value)
    if len(values) > 1:
        total = Binary('/', total, Literal(float(len(values))))
    return total


def build_minizinc(cp):
    """
    The MiniZinc model of a ConstraintProblem.

    Raises NonLinearizedTerm when a definition is nonlinear in more than
    one variable.
    """
    int_names = {v.name for v in cp.parameters + cp.variables
                 if v.is_integral and not v.is_boolean}
    bool_names = {v.name for v in cp.parameters + cp.variables
                  if v.is_boolean}
    printer = MiniZincPrinter(int_names, bool_names)
    parameters = [MznParameter(_kind(p), p.name, comment=_codes_comment(p))
                  for p in cp.parameters]
    for general in cp.general_vars:
        if general.kind == 'boolean':
            kind = 'bool'
            bool_names.add(general.name)
        elif printer.is_int(general.expr):
            kind = 'int'
            int_names.add(general.name)
        else:
            kind = 'float'
        parameters.append(MznParameter(kind, general.name, general.expr))
    auxiliaries, objective = [], None
    for term in cp.objective:
        weight = f'priority_{term.property}'
        parameters.append(MznParameter('float', weight, term.weight))
        value = _term_value(term, auxiliaries)
        if term.sign < 0:
            value = Binary('*', Literal(-1.0), value)
        product = Binary('*', VarRef(weight), value)
        objective = product if objective is None \
            else Binary('+', objective, product)
    return MiniZincModel(
        name=cp.name,
        parameters=tuple(parameters),
        variables=tuple(
            MznVariable(v.name, _domain_text(v), _codes_comment(v))
            for v in cp.variables),
        constraints=tuple(
            MznConstraint(None if c.is_unconditional
                          else c.guard, c.relation)
            for c in cp.constraints),
        auxiliaries=tuple(auxiliaries),
        objective=objective,
        int_names=frozenset(int_names),
        bool_names=frozenset(bool_names),
    )


def _with_comment(text, comment):
    return f'{text}  % {comment}' if comment else text


def render_minizinc(model):
    """MiniZinc source text of a MiniZincModel."""
    printer = MiniZincPrinter(model.int_names, model.bool_names)
    lines = [f'% MiniZinc model generated from VML model {model.name}']
    for parameter in model.parameters:
        text = f'{parameter.kind}: {parameter.name}'
        if parameter.expr is not None:
            floats = parameter.kind == 'float'
            text += ' = ' + printer.render(parameter.expr, floats)
        lines.append(_with_comment(text + ';', parameter.comment))
    for variable in model.variables:
        lines.append(_with_comment(
            f'var {variable.domain}: {variable.name};', variable.comment))

    def constraint(item):
        relation = printer.render(item.relation)
        if item.guard is None:
            return f'constraint {relation};'
        return f'constraint {printer.render(item.guard)} -> {relation};'

    lines.extend(constraint(item) for item in model.constraints)
    for auxiliary in model.auxiliaries:
        lines.append(f'var {auxiliary.variable.domain}: '
                     f'{auxiliary.variable.name};')
        lines.extend(constraint(item) for item in auxiliary.constraints)
    if model.objective is None:
        lines.append('solve satisfy;')
    else:
        lines.append(f'solve minimize {printer.render(model.objective)};')
    return '\n'.join(lines) + '\n'


def emit_minizinc(cp):
    """MiniZinc text of `cp`, deterministic in declaration order."""
    text = render_minizinc(build_minizinc(cp))
    logger.debug('Emitted %d lines of MiniZinc for %r.',
                 text.count('\n'), cp.name)
    return text
