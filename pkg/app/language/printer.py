"""
Pretty-printer producing VML source that parses back to the same model.
"""

from core.expressions import (
    COMPARISONS,
    Binary,
    Call,
    Extremum,
    Literal,
    Unary,
    VarRef,
)
from core.types import BoolType, EnumType, NumericType
from language.nodes import (
    AdaptationRule,
    ContextDecl,
    GeneralVarDecl,
    Implication,
    PropertyDecl,
    TypeDefinition,
    VarpointDecl,
)

INDENT = '  '

PRECEDENCE = {'|': 1, '&': 2, '!': 3, '+': 5, '-': 5, '*': 6, '/': 6}
PRECEDENCE.update({op: 4 for op in COMPARISONS})
UNARY_MINUS = 7
ATOM = 8


def format_number(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def _precedence(expr):
    if isinstance(expr, Binary):
        return PRECEDENCE[expr.op]
    if isinstance(expr, Unary):
        return PRECEDENCE['!'] if expr.op == '!' else UNARY_MINUS
    if isinstance(expr, Literal) and not isinstance(expr.value, bool) \
            and expr.value < 0:
        return UNARY_MINUS
    return ATOM


def _wrap(expr, minimum):
    text = format_expr(expr)
    if _precedence(expr) < minimum:
        return f'({text})'
    return text


def format_expr(expr):
    """Render an expression with the fewest parentheses that keep its shape."""
    if isinstance(expr, Literal):
        return format_number(expr.value)
    if isinstance(expr, VarRef):
        return expr.name
    if isinstance(expr, Unary):
        if expr.op == '!':
            return '!' + _wrap(expr.operand, PRECEDENCE['!'])
        return '-' + _wrap(expr.operand, UNARY_MINUS)
    if isinstance(expr, Binary):
        level = PRECEDENCE[expr.op]
        if expr.op in COMPARISONS:
            left = _wrap(expr.left, level + 1)
        else:
            left = _wrap(expr.left, level)
        right = _wrap(expr.right, level + 1)
        return f'{left} {expr.op} {right}'
    if isinstance(expr, Call):
        return f"{expr.func}({', '.join(format_expr(a) for a in expr.args)})"
    if isinstance(expr, Extremum):
        return f'{expr.func}({format_expr(expr.body)})'
    raise TypeError(f'Cannot print {expr!r}.')


def _format_type(definition):
    t = definition.type
    if isinstance(t, NumericType):
        unit = f' unit: "{t.unit}";' if t.unit is not None else ''
        return (f'number {t.name} {{ range: [{format_number(t.lo)}, '
                f'{format_number(t.hi)}]; precision: '
                f'{format_number(t.precision)};{unit} }}')
    if isinstance(t, EnumType):
        literals = ' '.join(
            f'{literal.name}({literal.code});' if literal.explicit
            else f'{literal.name};'
            for literal in t.literals
        )
        return f'enum {t.name} {{ {literals} }}'
    if isinstance(t, BoolType):
        return f'boolean {t.name};'
    raise TypeError(f'Cannot print {t!r}.')


def _format_constraint(constraint):
    if isinstance(constraint, Implication):
        return (f'{format_expr(constraint.guard)} => '
                f'{format_expr(constraint.consequence)}')
    return format_expr(constraint.relation)


def _format_functions(functions):
    return ', '.join(
        f"{f.name}({', '.join(f.params)}) = {format_expr(f.body)}"
        for f in functions
    )


def _format_property(declaration):
    direction = declaration.direction.value
    header = f'property {declaration.name} : {declaration.type_name}'
    if direction:
        header += f' {direction}'
    return '\n'.join([
        header + ' {',
        f'{INDENT}priorities: {_format_functions(declaration.priorities)};',
        f'{INDENT}definitions: {_format_functions(declaration.definitions)};',
        '}',
    ])


def format_declaration(declaration):
    if isinstance(declaration, TypeDefinition):
        return _format_type(declaration)
    if isinstance(declaration, ContextDecl):
        return f'context {declaration.name} : {declaration.type_name};'
    if isinstance(declaration, GeneralVarDecl):
        annotation = (f' : {declaration.type_name}'
                      if declaration.type_name else '')
        return (f'var {declaration.name}{annotation} = '
                f'{format_expr(declaration.expr)};')
    if isinstance(declaration, VarpointDecl):
        header = f'varpoint {declaration.name} : {declaration.type_name}'
        if not declaration.constraints:
            return header + ';'
        body = ', '.join(_format_constraint(c)
                         for c in declaration.constraints)
        return f'{header} {{ {body}; }}'
    if isinstance(declaration, PropertyDecl):
        return _format_property(declaration)
    if isinstance(declaration, AdaptationRule):
        return (f'rule {declaration.name} : '
                f'{format_expr(declaration.condition)} => '
                f'{format_expr(declaration.consequence)};')
    raise TypeError(f'Cannot print {declaration!r}.')


def pretty_print(model):
    """Render a Model as VML source, one declaration per block."""
    return '\n'.join(format_declaration(d) for d in model.declarations) + '\n'
