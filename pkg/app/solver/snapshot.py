"""
Context snapshots: the concrete context a problem is solved for.
"""

import logging
from dataclasses import dataclass

from core.exceptions import IncompleteBinding
from core.types import clamp

logger = logging.getLogger(__name__)

BOOLEANS = {'true': True, 'false': False, '1': True, '0': False}


@dataclass(frozen=True)
class ContextSnapshot:
    """
    Context values in their declared units, keyed in parameter order.

    `clamped` names the contexts whose given value lay outside the declared
    range and was moved onto it.
    """

    values: dict
    clamped: tuple = ()

    def __getitem__(self, name):
        return self.values[name]

    def __contains__(self, name):
        return name in self.values

    def items(self):
        return self.values.items()


def coerce_value(variable, value):
    """
    The domain value of `variable` closest to `value`.

    Enum values may be given by literal name or code, booleans as `true`
    or `false`; numbers are clamped into range and snapped to the grid.
    Returns (value, clamped).
    """
    domain = variable.domain
    if variable.is_enum:
        if isinstance(value, str) and not value.lstrip('-').isdigit():
            try:
                return variable.type.code_of(value), False
            except KeyError:
                raise ValueError(
                    f'{value!r} is not a literal of {variable.type.name}.'
                ) from None
        code = int(value)
        if code not in domain.values:
            raise ValueError(f'{code} is not a code of {variable.type.name}.')
        return code, False
    if variable.is_boolean:
        if isinstance(value, str):
            if value.lower() not in BOOLEANS:
                raise ValueError(f'{value!r} is not a boolean.')
            return BOOLEANS[value.lower()], False
        return bool(value), False
    number = float(value)
    bounded = clamp(variable.type, number)
    return domain.snap(bounded), bounded != number


def make_snapshot(cp, values):
    """
    A ContextSnapshot of `values` for the parameters of `cp`.

    Names that are not parameters of `cp` are ignored, so one context
    store can feed several problems. Raises IncompleteBinding when a
    parameter has no value.
    """
    if isinstance(values, ContextSnapshot):
        values = values.values
    missing = [name for name in cp.parameter_names if name not in values]
    if missing:
        raise IncompleteBinding(
            f'Missing context values for {", ".join(missing)}.')
    snapshot, clamped = {}, []
    for parameter in cp.parameters:
        given = values[parameter.name]
        value, moved = coerce_value(parameter, given)
        if moved:
            logger.warning(
                'Context %s=%s is outside [%s, %s]; clamped to %s.',
                parameter.name, given, parameter.type.lo, parameter.type.hi,
                value)
            clamped.append(parameter.name)
        snapshot[parameter.name] = value
    return ContextSnapshot(snapshot, tuple(clamped))
