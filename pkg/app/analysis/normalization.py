"""
Normalization ranges of property functions.

Priorities are scaled to [0, 1] and definitions to [0, 100]. The range of
each function is found by evaluating it over the joint grid of its
parameters; oversized grids are thinned uniformly first.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from django.conf import settings

from core.diagnostics import Diagnostic
from core.exceptions import DiagnosticError
from core.expressions import ArrayEvaluator

logger = logging.getLogger(__name__)

PRIORITY_SCALE = 1.0
DEFINITION_SCALE = 100.0


@dataclass(frozen=True)
class FunctionExtrema:
    """Range of one priority or definition function over its grid."""

    property: str
    role: str
    index: int
    params: tuple
    lo: float
    hi: float
    points: int
    coarsened: bool = False

    @property
    def scale(self):
        return PRIORITY_SCALE if self.role == 'priority' else DEFINITION_SCALE

    def normalize(self, value):
        """Map a raw function value into [0, scale], clipping overshoot."""
        scaled = (np.asarray(value, dtype=float) - self.lo) \
            / (self.hi - self.lo) * self.scale
        return np.clip(scaled, 0.0, self.scale)


@dataclass(frozen=True)
class PropertyNormalization:
    name: str
    priorities: tuple
    definitions: tuple

    @staticmethod
    def _average(extrema, values):
        return sum(e.normalize(v) for e, v in zip(extrema, values)) \
            / len(extrema)

    def weight(self, values):
        """Normalized priority from the raw values of each priority."""
        return self._average(self.priorities, values)

    def score(self, values):
        """Normalized property value from the raw value of each definition."""
        return self._average(self.definitions, values)


@dataclass(frozen=True)
class NormalizationInfo:
    properties: dict

    def __getitem__(self, name):
        return self.properties[name]

    def __iter__(self):
        return iter(self.properties.values())


def _thin(domain, count):
    indices = np.unique(np.round(np.linspace(0, len(domain) - 1, count))
                        .astype(int))
    return domain.as_array()[indices]


def parameter_grid(tm, params, max_points=None):
    """
    Sparse joint grid of `params`: (env of broadcastable arrays, shape,
    coarsened flag).
    """
    if max_points is None:
        max_points = settings.VML_MAX_GRID_POINTS
    domains = [tm.domain(name) for name in params]
    axes = [domain.as_array() for domain in domains]
    total = math.prod(len(axis) for axis in axes)
    coarsened = total > max_points
    if coarsened:
        factor = (total / max_points) ** (1 / len(axes))
        axes = [_thin(domain, max(2, int(len(domain) / factor)))
                for domain in domains]
        logger.info('Thinned grid of %s from %d to %d points.',
                    ', '.join(params), total,
                    math.prod(len(axis) for axis in axes))
    mesh = np.meshgrid(*axes, indexing='ij', sparse=True)
    shape = tuple(len(axis) for axis in axes)
    return dict(zip(params, mesh)), shape, coarsened


def function_values(tm, function, env, shape):
    """Evaluate a property function over a grid environment."""
    evaluator = ArrayEvaluator(tm.domains(), tm.units, tm.constants)
    values = evaluator.evaluate(function.body, env)
    return np.broadcast_to(values.astype(float), shape)


def _extrema(tm, prop, role, index, function, max_points, diagnostics):
    env, shape, coarsened = parameter_grid(tm, function.params, max_points)
    values = function_values(tm, function, env, shape)
    lo, hi = float(values.min()), float(values.max())
    if hi - lo <= 1e-12 * max(1.0, abs(hi)):
        diagnostics.append(Diagnostic.error(
            function.span, 'ConstantFunction',
            f'The {role} function {index + 1} of {prop.name!r} is constant '
            f'({lo:g}) and cannot be normalized.',
        ))
    return FunctionExtrema(prop.name, role, index, function.params, lo, hi,
                           int(values.size), coarsened)


def compute_normalization(tm, max_points=None):
    """Extrema of every priority and definition function of `tm`."""
    properties, diagnostics = {}, []
    for prop in tm.model.properties:
        priorities = tuple(
            _extrema(tm, prop, 'priority', i, f, max_points, diagnostics)
            for i, f in enumerate(prop.priorities))
        definitions = tuple(
            _extrema(tm, prop, 'definition', i, f, max_points, diagnostics)
            for i, f in enumerate(prop.definitions))
        properties[prop.name] = PropertyNormalization(
            prop.name, priorities, definitions)
    if diagnostics:
        raise DiagnosticError(diagnostics)
    return NormalizationInfo(properties)
