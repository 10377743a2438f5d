"""
Pipeline manifests: model files, links and subscriptions in one JSON file.

    {
      "models": [{"name": "velocity", "path": "velocity.vml"}],
      "links": ["velocity.maximumVelocity -> coffee.ctx_maxAllowedVelocity"],
      "subscriptions": [{"id": "low_battery", "context": "ctx_battery",
                         "predicate": "ctx_battery < 15", "mode": "push"}]
    }

Model paths are relative to the manifest.
"""

import io
from dataclasses import dataclass
from pathlib import Path

from rest_framework.exceptions import ParseError
from rest_framework.parsers import JSONParser

from core.exceptions import ManifestError

from analysis.loading import load_model
from analysis.pipeline import link_models
from runtime.serializers import ManifestSerializer
from runtime.store import Subscription, SubscriptionMode


@dataclass(frozen=True)
class Manifest:
    pipeline: object
    subscriptions: tuple


def _messages(errors, prefix=''):
    if isinstance(errors, dict):
        for key, value in errors.items():
            yield from _messages(value, f'{prefix}{key}: ')
    elif isinstance(errors, list):
        for value in errors:
            yield from _messages(value, prefix)
    else:
        yield f'{prefix}{errors}'


def read_manifest(data, base):
    """
    Build a Manifest from parsed JSON `data`, resolving paths from `base`.

    Raises ManifestError for invalid structure and DiagnosticError when a
    model or link does not check.
    """
    serializer = ManifestSerializer(data=data)
    if not serializer.is_valid():
        raise ManifestError('; '.join(_messages(serializer.errors)))
    validated = serializer.validated_data
    models = []
    for entry in validated['models']:
        path = Path(base) / entry['path']
        if not path.is_file():
            raise ManifestError(f'Model file {path} does not exist.')
        models.append(load_model(path, entry.get('name')))
    pipeline = link_models(models, validated['links'])
    declared = {s.name for tm in models for s in tm.contexts}
    subscriptions = []
    for item in validated['subscriptions']:
        if item['context'] not in declared:
            raise ManifestError(
                f'Subscription {item["id"]!r} watches undeclared context '
                f'{item["context"]!r}.')
        subscriptions.append(Subscription(
            item['id'], item['context'], item['predicate'],
            SubscriptionMode(item['mode'])))
    return Manifest(pipeline, tuple(subscriptions))


def load_manifest(path):
    """Read a manifest file."""
    path = Path(path)
    try:
        data = JSONParser().parse(io.BytesIO(path.read_bytes()))
    except ParseError as error:
        raise ManifestError(f'{path}: {error.detail}') from None
    return read_manifest(data, path.parent)
