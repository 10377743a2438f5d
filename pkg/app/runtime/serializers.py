"""
Serializers for pipeline manifests.
"""

from rest_framework import serializers

from core.exceptions import DiagnosticError

from analysis.pipeline import Link
from language.grammar import parse_expression
from runtime.store import SubscriptionMode


class ModelEntrySerializer(serializers.Serializer):
    """Serializer for a model file of a manifest."""

    path = serializers.CharField()
    name = serializers.CharField(required=False)


class LinkField(serializers.CharField):
    """`producer.varpoint -> consumer.context` read into a Link."""

    def to_internal_value(self, data):
        text = super().to_internal_value(data)
        try:
            return Link.parse(text)
        except ValueError as error:
            raise serializers.ValidationError(str(error))


class PredicateField(serializers.CharField):
    """An expression parsed from its source text."""

    def to_internal_value(self, data):
        text = super().to_internal_value(data)
        try:
            return parse_expression(text)
        except DiagnosticError as error:
            raise serializers.ValidationError(
                [d.message for d in error.diagnostics])


class SubscriptionSerializer(serializers.Serializer):
    """Serializer for an event subscription."""

    id = serializers.CharField()
    context = serializers.CharField()
    predicate = PredicateField()
    mode = serializers.ChoiceField(
        choices=[mode.value for mode in SubscriptionMode],
        default=SubscriptionMode.PUSH.value)


class ManifestSerializer(serializers.Serializer):
    """Serializer for a whole pipeline manifest."""

    models = ModelEntrySerializer(many=True, allow_empty=False)
    links = serializers.ListField(child=LinkField(), default=list)
    subscriptions = SubscriptionSerializer(many=True, default=list)

    def validate_subscriptions(self, value):
        ids = [subscription['id'] for subscription in value]
        if len(set(ids)) != len(ids):
            raise serializers.ValidationError(
                'Subscription ids must be unique.')
        return value
