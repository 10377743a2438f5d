"""
Serializers for solver results.
"""

from rest_framework import serializers


class SolutionSerializer(serializers.Serializer):
    """Serializer for Solutions; bindings use enum literal names."""

    model = serializers.CharField()
    status = serializers.SerializerMethodField()
    bindings = serializers.DictField(source='labels')
    objective = serializers.FloatField(allow_null=True)
    triggered = serializers.ListField(child=serializers.CharField())
    context = serializers.DictField()
    clamped = serializers.ListField(child=serializers.CharField())
    nodes = serializers.IntegerField()
    elapsed = serializers.FloatField()

    def get_status(self, solution):
        return solution.status.value

