"""
Analysis serializers for option validation and report serialization

AnalysisOptionsSerializer is shared by the REST endpoint and the
management commands, so both accept the same option values.
"""

from rest_framework import serializers

from apps.core.exceptions import AnalysisError
from apps.pipeline.options import ALGORITHMS, AnalysisOptions, parse_cap, parse_number

from .models import AnalysisRun


class BindingsField(serializers.Field):
    """
    NAME=VALUE bindings, given as a dict or as a list of 'NAME=VALUE' strings
    """

    def __init__(self, *, parse, **kwargs):
        self.parse = parse
        kwargs.setdefault('required', False)
        super().__init__(**kwargs)

    def to_internal_value(self, data):
        if isinstance(data, str):
            data = [data]
        if isinstance(data, (list, tuple)):
            pairs = {}
            for item in data:
                name, sep, value = str(item).partition('=')
                if not sep or not name.strip():
                    raise serializers.ValidationError(f"'{item}' is not of the form NAME=VALUE")
                pairs[name.strip()] = value.strip()
            data = pairs
        if not isinstance(data, dict):
            raise serializers.ValidationError("Expected NAME=VALUE bindings")
        try:
            return {str(name): self.parse(value) for name, value in data.items()}
        except AnalysisError as exc:
            raise serializers.ValidationError(str(exc))

    def to_representation(self, value):
        return {name: (None if v is None else str(v)) for name, v in value.items()}


class AnalysisOptionsSerializer(serializers.Serializer):
    """Serializer for analysis options"""
    algorithm = serializers.ChoiceField(choices=ALGORITHMS, default='probobs')
    unknown_derivs = BindingsField(parse=parse_cap)
    known_input_cap = serializers.IntegerField(min_value=0, required=False, allow_null=True)
    fix = BindingsField(parse=parse_number)
    seed = serializers.IntegerField(min_value=0, required=False, allow_null=True)
    prime = serializers.IntegerField(min_value=3, required=False, allow_null=True)
    max_lie = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    min_lie = serializers.IntegerField(min_value=0, required=False, allow_null=True)
    node_budget = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    taylor_order = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    taylor_center = BindingsField(parse=parse_number)
    retry_budget = serializers.IntegerField(min_value=0, required=False, allow_null=True)
    sample_bound = serializers.IntegerField(min_value=2, required=False, allow_null=True)
    truncation_order = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    time_budget = serializers.FloatField(min_value=0, required=False, allow_null=True)

    def validate(self, attrs):
        try:
            attrs['options'] = AnalysisOptions.from_settings(**attrs)
        except AnalysisError as exc:
            raise serializers.ValidationError(str(exc))
        if attrs['options'].prime <= (attrs['options'].truncation_order or 0):
            raise serializers.ValidationError("prime must exceed the truncation order")
        return attrs

    def to_options(self) -> AnalysisOptions:
        return self.validated_data['options']


class AnalysisCreateSerializer(AnalysisOptionsSerializer):
    """Serializer for running an analysis over the API"""
    model = serializers.CharField(max_length=200, required=False)
    variant = serializers.CharField(max_length=100, required=False)
    model_text = serializers.CharField(required=False)
    name = serializers.CharField(max_length=200, required=False, default='posted')

    def validate(self, attrs):
        source = {key: attrs.pop(key) for key in ('model', 'variant', 'model_text', 'name') if key in attrs}
        if bool(source.get('model')) == bool(source.get('model_text')):
            raise serializers.ValidationError("Give exactly one of 'model' and 'model_text'")
        attrs = super().validate(attrs)
        attrs.update(source)
        return attrs


class AnalysisRunSerializer(serializers.ModelSerializer):
    """Serializer for AnalysisRun responses"""
    prime = serializers.CharField(read_only=True)

    class Meta:
        model = AnalysisRun
        fields = [
            'id', 'model_id', 'algorithm', 'status', 'stop_reason',
            'rank', 'dimension', 'seed', 'prime', 'duration',
            'options', 'report', 'created_at', 'updated_at'
        ]
        read_only_fields = fields


class CorpusEntrySerializer(serializers.Serializer):
    """Serializer for corpus listings"""
    key = serializers.CharField()
    name = serializers.CharField()
    variant = serializers.CharField()
    has_golden = serializers.BooleanField()
