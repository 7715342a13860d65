from rest_framework import serializers


class DatasetDescriptorSerializer(serializers.Serializer):
    id = serializers.CharField()
    name = serializers.CharField()
    feature_count = serializers.IntegerField()
    feature_names = serializers.ListField(child=serializers.CharField())
    value_domains = serializers.ListField(child=serializers.CharField())
    label_column = serializers.CharField()
    expected_rows = serializers.IntegerField(allow_null=True)
    provenance = serializers.CharField(allow_blank=True)


class ClassCountSerializer(serializers.Serializer):
    label = serializers.CharField(source="label.label")
    code = serializers.IntegerField(source="label.value")
    count = serializers.IntegerField()
