class BenchmarkError(Exception):
    """Base class for every error raised by the toolkit."""


class DatasetError(BenchmarkError):
    pass


class SplitError(BenchmarkError):
    pass


class ReductionError(BenchmarkError):
    pass


class ClassifierError(BenchmarkError):
    pass


class InvalidHyperparams(ClassifierError):
    pass


class MetricsError(BenchmarkError):
    pass


class UrlParseError(BenchmarkError):
    pass


class ConfigurationError(BenchmarkError):
    pass
