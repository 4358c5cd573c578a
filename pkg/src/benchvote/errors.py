"""Exception types raised by benchvote.

Every error that stems from caller input derives from :class:`BenchvoteError`;
the CLI maps those to exit code 1 and anything else to exit code 2.
"""


class BenchvoteError(Exception):
    """Base class for all input/domain errors raised by this package."""


class MissingScore(BenchvoteError):
    def __init__(self, dataset: str, model: str, metric: str):
        super().__init__(f"no score for model {model!r}, metric {metric!r} on dataset {dataset!r}")
        self.dataset = dataset
        self.model = model
        self.metric = metric


class EmptyMetricList(BenchvoteError):
    pass


class ModelSetMismatch(BenchvoteError):
    pass


class TooManyModels(BenchvoteError):
    pass


class TooFewModels(BenchvoteError):
    pass


class TooFewMetrics(BenchvoteError):
    pass


class SetTooSmall(BenchvoteError):
    pass


class AddedModelInBase(BenchvoteError):
    pass


class MemberNotInFamily(BenchvoteError):
    pass


class IntransitiveOrTiedInput(BenchvoteError):
    """A relation with ties or cycles cannot be turned into a strict ranking."""


class UnknownMetric(BenchvoteError):
    pass


class UnknownModel(BenchvoteError):
    pass


class ParseError(BenchvoteError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class NonFiniteValue(ParseError):
    def __init__(self, line: int, raw: str):
        super().__init__(line, f"non-finite value {raw!r}")
        self.raw = raw


class ConfigError(BenchvoteError):
    pass
