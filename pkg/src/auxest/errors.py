"""Exception hierarchy.

Every error raised deliberately by the package derives from :class:`AuxEstError`.
The split between :class:`ConfigError` and :class:`EstimationError` drives the
CLI exit codes (2 and 3 respectively).
"""


class AuxEstError(Exception):
    """Base class for all package errors."""


class ConfigError(AuxEstError):
    """Invalid input data, configuration or estimator specification."""


class EstimationError(AuxEstError):
    """A computation could not be carried out on otherwise valid input."""


# population_model
class EmptyPopulation(ConfigError):
    pass


class PopulationShapeError(ConfigError):
    pass


class MissingAuxiliary(ConfigError):
    pass


class ParseError(ConfigError):
    def __init__(self, row, column, value=None):
        self.row, self.column, self.value = row, column, value
        msg = f"cannot parse row {row}, column {column!r}"
        if value is not None:
            msg += f": {value!r}"
        super().__init__(msg)


class AttributeNotBinary(ConfigError):
    def __init__(self, row, value=None):
        self.row, self.value = row, value
        super().__init__(f"attribute value at row {row} is not 0/1: {value!r}")


class UnattainableTarget(ConfigError):
    pass


class DegenerateVariable(EstimationError):
    pass


# sampling_engine
class SampleTooLarge(ConfigError):
    pass


class PhaseOrderViolation(ConfigError):
    pass


class DegenerateSample(EstimationError):
    pass


class EnumerationTooLarge(ConfigError):
    def __init__(self, size, cap):
        self.size, self.cap = size, cap
        super().__init__(f"{size} subsets exceed the enumeration cap {cap}; "
                         f"raise the cap to at least {size}")


# estimators
class UndefinedEstimate(EstimationError):
    def __init__(self, reason):
        self.reason = reason
        super().__init__(reason)


class MissingKnownParam(ConfigError):
    pass


class MissingStatistic(ConfigError):
    pass


class ZeroDenominator(EstimationError):
    pass


class SingularTheta(EstimationError):
    pass


class ZeroTheta(EstimationError):
    pass


class UnknownEstimator(ConfigError):
    pass


# theory_engine
class MissingSummaryField(ConfigError):
    pass


class PhaseMismatch(ConfigError):
    pass


class InfeasibleMoments(EstimationError):
    pass


class ZeroMse(EstimationError):
    pass


# montecarlo_harness
class IncompatibleSpec(ConfigError):
    pass


class AllDrawsUndefined(EstimationError):
    pass


class UndefinedDrawsAborted(EstimationError):
    def __init__(self, counts):
        self.counts = dict(counts)
        detail = ", ".join(f"{k}: {v}" for k, v in self.counts.items())
        super().__init__(f"undefined draws under policy 'abort' ({detail})")


class SpecMismatch(ConfigError):
    pass


# reporting
class UnknownTable(ConfigError):
    pass


class MissingScalar(ConfigError):
    pass
