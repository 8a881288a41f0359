"""
    Author: julij.jegorov
    Date: 12/10/2026
    Description: Exception hierarchy for futurecone; one class per failure mode so
                 callers (and the CLI exit-code mapping) can tell them apart.
"""


class FutureConeError(ValueError):
    """Base class for every error raised by futurecone."""


class VariantMismatch(FutureConeError):
    """Control kind does not match the dynamics model kind."""


class InadmissibleControl(FutureConeError):
    """Control magnitude exceeds the model bound beyond tolerance."""


class BudgetExhausted(FutureConeError):
    """A budgeted double-integrator step would overdraw the remaining delta-v."""


class UnsupportedAnalytic(FutureConeError):
    """No closed-form leaf exists for the model."""


class NonpositiveHorizon(FutureConeError):
    pass


class InvalidResolution(FutureConeError):
    pass


class BadWindow(FutureConeError):
    pass


class TimeMismatch(FutureConeError):
    pass


class NoOverlap(FutureConeError):
    pass


class GridMismatch(FutureConeError):
    pass


class NoGuarantee(FutureConeError):
    """No grid time achieves containment of the target cone."""


class ConfigError(FutureConeError):
    pass


class EmptyTrajectory(FutureConeError):
    pass


class EmptyPolicies(FutureConeError):
    pass


class UnsatisfiableDistribution(FutureConeError):
    """Too many consecutive scenario draws were rejected by the containment filter."""


class ScenarioError(FutureConeError):
    """Scenario document violates the schema.

    The message carries the offending field path or the JSON line/column.
    """

    def __init__(self, message, field=None):
        super(ScenarioError, self).__init__(message)
        self.field = field
