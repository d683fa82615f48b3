"""Exception hierarchy with CLI exit codes attached per error family."""


class EnsembleForgeError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class InputError(EnsembleForgeError):
    """I/O family: missing or unreadable files, unparsable manifests."""

    exit_code = 2


class ValidationError(EnsembleForgeError):
    """Data family: inputs that parse but violate a domain invariant."""

    exit_code = 3


class ConfigError(EnsembleForgeError):
    """Configuration family: parameter values outside their allowed ranges."""

    exit_code = 4


class ManifestParseError(InputError):
    pass


class EmptyMatrixError(ValidationError):
    pass


class NonRectangularError(ValidationError):
    pass


class NegativeProbabilityError(ValidationError):
    pass


class NonFiniteValueError(ValidationError):
    pass


class RowSumOutOfToleranceError(ValidationError):
    pass


class ShapeMismatchError(ValidationError):
    pass


class LabelOutOfRangeError(ValidationError):
    pass


class LengthMismatchError(ValidationError):
    pass


class DegenerateWeightsError(ValidationError):
    pass


class TooManyMembersError(ConfigError):
    pass


class BadStepError(ConfigError):
    pass
