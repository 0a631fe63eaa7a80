"""Error taxonomy shared by every layer of the package.

Each exception carries a stable machine-readable ``code`` so CLI reports and
law results can name failures without string-matching Python messages.
"""


class UsmodError(Exception):
    code = "error"


class InvalidRingError(UsmodError):
    code = "invalid-ring"


class InvalidModuleError(UsmodError):
    code = "invalid-module"


class InvalidMultiplicativeSetError(UsmodError):
    code = "invalid-multiplicative-set"


class ImproperIdealError(UsmodError):
    code = "improper-ideal"


class NotPrimeError(UsmodError):
    code = "not-prime"


class DomainError(UsmodError):
    """Structural mismatch between arguments (wrong parent, wrong ring...)."""

    code = "domain-error"


class ResourceExceededError(UsmodError):
    """A size cap or enumeration budget was hit before the answer was known."""

    code = "resource-exceeded"


class PreconditionViolatedError(UsmodError):
    code = "precondition-violated"


class UnsupportedRingError(UsmodError):
    code = "unsupported-ring"


class ConfigError(UsmodError):
    code = "config-error"


class InternalError(UsmodError):
    code = "internal-error"


class IOErrorUsmod(UsmodError):
    code = "io-error"
