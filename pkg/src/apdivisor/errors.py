"""Exception hierarchy shared by the exact and numeric layers."""


class ApDivisorError(Exception):
    """Base class for all errors raised by apdivisor."""


class FieldError(ApDivisorError, ValueError):
    pass


class NonMonicError(FieldError):
    pass


class NoRootInIntervalError(FieldError):
    pass


class MultipleRootsInIntervalError(FieldError):
    pass


class RationalRootPresentError(FieldError):
    pass


class IrreducibilityNotCertifiedError(FieldError):
    """Degree >= 4 minimal polynomial without the caller asserting irreducibility."""


class DimensionMismatchError(ApDivisorError, ValueError):
    pass


class MixedFieldsError(ApDivisorError, ValueError):
    pass


class RDependentPairError(ApDivisorError, ValueError):
    """lambda and mu are linearly dependent over the reals; no period lattice."""


class ConstraintViolatedError(ApDivisorError, ValueError):
    """A term list handed to the merge reduction has sum(alpha*beta) != 0."""


class NotSymmetricGramError(ApDivisorError, ValueError):
    def __init__(self, message, entries=()):
        super().__init__(message)
        self.entries = tuple(entries)


class InternalConstraintViolatedError(ApDivisorError, AssertionError):
    """A bucket lost its zero-sum property after a symmetric Gram check: a bug."""


class ZeroPairError(ApDivisorError, ValueError):
    """lambda = mu = 0: the model divisor is empty and has no zero sheets."""


class SupportExceedsBoxError(ApDivisorError, ValueError):
    pass


class QuadratureError(ApDivisorError, ValueError):
    pass


class ParseError(ApDivisorError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
