"""Exception hierarchy shared by all modules."""


class MDCError(Exception):
    """Base class for every error raised by this package."""


class InvalidTau(MDCError, ValueError):
    pass


class SymbolicObstruction(MDCError, ArithmeticError):
    """An operation would need tau*tau for an indeterminate tau."""


class BackendMismatch(MDCError, TypeError):
    pass


class IdentityInput(MDCError, ValueError):
    pass


class FieldExtensionRequired(MDCError, ArithmeticError):
    """A square root needed by an exact computation is not in Q(zeta_12)."""


class SymbolicMultiplierViolation(MDCError, ValueError):
    pass


class TauConstraintViolation(MDCError, ValueError):
    pass


class NonDiscrete(MDCError):
    pass


class NonOrbifold(MDCError):
    pass


class CertificateFailure(MDCError):
    def __init__(self, check, detail=""):
        self.check = check
        self.detail = detail
        super().__init__(f"certificate check failed: {check}" + (f" ({detail})" if detail else ""))


class RecipeInvariantViolation(MDCError, ValueError):
    pass


class UnknownGenerator(MDCError, KeyError):
    pass


class UnknownFamily(MDCError, ValueError):
    pass


class DepthOverflow(MDCError):
    pass


class EmptyGenerators(MDCError, ValueError):
    pass


class BadViewport(MDCError, ValueError):
    pass


class TooFewPoints(MDCError, ValueError):
    pass
