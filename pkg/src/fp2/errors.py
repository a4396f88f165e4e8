"""Exception types shared across the package."""


class Fp2Error(Exception):
    pass


class PatternError(Fp2Error, ValueError):
    """A selection mapping or certificate is malformed or invalid."""


class NotCallSafe(Fp2Error):
    pass


class LimitExceeded(Fp2Error):
    """A configured size or step limit was hit; not a wrong answer."""


class BudgetExceeded(LimitExceeded):
    pass


class DerivationError(Fp2Error):
    pass


class NotGround(Fp2Error, ValueError):
    pass
