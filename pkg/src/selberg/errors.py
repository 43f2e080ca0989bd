"""Exception hierarchy shared by every module.

Each error carries an ``exit_code`` so the command line layer can map
failures to process status without string matching.
"""


class SelbergError(Exception):
    exit_code = 2


class DomainError(SelbergError):
    """Input outside the region where an operation is defined."""


class PoleAt(DomainError):
    def __init__(self, where, detail=""):
        self.where = where
        msg = f"pole at {where}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class PoleHit(PoleAt):
    """A continuation step landed on a genuine pole; names the functional."""

    def __init__(self, functional, value=None):
        self.functional = functional
        self.value = value
        super().__init__(functional, "" if value is None else f"value {value}")


class EmptySet(DomainError):
    pass


class InvalidFace(DomainError):
    pass


class LaurentInput(DomainError):
    pass


class UnsupportedKind(DomainError):
    pass


class UnsupportedShape(DomainError):
    pass


class OutOfDomain(DomainError):
    def __init__(self, msg, violations=()):
        self.violations = list(violations)
        super().__init__(msg)


class DecayViolation(OutOfDomain):
    pass


class BranchCutHit(DomainError):
    pass


class ChartNotCovered(DomainError):
    pass


class InsufficientOrder(DomainError):
    pass


class SineTooSmall(DomainError):
    pass


class VariableOutOfRange(DomainError):
    pass


class PolySyntaxError(DomainError):
    def __init__(self, msg, offset):
        self.offset = offset
        super().__init__(f"{msg} at byte {offset}")


class ConvergenceError(SelbergError):
    exit_code = 3


class Unconverged(ConvergenceError):
    def __init__(self, msg, value=None, err_est=None):
        self.value = value
        self.err_est = err_est
        super().__init__(msg)


class NonConvergent(ConvergenceError):
    pass


class Divergent(ConvergenceError):
    pass


class LimitDisagreement(ConvergenceError):
    pass
