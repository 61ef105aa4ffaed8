"""
Exceptions raised by qmediator
"""


class QMediatorError(Exception):
    pass


class InvalidInputError(QMediatorError, ValueError):
    """
    An input was rejected: wrong shape, not Hermitian, not a valid state, malformed file, etc.
    """


class ImpossibleOutcomeError(QMediatorError):
    """
    A post-selected outcome has (numerically) zero probability, so no conditional state exists
    """

    def __init__(self, probability, message=None):
        self.probability = float(probability)
        if message is None:
            message = f"post-selected outcome is impossible (probability {self.probability:.3e})"
        super().__init__(message)


class DegenerateStateError(QMediatorError, ValueError):
    """
    A closed-form state or quantity is undefined because its normalization vanishes
    """
