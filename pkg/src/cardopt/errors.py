"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: ConfigError -> 2,
DataError -> 3, CapExceededError -> 4.
"""


class CardoptError(Exception):
    """Base class for all package errors."""


class ConfigError(CardoptError):
    """Invalid or inconsistent run configuration."""


class DataError(CardoptError):
    """Bad input data: parse failures, empty universes, degenerate series."""


class CapExceededError(CardoptError):
    """A resource cap was hit (simulator qubit cap or enumeration cap).

    Signals that the subproblem must be routed to a classical solver or the
    cap raised.
    """


class TrivialInstanceError(CardoptError):
    """The counterdiabatic generator vanishes (e.g. a zero target Hamiltonian)."""
