"""Exception hierarchy shared across the package.

The CLI maps each class to a process exit code.
"""


class GdjError(Exception):
    exit_code = 1


class InputError(GdjError, ValueError):
    """Malformed argument: wrong length, out-of-range index, bad name."""

    exit_code = 2


class PreconditionError(GdjError):
    exit_code = 3


class PromiseViolation(PreconditionError):
    """The function handed to the algorithm is not constant on each register."""


class DecodeError(PreconditionError):
    """A measured pattern lies outside the support of every promise class."""

    def __init__(self, i_bits, j_bits):
        super().__init__(f"pattern ({i_bits!r}, {j_bits!r}) is outside the promise support")
        self.i_bits = i_bits
        self.j_bits = j_bits


class ResourceError(GdjError):
    exit_code = 4
