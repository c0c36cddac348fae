"""Errors raised by the mapevo apps.

Each class carries the process exit code the management commands use for it.
"""


class MapEvoError(Exception):
    exit_code = 2


class InputError(MapEvoError, ValueError):
    """A law file, config value or argument is malformed."""
    exit_code = 3


class TransformationError(InputError):
    pass


class MeasureError(InputError):
    pass


class ClosureLimitExceeded(MapEvoError):
    """The semigroup closure grew past the configured element cap."""
    exit_code = 3

    def __init__(self, cap, size):
        super().__init__(f"semigroup closure exceeded {cap} elements (reached {size})")
        self.cap = cap
        self.size = size


class StructuralInconsistency(MapEvoError):
    """An algebraic invariant that must hold did not. Always a bug upstream."""
    exit_code = 2


class ClassificationError(MapEvoError, ValueError):
    exit_code = 2

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
