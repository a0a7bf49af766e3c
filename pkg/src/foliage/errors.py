"""Exception types shared across the engine."""


class FoliageError(Exception):
    """Base class for engine errors."""


class InputError(FoliageError):
    """The input (model, structure, option) is invalid. CLI exit code 1."""


class NotContactError(InputError):
    """An operation that needs a contact form was given something else."""


class InternalInconsistency(FoliageError):
    """An invariant that must hold on every valid input was violated. CLI exit code 2."""
