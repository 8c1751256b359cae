"""Exception types shared across the package."""


class InputError(ValueError):
    """Caller supplied an out-of-range, inconsistent, or malformed input."""


class InvariantError(AssertionError):
    """An internal invariant that is supposed to be unbreakable was broken.

    Raised e.g. when a triple involution does not have a unique outcome, or
    when a reduction step lands on a tree type the step table does not allow.
    These indicate a bug (or a falsified assumption), never bad user input.
    """


class NotFoundError(LookupError):
    """A requested value is outside the explored/available data (no sign
    recorded for a state, no connecting word within limits, ...)."""


class GuardError(InputError):
    """A guarded long-running computation was requested without the explicit
    override flag."""
