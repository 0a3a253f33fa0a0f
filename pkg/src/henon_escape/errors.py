"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """An operation was called outside the region where its result is certified."""


class MTooSmallError(PreconditionError):
    """The Rouché disk for the requested M does not fit inside W_R."""


class ToleranceUnreachable(RuntimeError):
    """Series truncation could not reach the requested tolerance within the cap."""


class NotAbsorbed(RuntimeError):
    """Forward orbit did not enter W_R within the iteration budget."""


class CurveTooClose(RuntimeError):
    """Winding number refinement hit its cap; the curve passes too close to the target."""
