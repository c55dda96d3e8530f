"""Exception types shared across the package."""


class SketchDuelError(Exception):
    """Base class for all game errors."""


class ParseError(SketchDuelError):
    """A dataset line could not be parsed.

    Carries enough context (source name, line number) to locate the
    offending record.
    """

    def __init__(self, message, source=None, line_number=None):
        self.source = source
        self.line_number = line_number
        where = ""
        if source is not None:
            where = f" ({source}" + (f":{line_number}" if line_number else "") + ")"
        super().__init__(message + where)


class DatasetError(SketchDuelError):
    """Dataset-level failure, e.g. a category with zero usable examples."""


class PhaseError(SketchDuelError):
    """An operation was applied in the wrong match phase."""


class NotAuthorizedError(SketchDuelError):
    """The sender is not allowed to perform this action in their role."""


class CapacityError(SketchDuelError):
    """A resource limit (rooms, players) was reached."""
