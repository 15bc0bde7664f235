class RamseyKitError(Exception):
    """Base class for errors raised by ramseykit."""


class SignatureMismatchError(RamseyKitError, ValueError):
    pass


class StructureFormatError(RamseyKitError, ValueError):
    """Malformed structure text or map file."""


class ParseError(RamseyKitError, ValueError):
    """Syntax error in a formula or class-spec string; ``pos`` is a 0-based offset."""

    def __init__(self, message: str, text: str = "", pos: int = 0):
        super().__init__(f"{message} at position {pos}" + (f" in {text!r}" if text else ""))
        self.text = text
        self.pos = pos


class PreconditionError(RamseyKitError, ValueError):
    """An operation was called outside the setting in which it is defined."""


class AmalgamationError(PreconditionError):
    """No strong amalgam exists within the size cap; carries the failing diagram."""

    def __init__(self, message: str, diagram=None):
        super().__init__(message)
        self.diagram = diagram
