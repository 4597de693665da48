class BoxBallError(RuntimeError):
    """Raised when a box-ball or rigged-configuration computation cannot be completed."""


class InputFormatError(ValueError):
    """Raised when a path, rigged configuration or table cannot be parsed."""
