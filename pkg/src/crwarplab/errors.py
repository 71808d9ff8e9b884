"""Exception hierarchy shared by every module."""


class CRWarpError(Exception):
    """Base class for all errors raised by the toolkit."""


class DegenerateInput(CRWarpError, ValueError):
    pass


class DimensionMismatch(CRWarpError, ValueError):
    pass


class ParityError(CRWarpError, ValueError):
    pass


class NonPositiveWarp(CRWarpError, ValueError):
    pass


class DomainError(CRWarpError, ArithmeticError):
    pass


class NotImmersed(CRWarpError, ValueError):
    pass


class CRViolation(CRWarpError, ValueError):
    pass


class GaugeError(CRWarpError, ValueError):
    pass


class ConfigError(CRWarpError, ValueError):
    """Scenario validation failure; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class ParseError(CRWarpError, ValueError):
    def __init__(self, message: str, position: int, expected=()):
        self.position = position
        self.expected = tuple(sorted(expected))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at position {position}{detail}")


class UnknownVariable(CRWarpError, ValueError):
    def __init__(self, name: str, position: int):
        self.name = name
        self.position = position
        super().__init__(f"unknown identifier {name!r} at position {position}")
