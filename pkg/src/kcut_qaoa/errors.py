"""Exception types shared across the package."""


class KCutError(Exception):
    """Base class for all package errors."""


class ParameterError(KCutError, ValueError):
    pass


class CapacityError(KCutError):
    """A qubit or enumeration budget would be exceeded."""


class GraphParseError(KCutError, ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class VerificationError(KCutError):
    def __init__(self, message: str, index: int | None = None):
        super().__init__(message if index is None else f"{message} (basis index {index})")
        self.index = index


class UnsupportedFeatureError(KCutError, NotImplementedError):
    pass


class OptimizationError(KCutError):
    def __init__(self, message: str, point):
        super().__init__(f"{message} at x={list(point)}")
        self.point = point
