"""Exception hierarchy shared by every holarb module."""


class HolarbError(Exception):
    """Base class for all library errors."""


class WeightSumError(HolarbError):
    pass


class DuplicatePointError(HolarbError):
    pass


class SpaceMismatchError(HolarbError):
    pass


class AbsoluteContinuityError(HolarbError):
    pass


class NullPreservationError(HolarbError):
    pass


class DanglingEndpointError(HolarbError):
    pass


class DuplicateArrowError(HolarbError):
    pass


class NotComposableError(HolarbError):
    def __init__(self, message, position=None):
        super().__init__(message)
        # index of the first arrow whose source does not match its predecessor
        self.position = position


class UnknownObjectError(HolarbError):
    pass


class UnknownArrowError(HolarbError):
    pass


class IncompleteDeclarationError(HolarbError):
    pass


class ParseError(HolarbError):
    def __init__(self, message, line=None, field=None):
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if field is not None:
            loc.append(f"field {field!r}")
        super().__init__(f"{message} ({', '.join(loc)})" if loc else message)
        self.line = line
        self.field = field


class ValidationError(HolarbError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SizeBoundError(HolarbError):
    pass
