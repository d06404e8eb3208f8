"""Exception hierarchy shared by every module of the package."""


class FtgfError(Exception):
    """Base class for all package errors."""


class FieldError(FtgfError):
    pass


class DegreeMismatch(FieldError):
    pass


class ReduciblePolynomial(FieldError):
    pass


class ContextMismatch(FieldError):
    pass


class ZeroInverse(FieldError, ZeroDivisionError):
    pass


class NetlistError(FtgfError):
    pass


class WidthMismatch(NetlistError):
    pass


class UnknownGate(NetlistError):
    pass


class CodeError(FtgfError):
    pass


class UnsatisfiableParams(CodeError):
    pass


class LengthMismatch(CodeError):
    pass


class ConfigInvalid(FtgfError):
    pass
