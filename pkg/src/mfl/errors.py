"""Exception hierarchy shared by every module."""


class MFLError(Exception):
    pass


class InvalidSignature(MFLError, ValueError):
    pass


class SignatureMismatch(MFLError, ValueError):
    pass


class InvalidPhase(MFLError, ValueError):
    pass


class InvalidGenerator(MFLError, ValueError):
    pass


class InvalidIndex(MFLError, ValueError):
    pass


class InvalidCase(MFLError, ValueError):
    pass


class InvalidLabel(MFLError, ValueError):
    pass


class StripDivergence(MFLError, RuntimeError):
    """Backward orbit neither terminated nor repeated within the iteration bound."""


class InternalConsistencyError(MFLError, RuntimeError):
    pass


class NotAMorphism(MFLError, ValueError):
    pass


class DescriptorError(MFLError, ValueError):
    pass


class ExprSyntaxError(MFLError, ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class KernelOverflow(MFLError, OverflowError):
    """Encoded label left the 62-bit range of the compiled kernel."""
