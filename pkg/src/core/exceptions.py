class ExtremalError(Exception):
    """Base exception for the certificate toolkit"""
    pass

class ValidationError(ExtremalError):
    """Input failed validation"""
    pass

class DimensionMismatchError(ValidationError):
    """Objects live over different ground sets"""
    pass

class PreconditionError(ExtremalError):
    """An operation's precondition does not hold"""
    pass

class SizeLimitError(PreconditionError):
    """Requested size exceeds a hard cap"""
    pass

class CertificateError(ExtremalError):
    """Certificate misused or out of range"""
    pass

class InfeasibleDualError(CertificateError):
    """Dual solution is not feasible"""
    pass

class OperationError(ExtremalError):
    """Unexpected failure inside a service call"""
    pass
