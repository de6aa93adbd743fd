"""Service layer driving the verification commands."""

from .verification import VerificationService

__all__ = ["VerificationService"]
