"""Exception hierarchy.

Every domain error derives from :class:`PhimodError`.  Validation-class
errors map to CLI exit code 1 and :class:`FieldTooSmall` maps to exit
code 2.
"""
from __future__ import annotations


class PhimodError(Exception):
    """Base class; ``code`` is the machine-readable error name."""

    exit_code = 1

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_json(self) -> dict:
        return {"error": self.code, "message": str(self)}


class ValidationError(PhimodError):
    pass


class SpecMismatch(ValidationError):
    pass


class DivisionByZero(ValidationError, ZeroDivisionError):
    pass


class ZeroElement(ValidationError):
    pass


class UncertifiedField(ValidationError):
    pass


class InvalidWitness(ValidationError):
    pass


class TypeMismatch(ValidationError):
    """A length-f vector was mixed with a length-m vector (or similar)."""


class ZeroCoordinate(ValidationError):
    pass


class SingularBaseChange(ValidationError):
    pass


class TrivialMonodromy(ValidationError):
    pass


class WrongClass(ValidationError):
    pass


class NotCanonicalized(ValidationError):
    pass


class UnstableFiltration(ValidationError):
    pass


class WrongSubmoduleForClass(ValidationError):
    pass


class NegativeWeight(ValidationError):
    pass


class WrongLength(ValidationError):
    pass


class WeightMismatch(ValidationError):
    pass


class ResultingNegativeWeight(ValidationError):
    pass


class OrbitMismatch(ValidationError):
    pass


class BadSeed(ValidationError):
    pass


class PreconditionMismatch(ValidationError):
    pass


class DegenerateAlpha(ValidationError):
    pass


class TooSmallF(ValidationError):
    pass


class SchemaError(ValidationError):
    pass


class FieldTooSmall(PhimodError):
    """A needed root does not lie in E; ``hint`` names the missing root."""

    exit_code = 2

    def __init__(self, message: str, hint: str | None = None):
        super().__init__(message)
        self.hint = hint or message

    def to_json(self) -> dict:
        out = super().to_json()
        out["hint"] = self.hint
        return out
