"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`DefectNLSError`. The ``detail`` attribute carries the message shown to
users and ``exit_code`` is what the command line returns when the error
escapes a command.
"""

from typing import Optional


class DefectNLSError(Exception):
    """Base class for all domain errors.

    Attributes:
        detail: Human-readable description of the failure
        field: Dotted path of the offending configuration field, if any
    """

    exit_code = 4

    def __init__(self, detail: str, *, field: Optional[str] = None):
        super().__init__(detail if field is None else f"{field}: {detail}")
        self.detail = detail
        self.field = field


# numerics

class SingularMatrix(DefectNLSError):
    """A matrix failed the singularity or pivot-growth test."""


class DimensionMismatch(DefectNLSError):
    """Operand shapes do not agree, or a dense system exceeds the size cap."""


class NonFiniteValue(DefectNLSError):
    """A NaN or infinity reached a public operation."""


class OverflowRange(DefectNLSError):
    """|Im θ| exceeded the exponential cap at some evaluation point."""


# dressing

class ZeroVector(DefectNLSError):
    """A vector that must be nonzero was zero."""


class RealEigenvalue(DefectNLSError):
    """A spectral parameter lies on (or too close to) the real axis."""


class DuplicateEigenvalue(DefectNLSError):
    """Two spectral parameters of one chain coincide."""


class DegenerateDressing(DefectNLSError):
    """A dressed kernel vector collapsed to zero."""


class UnsupportedSeed(DefectNLSError):
    """Only the zero seed solution is supported."""


# defect

class ForbiddenEigenvalue(DefectNLSError):
    """A spectral parameter coincides with λ₀ or its conjugate."""


class SingularDressing(DefectNLSError):
    """G_N was requested at a spectral parameter where D[N] is singular."""


class ComplexOmega(DefectNLSError):
    """β² − |ũ − u|² is negative beyond rounding."""


# scattering

class ZeroComponent(DefectNLSError):
    """An initialization vector has a zero component, so it has no norming constant."""


class PeakNotFound(DefectNLSError):
    """No soliton peak was found where one was expected."""


# configuration and files

class ConfigError(DefectNLSError):
    """Base class for run configuration problems."""

    exit_code = 2


class ParseError(ConfigError):
    """The configuration file is not well-formed JSON."""


class SchemaViolation(ConfigError):
    """The configuration does not match the published schema."""


class InvariantViolation(ConfigError):
    """A configuration value breaks a domain invariant."""


class IoError(DefectNLSError):
    """A file could not be read or written."""

    exit_code = 3
