"""
This module defines custom exceptions used throughout the toolkit.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from ..certify.records import EpsilonCertificate
    from ..search.design import SearchResult


################################################
#         Exception classes
################################################


class TepsError(Exception):
    """Base class for all toolkit exceptions."""

    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(message)


class DomainError(TepsError):
    """Raised when an argument lies outside the domain of a function."""


class GeometryError(TepsError):
    """Raised for malformed points, caps or distance queries."""


class EnclosureError(TepsError):
    """Raised for malformed spherical rectangles or caps."""


class OverlappingEnclosuresError(EnclosureError):
    """Raised when enclosures intersect (negative separation)."""

    def __init__(self, message: str, rho: float) -> None:
        self.rho = rho
        super().__init__(message)


class PairingError(GeometryError):
    """Raised when nearest-point pairing between two point sets is not a bijection."""


class NotFundamentalSystemError(TepsError):
    """Raised when a design matrix is singular or too ill-conditioned to invert."""


class DesignWeightError(TepsError):
    """Raised when quadrature weights are nonpositive or do not sum to the sphere area."""


class CertificateRefusedError(TepsError):
    """Raised when the hypotheses of a certificate fail; carries the partial certificate."""

    def __init__(self, message: str, certificate: EpsilonCertificate) -> None:
        self.certificate = certificate
        super().__init__(message)


class KernelHypothesisError(TepsError):
    """Raised when the Sobolev kernel family does not cover the requested smoothness."""


class NumericalFailureError(TepsError):
    """Raised when cancellation destroys a computed quantity."""


class GramDeviationError(TepsError):
    """Raised when the weighted Gram matrix is too far from the identity."""


class DesignNotFoundError(TepsError):
    """Raised when the design search fails; carries the best iterate."""

    def __init__(self, message: str, best: SearchResult | None = None) -> None:
        self.best = best
        super().__init__(message)


class IngestError(TepsError):
    """Raised when an input file cannot be parsed."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(message)


class UsageError(TepsError):
    """Raised for usage errors."""


class NetworkError(TepsError):
    """Raised for network-related errors."""
