import pytest

from src.util.constants import err
from src.util.exceptions import (
    CertificateRefusedError,
    DesignNotFoundError,
    DomainError,
    EnclosureError,
    GeometryError,
    IngestError,
    NetworkError,
    OverlappingEnclosuresError,
    PairingError,
    TepsError,
    UsageError,
)


def test_base_error():
    """Test TepsError keeps its message."""
    with pytest.raises(TepsError) as exc_info:
        raise TepsError("Test error")
    assert str(exc_info.value) == "Test error"
    assert exc_info.value.message == "Test error"


@pytest.mark.parametrize(
    "error_class", [DomainError, GeometryError, EnclosureError, UsageError, NetworkError]
)
def test_simple_errors(error_class):
    """Test that every simple error derives from TepsError."""
    with pytest.raises(TepsError):
        raise error_class("boom")


def test_hierarchy():
    """Test the geometry and enclosure subclasses."""
    assert issubclass(PairingError, GeometryError)
    assert issubclass(OverlappingEnclosuresError, EnclosureError)


def test_overlapping_enclosures_carries_rho():
    """Test that the negative separation travels with the error."""
    error = OverlappingEnclosuresError("overlap", -0.25)
    assert error.rho == -0.25
    assert str(error) == "overlap"


def test_ingest_error_line_number():
    """Test the line-numbered ingest message."""
    message = err.INGEST_ERROR.format(line=7, error="not a number")
    error = IngestError(message, 7)
    assert error.line == 7
    assert str(error) == "line 7: not a number"


def test_payload_errors():
    """Test that refusal and search errors carry their records."""
    assert CertificateRefusedError("no", None).certificate is None
    assert DesignNotFoundError("none").best is None
