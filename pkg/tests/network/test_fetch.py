import json

import httpx
import pytest

from src.network.fetch import (
    Fixture,
    RetryingClient,
    fetch_all,
    fetch_fixture,
    load_manifest,
    sha256_hex,
)
from src.util.constants import config
from src.util.exceptions import NetworkError

PAYLOAD = b"0.1 0.2 0.3 0.4\n"


def _client(handler, **kwargs) -> RetryingClient:
    return RetryingClient(transport=httpx.MockTransport(handler), backoff=0.0, **kwargs)


def test_client_defaults():
    """Test timeouts, retries and headers of the download client."""
    client = RetryingClient()
    assert client.timeout.connect == config.HTTP_TIMEOUT_CONNECT
    assert client.timeout.read == config.HTTP_TIMEOUT_READ
    assert client.max_retries == config.HTTP_MAX_RETRIES
    assert client.headers["User-Agent"] == config.USER_AGENT
    client.close()


def test_retries_then_succeeds():
    """Test that transient connection failures are retried."""
    calls = []

    def handler(request):
        calls.append(request)
        if len(calls) < 3:
            raise httpx.ConnectError("refused", request=request)
        return httpx.Response(200, content=PAYLOAD)

    with _client(handler, max_retries=3) as client:
        assert client.get("https://example.org/f").content == PAYLOAD
    assert len(calls) == 3


def test_gives_up_after_max_retries():
    """Test NetworkError once every attempt failed."""
    calls = []

    def handler(request):
        calls.append(request)
        raise httpx.ReadTimeout("slow", request=request)

    with _client(handler, max_retries=2) as client:
        with pytest.raises(NetworkError):
            client.get("https://example.org/f")
    assert len(calls) == 2


def test_fetch_fixture_checks_status_and_checksum(tmp_path):
    """Test HTTP errors, checksum mismatches and a verified download."""
    with _client(lambda request: httpx.Response(404)) as client:
        with pytest.raises(NetworkError):
            fetch_fixture(Fixture("a.txt", "https://example.org/a"), tmp_path, client)

    with _client(lambda request: httpx.Response(200, content=PAYLOAD)) as client:
        with pytest.raises(NetworkError):
            fetch_fixture(Fixture("a.txt", "https://example.org/a", "0" * 64), tmp_path, client)
        assert not (tmp_path / "a.txt").exists()

        good = Fixture("a.txt", "https://example.org/a", sha256_hex(PAYLOAD).upper())
        path = fetch_fixture(good, tmp_path, client)
    assert path.read_bytes() == PAYLOAD


def test_manifest(tmp_path):
    """Test manifest parsing, bad manifests and the empty manifest."""
    manifest = tmp_path / "manifest.json"
    manifest.write_text(
        json.dumps({"fixtures": [{"name": "b.txt", "url": "https://example.org/b"}]})
    )
    assert load_manifest(manifest) == [Fixture("b.txt", "https://example.org/b")]

    with _client(lambda request: httpx.Response(200, content=PAYLOAD)) as client:
        paths = fetch_all(manifest, tmp_path / "out", client)
    assert [p.name for p in paths] == ["b.txt"]

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(NetworkError):
        load_manifest(bad)

    empty = tmp_path / "empty.json"
    empty.write_text('{"fixtures": []}')
    assert fetch_all(empty, tmp_path) == []
