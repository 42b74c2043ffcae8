"""
Download of optional test fixtures (published enclosure files).

The toolkit itself never touches the network; this module is used only by
`scripts/fetch_fixtures.py`. A manifest lists, per fixture, a URL, the target
file name and an optional sha256. Downloads go through an httpx client that
retries connection and read failures with exponential backoff, and files are
written only after their checksum matches.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import httpx
from httpx import Limits, Timeout

from ..util.constants import HEADERS, config, err, logger
from ..util.exceptions import NetworkError

########################################################
#              HTTP client with retries
########################################################


class RetryingClient(httpx.Client):

    def __init__(
        self,
        *,
        timeout: float | Timeout | None = config.HTTP_TIMEOUT_TOTAL,
        connect_timeout: float = config.HTTP_TIMEOUT_CONNECT,
        read_timeout: float = config.HTTP_TIMEOUT_READ,
        max_retries: int = config.HTTP_MAX_RETRIES,
        backoff: float = 1.0,
        **kwargs: Any,
    ) -> None:
        timeout = (
            Timeout(timeout=timeout, connect=connect_timeout, read=read_timeout)
            if isinstance(timeout, int | float)
            else timeout
        )
        self.max_retries = max(1, max_retries)
        self.backoff = backoff
        super().__init__(
            timeout=timeout,
            limits=Limits(max_keepalive_connections=2, max_connections=4),
            headers=HEADERS,
            follow_redirects=True,
            **kwargs,
        )

    def request(self, *args: Any, **kwargs: Any) -> httpx.Response:  # type: ignore[override]
        for attempt in range(self.max_retries):
            try:
                return super().request(*args, **kwargs)
            except (httpx.ConnectError, httpx.ReadError, httpx.TimeoutException) as e:
                if attempt == self.max_retries - 1:
                    raise NetworkError(
                        err.NETWORK_ERROR.format(
                            error=f"request failed after {self.max_retries} attempts: {e}"
                        )
                    ) from e
                delay = min(self.backoff * 2**attempt, 30.0)
                logger.debug("Retrying in %.1fs after %s", delay, e)
                time.sleep(delay)
        raise NetworkError(err.NETWORK_ERROR.format(error="no request attempted"))


########################################################
#              Fixture manifest
########################################################


@dataclass(frozen=True)
class Fixture:
    name: str
    url: str
    sha256: str | None = None


def load_manifest(path: Path) -> list[Fixture]:
    """Fixtures listed in a JSON manifest `{"fixtures": [{name, url, sha256}, ...]}`."""
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
        return [Fixture(**entry) for entry in payload.get("fixtures", [])]
    except (OSError, ValueError, TypeError) as e:
        raise NetworkError(err.NETWORK_ERROR.format(error=f"bad manifest {path}: {e}")) from e


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def fetch_fixture(fixture: Fixture, target_dir: Path, client: httpx.Client) -> Path:
    """Download one fixture into `target_dir`, verifying its checksum when known.

    Raises:
        NetworkError: on HTTP errors or a checksum mismatch.
    """
    target = target_dir / fixture.name
    response = client.get(fixture.url)
    if response.status_code != 200:
        raise NetworkError(
            err.NETWORK_ERROR.format(error=f"{fixture.url} returned HTTP {response.status_code}")
        )
    digest = sha256_hex(response.content)
    if fixture.sha256 is not None and digest != fixture.sha256.lower():
        raise NetworkError(
            err.NETWORK_ERROR.format(
                error=f"checksum mismatch for {fixture.name}: {digest} != {fixture.sha256}"
            )
        )
    if fixture.sha256 is None:
        logger.warning("No checksum recorded for %s (sha256 %s)", fixture.name, digest)
    target_dir.mkdir(parents=True, exist_ok=True)
    target.write_bytes(response.content)
    logger.info("Fetched %s (%d bytes)", fixture.name, len(response.content))
    return target


def fetch_all(manifest: Path, target_dir: Path, client: httpx.Client | None = None) -> list[Path]:
    fixtures = load_manifest(manifest)
    if not fixtures:
        logger.warning("Manifest %s lists no fixtures", manifest)
        return []
    owned = client is None
    client = client or RetryingClient()
    try:
        return [fetch_fixture(f, target_dir, client) for f in fixtures]
    finally:
        if owned:
            client.close()


__all__ = ["Fixture", "RetryingClient", "fetch_all", "fetch_fixture", "load_manifest", "sha256_hex"]
