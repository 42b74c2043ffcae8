"""
Download the optional published enclosure files listed in
tests/fixtures/manifest.json into tests/fixtures/.

    python scripts/fetch_fixtures.py [--manifest PATH] [--target DIR]

Enclosure files are expected in the whitespace rectangle layout read by
`teps certify --format rect`; the manifest starts empty and is filled in by
whoever has access to the datasets, together with their sha256 sums.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from src.network.fetch import fetch_all
from src.util.constants import logger
from src.util.exceptions import NetworkError

ROOT = Path(__file__).resolve().parent.parent


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    parser.add_argument("--manifest", type=Path, default=ROOT / "tests/fixtures/manifest.json")
    parser.add_argument("--target", type=Path, default=ROOT / "tests/fixtures")
    args = parser.parse_args()
    try:
        paths = fetch_all(args.manifest, args.target)
    except NetworkError as e:
        logger.error("❌ %s", e.message)
        return 1
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
