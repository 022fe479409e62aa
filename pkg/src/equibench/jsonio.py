"""Canonical JSON rendering shared by the CLI, the API, and golden fixtures.

One dumper everywhere keeps CLI output, HTTP bodies, and committed goldens
byte-identical for the same document.
"""

from __future__ import annotations

import json


def dumps_canonical(doc) -> str:
    """Pretty, deterministic JSON text with a trailing newline."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def dumps_canonical_bytes(doc) -> bytes:
    return dumps_canonical(doc).encode("utf-8")
