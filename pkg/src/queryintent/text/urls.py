"""URL helpers: registrable-host extraction and url-to-text conversion."""

from __future__ import annotations

import re
from urllib.parse import urlsplit

from queryintent.text.wordpiece import normalize_words

_HOST_RE = re.compile(r"^[a-z0-9]([a-z0-9-]*[a-z0-9])?(\.[a-z0-9]([a-z0-9-]*[a-z0-9])?)+$")


def _split(url: str):
    url = url.strip()
    if "://" not in url and not url.startswith("//"):
        url = "//" + url
    return urlsplit(url)


def extract_domain(url: str) -> str:
    """Lowercased registrable host, with scheme/port/path stripped and 'www.' removed.

    Returns "" for anything that does not look like a hostname.
    """
    try:
        parts = _split(url)
    except ValueError:
        return ""
    host = (parts.hostname or "").lower().rstrip(".")
    if host.startswith("www."):
        host = host[4:]
    if not _HOST_RE.match(host):
        return ""
    return host


def url_words(url: str, include_domain: bool = True) -> list[str]:
    """Normalized words of a url's host and path (or path only).

    The domain-excluded form feeds topic documents, where clustering on the
    host name would be trivial.
    """
    try:
        parts = _split(url)
    except ValueError:
        return []
    words: list[str] = []
    if include_domain:
        words.extend(normalize_words(extract_domain(url)))
    words.extend(normalize_words(parts.path))
    return words
