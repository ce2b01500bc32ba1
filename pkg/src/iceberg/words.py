"""Basic word operations: cyclic rotation, occurrences, the d-bar distance."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

BINARY = "01"
SPACER = "0"


class WordError(ValueError):
    pass


def check_word(w: str, alphabet: str | None = None) -> str:
    if not w:
        raise WordError("empty word")
    if alphabet is not None:
        bad = set(w) - set(alphabet)
        if bad:
            raise WordError(f"letters {sorted(bad)} not in alphabet {alphabet!r}")
    return w


def rotate(w: str, alpha: int) -> str:
    """Cyclic rotation: ``rotate(w, a)[i] == w[(i + a) % len(w)]``.

    >>> rotate("abcdef", 2)
    'cdefab'
    """
    check_word(w)
    a = alpha % len(w)
    return w[a:] + w[:a]


def dbar(u: str, v: str) -> Fraction:
    """Fraction of positions where ``u`` and ``v`` disagree."""
    if len(u) != len(v):
        raise WordError(f"length mismatch: {len(u)} != {len(v)}")
    if not u:
        raise WordError("empty word")
    return Fraction(sum(a != b for a, b in zip(u, v)), len(u))


def letter_fraction(w: str, letter: str = "1") -> Fraction:
    check_word(w)
    return Fraction(w.count(letter), len(w))


def cyclic_find(u: str, w: str) -> int | None:
    """Smallest rotation ``phi`` with ``u`` a prefix of ``rotate(w, phi)``.

    Returns None when ``u`` is not a subword of any rotation of ``w``.
    """
    if not u or len(u) > len(w):
        return None
    phi = (w + w).find(u)
    return phi if 0 <= phi < len(w) else None


def is_cyclic_subword(u: str, w: str) -> bool:
    return cyclic_find(u, w) is not None


@dataclass(frozen=True)
class Occurrence:
    start: int
    length: int
    host_cyclic: bool = False

    def identical_to(self, other: Occurrence) -> bool:
        # equal occurrences of the same subword are identical only at the same start
        return self.start == other.start and self.length == other.length

    def to_dict(self) -> dict:
        return {"start": self.start, "length": self.length, "cyclic": self.host_cyclic}


def classify_occurrences(u: str, host: str, cyclic: bool = False) -> list[Occurrence]:
    """All occurrences of ``u`` in ``host``; any two of them are equal, and
    pairwise non-identical since their starts differ."""
    if not u or not host:
        return []
    if cyclic:
        if len(u) > len(host):
            return []
        text, limit = host + host[: len(u) - 1], len(host)
    else:
        text, limit = host, len(host) - len(u) + 1
    out = []
    i = text.find(u)
    while 0 <= i < limit:
        out.append(Occurrence(i, len(u), cyclic))
        i = text.find(u, i + 1)
    return out
