"""Subword complexity p_w(l): a suffix-automaton engine and a naive oracle."""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .words import SPACER, check_word

log = logging.getLogger(__name__)

ENGINES = ("naive", "fast")


class SuffixAutomaton:
    """Minimal automaton of all subwords of a word (online construction).

    Each state stands for the subwords whose lengths fill the interval
    ``(length[link[v]], length[v]]``; summing those intervals gives the
    number of distinct subwords of every length.
    """

    def __init__(self, w: str):
        length = [0]
        link = [-1]
        nxt: list[dict[str, int]] = [{}]
        last = 0
        for c in w:
            cur = len(length)
            length.append(length[last] + 1)
            link.append(0)
            nxt.append({})
            p = last
            while p != -1 and c not in nxt[p]:
                nxt[p][c] = cur
                p = link[p]
            if p != -1:
                q = nxt[p][c]
                if length[p] + 1 == length[q]:
                    link[cur] = q
                else:
                    clone = len(length)
                    length.append(length[p] + 1)
                    link.append(link[q])
                    nxt.append(dict(nxt[q]))
                    while p != -1 and nxt[p].get(c) == q:
                        nxt[p][c] = clone
                        p = link[p]
                    link[q] = clone
                    link[cur] = clone
            last = cur
        self.n = len(w)
        self.length = length
        self.link = link
        self.next = nxt

    def __len__(self) -> int:
        return len(self.length)

    def __contains__(self, u: str) -> bool:
        v = 0
        for c in u:
            v = self.next[v].get(c, -1)
            if v < 0:
                return False
        return True

    def counts_by_length(self) -> list[int]:
        """``out[l]`` = number of distinct subwords of length ``l`` (``out[0] = 1``)."""
        length = np.asarray(self.length, dtype=np.int64)
        link = np.asarray(self.link, dtype=np.int64)
        diff = np.zeros(self.n + 2, dtype=np.int64)
        np.add.at(diff, length[link[1:]] + 1, 1)
        np.add.at(diff, length[1:] + 1, -1)
        out = np.cumsum(diff)[: self.n + 1]
        out[0] = 1
        return out.tolist()

    def match_length(self, text: str, start: int, limit: int | None = None) -> int:
        """Length of the longest prefix of ``text[start:]`` that is a subword."""
        stop = len(text) if limit is None else min(len(text), start + limit)
        v, i = 0, start
        nxt = self.next
        while i < stop:
            v = nxt[v].get(text[i], -1)
            if v < 0:
                break
            i += 1
        return i - start


def language(w: str, l: int) -> set[str]:
    if not 1 <= l <= len(w):
        return set()
    return {w[i:i + l] for i in range(len(w) - l + 1)}


@dataclass
class ComplexityProfile:
    word_length: int
    values: list[int]  # values[l - 1] = p(l)
    engine: str

    @property
    def l_max(self) -> int:
        return len(self.values)

    def __getitem__(self, l: int) -> int:
        if not 1 <= l <= self.l_max:
            raise IndexError(l)
        return self.values[l - 1]

    def as_dict(self) -> dict[int, int]:
        return {l: p for l, p in enumerate(self.values, start=1)}

    def to_csv(self, saturated: dict[int, int] | None = None) -> str:
        if saturated is None:
            rows = ["l,p_l"] + [f"{l},{p}" for l, p in enumerate(self.values, 1)]
        else:
            rows = ["l,p_l,p_bar_l"] + [f"{l},{p},{saturated[l]}"
                                        for l, p in enumerate(self.values, 1)]
        return "\n".join(rows) + "\n"


def _naive_values(w: str, l_max: int) -> list[int]:
    """Count distinct windows length by length.

    Windows get integer ids; the id of a length-(l+1) window is the id of
    its length-l prefix paired with its last letter, so every window is
    compared exactly without materializing it. Agrees with ``language``.
    """
    n = len(w)
    _, codes = np.unique(np.frombuffer(w.encode("utf-32-le"), dtype=np.uint32),
                         return_inverse=True)
    codes = codes.astype(np.int64)
    sigma = int(codes.max()) + 1
    ids = codes
    values = [sigma]
    for l in range(2, l_max + 1):
        if values[-1] == n - l + 2:
            # all windows of length l-1 distinct, hence all longer ones too
            values.extend(n - k + 1 for k in range(l, l_max + 1))
            break
        keys = ids[:n - l + 1] * sigma + codes[l - 1:]
        uniq, ids = np.unique(keys, return_inverse=True)
        values.append(len(uniq))
    return values[:l_max]


def complexity_profile(w: str, l_max: int | None = None, engine: str = "fast") -> ComplexityProfile:
    check_word(w)
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}; choose from {ENGINES}")
    n = len(w)
    if l_max is None:
        l_max = n
    if l_max > n:
        log.warning("l_max=%d exceeds word length %d; clamping", l_max, n)
        l_max = n
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    if engine == "naive":
        values = _naive_values(w, l_max)
    else:
        values = SuffixAutomaton(w).counts_by_length()[1:l_max + 1]
    return ComplexityProfile(n, values, engine)


def complexity(w: str, l: int, engine: str = "fast") -> int:
    if engine == "naive":
        return len(language(w, l))
    return complexity_profile(w, l, engine)[l]


def saturated_complexity(w: str, l: int, spacer: str = SPACER) -> int:
    """Number of maximal elements of L(w, l) under the order where ``u >= v``
    iff ``v`` arises from ``u`` by turning some letters into the spacer."""
    words = sorted(language(w, l))
    if not words:
        return 0
    a = np.frombuffer("".join(words).encode("utf-32-le"), dtype=np.uint32).reshape(len(words), l)
    sp = ord(spacer)
    maximal = 0
    for i in range(len(words)):
        u = a[i]
        # rows v with v >= u: agree with u wherever u is not a spacer
        dominated = ((a == u) | (u == sp)).all(axis=1)
        dominated[i] = False
        if not dominated.any():
            maximal += 1
    return maximal


@dataclass
class FrequencyTable:
    l: int
    counts: dict[str, int]
    windows: int

    def freq(self, u: str) -> Fraction:
        return Fraction(self.counts.get(u, 0), self.windows)

    @property
    def freqs(self) -> dict[str, Fraction]:
        return {u: Fraction(c, self.windows) for u, c in self.counts.items()}

    def to_dict(self) -> dict:
        return {"l": self.l, "windows": self.windows,
                "entries": [{"word": u, "count": c, "freq": c / self.windows}
                            for u, c in sorted(self.counts.items())]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def empirical_frequencies(w: str, l: int) -> FrequencyTable:
    check_word(w)
    if not 1 <= l <= len(w):
        raise ValueError(f"l={l} outside [1, {len(w)}]")
    windows = len(w) - l + 1
    return FrequencyTable(l, dict(Counter(w[i:i + l] for i in range(windows))), windows)
