"""Greedy covers of an orbit word by fragments of a fixed word W."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .complexity import SuffixAutomaton
from .words import check_word

MODES = ("subword", "cyclic-rotation")


@dataclass(frozen=True)
class Fragment:
    start: int             # position in the orbit word
    length: int
    source: int            # start inside W, or inside rotate(W, rotation)
    rotation: int | None   # rotation witness in cyclic-rotation mode


@dataclass
class CoverStats:
    orbit_length: int
    word_length: int
    mode: str
    fragments: list[Fragment]
    epsilon: float = 0.0

    @property
    def covered(self) -> int:
        return sum(f.length for f in self.fragments)

    @property
    def covered_fraction(self) -> float:
        return self.covered / self.orbit_length

    @property
    def avg_fragment_length(self) -> float:
        return self.covered / len(self.fragments) if self.fragments else 0.0

    @property
    def scale_estimate(self) -> float:
        return self.avg_fragment_length / self.word_length

    @property
    def succeeded(self) -> bool:
        return self.covered_fraction >= 1 - self.epsilon

    def to_dict(self, with_fragments: bool = True) -> dict:
        d = {"orbit_length": self.orbit_length, "word_length": self.word_length,
             "mode": self.mode, "epsilon": self.epsilon,
             "n_fragments": len(self.fragments), "covered_fraction": self.covered_fraction,
             "avg_fragment_length": self.avg_fragment_length,
             "scale_estimate": self.scale_estimate, "succeeded": self.succeeded}
        if with_fragments:
            d["fragments"] = [[f.start, f.length, f.source, f.rotation] for f in self.fragments]
        return d

    def to_json(self, with_fragments: bool = True) -> str:
        return json.dumps(self.to_dict(with_fragments), sort_keys=True)


def greedy_cover(orbit: str, W: str, mode: str = "subword", epsilon: float = 0.0,
                 gap_symbol: str | None = None) -> CoverStats:
    """Left-to-right cover taking, at each position, the longest prefix of
    the rest of ``orbit`` that is a subword of W (or of a rotation of W).

    Positions with no match are left uncovered. With ``gap_symbol`` set,
    fragments never start on that letter; it is treated as spacer material
    between copies.
    """
    check_word(orbit)
    check_word(W)
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; choose from {MODES}")
    h = len(W)
    if mode == "subword":
        host, limit = W, None
    else:
        host, limit = W + W[:-1], h
    sam = SuffixAutomaton(host)
    frags = []
    i, n = 0, len(orbit)
    while i < n:
        if gap_symbol is not None and orbit[i] == gap_symbol:
            i += 1
            continue
        L = sam.match_length(orbit, i, limit)
        if L == 0:
            i += 1
            continue
        pos = host.find(orbit[i:i + L])
        if mode == "subword":
            frags.append(Fragment(i, L, pos, None))
        else:
            frags.append(Fragment(i, L, 0, pos))
        i += L
    return CoverStats(n, h, mode, frags, epsilon)


def fragment_matches(f: Fragment, orbit: str, W: str) -> bool:
    piece = orbit[f.start:f.start + f.length]
    if f.rotation is None:
        return W[f.source:f.source + f.length] == piece
    rotated = W[f.rotation:] + W[:f.rotation]
    return rotated[f.source:f.source + f.length] == piece


def pascal_scale_prediction(h: float) -> float:
    """Predicted Pascal scaling function 1 / sqrt(pi log2 h)."""
    if h < 2:
        raise ValueError("h must be >= 2")
    return 1 / math.sqrt(math.pi * math.log2(h))
