"""Constructions: rank-one words, iceberg words, random schedules, Pascal codings.

Randomness comes from numpy's PCG64 seeded through ``SeedSequence(seed)``.
Level ``n`` (0-based) of a random schedule draws from child stream ``n`` of
``SeedSequence(seed).spawn(levels)``, so a schedule's first levels do not
depend on how many levels are requested.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .words import BINARY, SPACER, WordError, check_word, rotate

MAX_WORD_LENGTH = 10**8
PASCAL_MAX_LEVEL = 26


class ScheduleError(ValueError):
    pass


@dataclass
class LevelSpec:
    q: int
    alphas: list[int]
    spacers: list[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.spacers:
            self.spacers = [0] * self.q

    def to_dict(self) -> dict:
        return {"q": self.q, "alphas": list(self.alphas), "spacers": list(self.spacers)}


@dataclass
class IcebergSchedule:
    seed_word: str
    levels: list[LevelSpec]

    def lengths(self) -> list[int]:
        """Lengths h_1, ..., h_{N+1}, computed without building any word."""
        hs = [len(self.seed_word)]
        for lv in self.levels:
            hs.append(lv.q * hs[-1] + sum(lv.spacers))
        return hs

    def validate(self) -> None:
        check_word(self.seed_word)
        h = len(self.seed_word)
        for n, lv in enumerate(self.levels, start=1):
            if lv.q < 2:
                raise ScheduleError(f"level {n}: q={lv.q} < 2")
            if len(lv.alphas) != lv.q or len(lv.spacers) != lv.q:
                raise ScheduleError(f"level {n}: need {lv.q} alphas and spacers")
            if lv.alphas[0] != 0:
                raise ScheduleError(f"level {n}: alphas[0]={lv.alphas[0]} must be 0")
            bad = [a for a in lv.alphas if not 0 <= a < h]
            if bad:
                raise ScheduleError(f"level {n}: alphas {bad} outside [0, {h})")
            if any(s < 0 for s in lv.spacers):
                raise ScheduleError(f"level {n}: negative spacer")
            h = lv.q * h + sum(lv.spacers)

    def to_dict(self) -> dict:
        return {"seed_word": self.seed_word, "levels": [lv.to_dict() for lv in self.levels]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> IcebergSchedule:
        levels = [LevelSpec(int(x["q"]), [int(a) for a in x["alphas"]],
                            [int(s) for s in x.get("spacers") or []])
                  for x in d["levels"]]
        return cls(d["seed_word"], levels)

    @classmethod
    def from_json(cls, text: str) -> IcebergSchedule:
        return cls.from_dict(json.loads(text))


@dataclass
class RandomSpec:
    """How to draw a random schedule.

    Exactly one of ``q_list`` (explicit per-level block counts) and ``gamma``
    (``q_n = ceil(h_n ** gamma)``) is used; ``q_list`` wins if both are set.
    ``spacers`` holds explicit per-level spacer lists, or None for none.
    """

    seed: int
    q_list: list[int] | None = None
    gamma: float | None = None
    spacers: list[list[int]] | None = None

    def q_for(self, n: int, h: int) -> int:
        if self.q_list is not None:
            return int(self.q_list[n])
        if self.gamma is None:
            raise ScheduleError("RandomSpec needs q_list or gamma")
        x = h ** self.gamma
        r = round(x)
        return max(2, r if math.isclose(x, r, rel_tol=1e-12) else math.ceil(x))

    def to_dict(self) -> dict:
        d: dict = {"seed": self.seed, "spacer_rule": "explicit" if self.spacers else "zero"}
        if self.q_list is not None:
            d["q_list"] = list(self.q_list)
        else:
            d["gamma"] = self.gamma
        if self.spacers:
            d["spacers"] = [list(s) for s in self.spacers]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> RandomSpec:
        return cls(int(d["seed"]), d.get("q_list"), d.get("gamma"), d.get("spacers"))


def level_streams(seed: int, count: int) -> list[np.random.Generator]:
    return [np.random.Generator(np.random.PCG64(s))
            for s in np.random.SeedSequence(seed).spawn(count)]


def random_word(rng: np.random.Generator, length: int, alphabet: str = BINARY) -> str:
    return "".join(alphabet[i] for i in rng.integers(0, len(alphabet), size=length))


def random_seed_word(rng: np.random.Generator, length: int, alphabet: str = BINARY) -> str:
    """Random word containing at least two different letters."""
    if length < 2:
        raise WordError("a seed word needs two different letters")
    while True:
        w = random_word(rng, length, alphabet)
        if len(set(w)) > 1:
            return w


def random_schedule(spec: RandomSpec, seed_word: str, levels: int,
                    max_length: int = MAX_WORD_LENGTH) -> IcebergSchedule:
    check_word(seed_word)
    if len(set(seed_word)) < 2:
        raise ScheduleError(f"seed word {seed_word!r} needs two different letters")
    h = len(seed_word)
    out = []
    for n, rng in enumerate(level_streams(spec.seed, levels)):
        q = spec.q_for(n, h)
        alphas = [0] + [int(a) for a in rng.integers(0, h, size=q - 1)]
        spacers = list(spec.spacers[n]) if spec.spacers else [0] * q
        if len(spacers) != q:
            raise ScheduleError(f"level {n + 1}: {len(spacers)} spacers for q={q}")
        out.append(LevelSpec(q, alphas, spacers))
        h = q * h + sum(spacers)
        if h > max_length:
            raise ScheduleError(f"level {n + 1}: word length {h} exceeds cap {max_length}")
    return IcebergSchedule(seed_word, out)


def build_iceberg(seed_word: str, schedule: IcebergSchedule | Sequence[LevelSpec],
                  max_length: int = MAX_WORD_LENGTH) -> list[str]:
    """Words w_1, ..., w_{N+1}; each is a prefix of the next."""
    if not isinstance(schedule, IcebergSchedule):
        schedule = IcebergSchedule(seed_word, list(schedule))
    schedule = IcebergSchedule(seed_word, schedule.levels)
    schedule.validate()
    if schedule.lengths()[-1] > max_length:
        raise ScheduleError(f"final length {schedule.lengths()[-1]} exceeds cap {max_length}")
    words = [seed_word]
    for lv in schedule.levels:
        w = words[-1]
        words.append("".join(rotate(w, a) + SPACER * s for a, s in zip(lv.alphas, lv.spacers)))
    return words


def rank_one_words(seed_word: str, spacer_schedule: Sequence[Sequence[int]],
                   levels: int | None = None) -> list[str]:
    """v_1, ..., v_{levels+1} with v_{n+1} = v_n 0^{s_0} v_n ... 0^{s_r} v_n."""
    check_word(seed_word)
    if levels is None:
        levels = len(spacer_schedule)
    words = [seed_word]
    for n in range(levels):
        spacers = spacer_schedule[n]
        if any(s < 0 for s in spacers):
            raise ScheduleError(f"level {n + 1}: negative spacer")
        v = words[-1]
        words.append(v + "".join(SPACER * s + v for s in spacers))
    return words


def build_rank_one(seed_word: str, spacer_schedule: Sequence[Sequence[int]],
                   levels: int | None = None) -> str:
    return rank_one_words(seed_word, spacer_schedule, levels)[-1]


# Pascal adic coding. Paths in the Pascal graph are labelled by their first
# edge ("a" = left, "b" = right); the Rokhlin tower over vertex (n, k) reads
# B(n, k) = B(n-1, k-1) B(n-1, k), of height C(n, k).

@lru_cache(maxsize=None)
def _pascal_row(n: int) -> tuple[str, ...]:
    if n == 0:
        return ("a",)
    if n == 1:
        return ("a", "b")
    prev = _pascal_row(n - 1)
    return ("a",) + tuple(prev[k - 1] + prev[k] for k in range(1, n)) + ("b",)


def pascal_block(n: int, k: int) -> str:
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    _check_pascal_level(n + 1)
    return _pascal_row(n)[k]


def _check_pascal_level(n: int) -> None:
    if not 1 <= n <= PASCAL_MAX_LEVEL:
        raise ValueError(f"Pascal level must be in [1, {PASCAL_MAX_LEVEL}], got {n}")


def columns_coding(n: int) -> str:
    """Towers of the previous level side by side: B(n-1, 0) ... B(n-1, n-1)."""
    return "".join(_pascal_row(n - 1))


def tallest_column_coding(n: int) -> str:
    return _pascal_row(n - 1)[(n - 1) // 2]


PASCAL_CODINGS: dict[str, Callable[[int], str]] = {
    "columns": columns_coding,
    "tallest-column": tallest_column_coding,
}


def pascal_word(n: int, coding: str | Callable[[int], str] = "columns") -> str:
    """Level-``n`` Pascal coding word; the default has length 2**(n-1)."""
    _check_pascal_level(n)
    fn = PASCAL_CODINGS[coding] if isinstance(coding, str) else coding
    return fn(n)


def pascal_tower_profile(n: int) -> list[int]:
    """Tower heights C(n, 0), ..., C(n, n) at step ``n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return [math.comb(n, k) for k in range(n + 1)]
