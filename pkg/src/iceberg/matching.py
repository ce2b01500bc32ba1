"""Matching axioms D(beta), boundary-straddling triples, and the counting
argument behind the cubic lower bound."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Sequence

import numpy as np

from ._parallel import pmap
from .builders import LevelSpec, build_iceberg
from .complexity import complexity, language
from .words import Occurrence, check_word, letter_fraction

# Smallest m for which overlapping_subset meets the m/3 floor for every shift;
# see tests/test_matching.py::test_overlapping_subset_exhaustive.
OVERLAP_M0 = 1


def as_fraction(x) -> Fraction:
    # go through str so 0.1 means 1/10 rather than its binary expansion
    return x if isinstance(x, Fraction) else Fraction(str(x))


def d_threshold(h: int, beta) -> int:
    """Smallest subword length covered by D(beta) on a word of length ``h``."""
    return max(1, math.ceil(as_fraction(beta) * h))


@dataclass
class DReport:
    beta: Fraction
    holds: bool
    witnesses: list[tuple[int, Occurrence, Occurrence]]
    m_checked_range: tuple[int, int]

    def to_dict(self) -> dict:
        return {"beta": str(self.beta), "holds": self.holds,
                "m_checked_range": list(self.m_checked_range),
                "witnesses": [{"m": m, "first": a.to_dict(), "second": b.to_dict()}
                              for m, a, b in self.witnesses]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def check_D(w: str, beta) -> DReport:
    """Whether equal cyclic subwords of length >= beta*|w| are always identical.

    Only the threshold length needs checking: a repeated longer subword
    starts with a repeated subword of threshold length at the same two starts.
    """
    beta = as_fraction(beta)
    if not 0 < beta <= 1:
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    check_word(w)
    h = len(w)
    m = d_threshold(h, beta)
    ww = w + w[:m - 1]
    first: dict[str, int] = {}
    witnesses = []
    for i in range(h):
        u = ww[i:i + m]
        j = first.setdefault(u, i)
        if j != i:
            witnesses.append((m, Occurrence(j, m, True), Occurrence(i, m, True)))
    return DReport(beta, not witnesses, witnesses, (m, h))


def eta(nu) -> Fraction | float:
    """Single-letter matching probability bound 1 - 2nu + 2nu^2."""
    if not 0 <= nu <= 1:
        raise ValueError("nu must lie in [0, 1]")
    return 1 - 2 * nu + 2 * nu * nu


def overlapping_subset(m: int, s: int) -> list[int]:
    """A subset A of [0, m) with A and A + s disjoint: alternate runs of |s|."""
    if s == 0:
        raise ValueError("shift must be nonzero")
    if m < 1:
        raise ValueError("m must be >= 1")
    k = abs(s)
    return [x for x in range(m) if x % (2 * k) < k]


def reflection_disjoint_subset(k: int, l: int, m: int) -> list[int]:
    """A subset A of [k, k+m] with A and (l + k - A) disjoint.

    The map x -> l + k - x reflects about (l + k)/2, so the points strictly on
    one side of that centre never meet their images; take the larger side.
    """
    if l == k:
        raise ValueError("need l != k")
    pts = range(k, k + m + 1)
    lo = [x for x in pts if 2 * x < l + k]
    hi = [x for x in pts if 2 * x > l + k]
    return lo if len(lo) >= len(hi) else hi


@dataclass
class MatchStats:
    trials: int
    failures: int
    eta_param: float
    bound: float           # 1 - 2 q^3 eta^(-beta q / 12), exponent sign as printed
    bound_flipped: float   # same with eta^(+beta q / 12)
    chain_bound: float     # 1 - q^3 h^(-beta q / 12)
    q: int = 0
    h: int = 0
    beta: float = 0.0

    @property
    def estimate(self) -> float:
        return self.failures / self.trials

    def to_dict(self) -> dict:
        return {"trials": self.trials, "failures": self.failures, "estimate": self.estimate,
                "eta": self.eta_param, "bound": self.bound, "bound_flipped": self.bound_flipped,
                "chain_bound": self.chain_bound, "q": self.q, "h": self.h, "beta": self.beta}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def matching_bounds(nu, h: int, q: int, beta) -> tuple[float, float, float]:
    e = float(eta(nu))
    x = float(beta) * q / 12
    written = 1 - 2 * q**3 * e ** (-x) if e > 0 else -math.inf
    flipped = 1 - 2 * q**3 * e ** x
    chain = 1 - q**3 * float(h) ** (-x)
    return written, flipped, chain


def _mc_trial(seed_seq, seed_word: str, q: int, beta, alphas: Sequence[int] | None) -> bool:
    if alphas is None:
        rng = np.random.Generator(np.random.PCG64(seed_seq))
        alphas = [0] + rng.integers(0, len(seed_word), size=q - 1).tolist()
    w_next = build_iceberg(seed_word, [LevelSpec(q, list(alphas))])[-1]
    return not check_D(w_next, beta).holds


def match_probability_mc(seed_word: str, q: int, trials: int, beta, rng_seed: int,
                         alphas: Sequence[int] | None = None) -> MatchStats:
    """Monte Carlo failure rate of D(beta) on one random iceberg level.

    Trial ``i`` draws its rotations from child ``i`` of ``SeedSequence(rng_seed)``.
    Passing ``alphas`` pins every trial to that schedule instead.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    children = np.random.SeedSequence(rng_seed).spawn(trials)
    fails = pmap(partial(_mc_trial, seed_word=seed_word, q=q, beta=as_fraction(beta),
                         alphas=alphas), children)
    nu = letter_fraction(seed_word)
    written, flipped, chain = matching_bounds(nu, len(seed_word), q, as_fraction(beta))
    return MatchStats(trials, sum(fails), float(eta(nu)), written, flipped, chain,
                      q=q, h=len(seed_word), beta=float(as_fraction(beta)))


@dataclass(frozen=True)
class TripleConfig:
    xi: int
    phi1: int
    phi2: int


def triple_word(t: TripleConfig, w: str) -> str:
    """Last ``xi`` letters of rotate(w, phi1) followed by the first
    ``h - xi`` letters of rotate(w, phi2)."""
    h = len(w)
    if not 0 < t.xi < h:
        raise ValueError(f"xi={t.xi} outside (0, {h})")
    a = (h - t.xi + t.phi1) % h
    b = t.phi2 % h
    ww = w + w
    return ww[a:a + t.xi] + ww[b:b + h - t.xi]


def triple_match_condition(t1: TripleConfig, t2: TripleConfig, h: int) -> bool:
    """Whether the three pieces of V(t1), V(t2) sit at identical positions."""
    if t1.xi > t2.xi:
        t1, t2 = t2, t1
    d = (t2.xi - t1.xi) % h
    ok = (t2.phi1 - t1.phi1) % h == d and (t2.phi2 - t1.phi2) % h == d
    if t1.xi == t2.xi:
        # no middle interval to match
        return ok
    return ok and (h + t2.phi1 - t1.phi2) % h == d


def separated(t1: TripleConfig, t2: TripleConfig, h: int, beta, strict: bool = True) -> bool:
    """Separation hypotheses for comparing two triples under D(beta).

    ``strict`` is the open form (beta h < xi < eta < (1-beta) h and
    eta - xi > beta h). The relaxed form only asks every interval among
    [0, xi), [xi, eta), [eta, h) to reach the D(beta) threshold, which is
    what the comparison actually consumes.
    """
    beta = as_fraction(beta)
    x, y = sorted((t1.xi, t2.xi))
    if strict:
        bh = beta * h
        return bh < x < y < (1 - beta) * h and y - x > bh
    m = d_threshold(h, beta)
    return x >= m and h - y >= m and (x == y or y - x >= m)


def sigma_set(h: int, beta) -> list[TripleConfig]:
    """Triples (kappa + j a, phi1, phi2), phi1 != phi2, 0 <= j < m, with
    kappa = a = floor(beta h) and m = floor((1 - 2 beta) h / a)."""
    beta = as_fraction(beta)
    a = math.floor(beta * h)
    if a < 1:
        raise ValueError(f"beta={beta} too small for h={h}: floor(beta*h) = 0")
    m = math.floor((1 - 2 * beta) * h / a)
    return [TripleConfig(a + j * a, p1, p2)
            for j in range(m) for p1 in range(h) for p2 in range(h) if p1 != p2]


def lower_bound_value(h: int, beta) -> Fraction:
    beta = as_fraction(beta)
    return (1 - 4 * beta) / beta * (h * h - h)


@dataclass
class LowerBoundReport:
    h: int
    beta: Fraction
    d_holds: bool
    p_h: int
    bound: Fraction
    sigma_size: int
    sigma_realized: int
    sigma_realized_distinct: int
    notes: list[str] = field(default_factory=list)

    @property
    def margin(self) -> Fraction:
        return self.p_h - self.bound

    @property
    def ok(self) -> bool:
        return (self.d_holds and self.p_h >= self.bound
                and self.sigma_realized == self.sigma_realized_distinct)

    def to_dict(self) -> dict:
        return {"h": self.h, "beta": str(self.beta), "d_holds": self.d_holds, "p_h": self.p_h,
                "bound": float(self.bound), "margin": float(self.margin),
                "sigma_size": self.sigma_size, "sigma_realized": self.sigma_realized,
                "sigma_realized_distinct": self.sigma_realized_distinct,
                "ok": self.ok, "notes": list(self.notes)}


def lower_bound_check(w_next: str, w: str, beta, engine: str = "fast") -> LowerBoundReport:
    h = len(w)
    beta = as_fraction(beta)
    notes = []
    d = check_D(w, beta)
    if not d.holds:
        notes.append(f"precondition failed: D({beta}) does not hold for w "
                     f"({len(d.witnesses)} repeated windows)")
    p_h = complexity(w_next, h, engine)
    sigma = sigma_set(h, beta)
    seen = language(w_next, h)
    realized = [v for v in (triple_word(t, w) for t in sigma) if v in seen]
    return LowerBoundReport(h, beta, d.holds, p_h, lower_bound_value(h, beta), len(sigma),
                            len(realized), len(set(realized)), notes)
