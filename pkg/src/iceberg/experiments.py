"""Seeded experiments that check the combinatorial bounds on concrete words.

Every experiment is a pure function of its :class:`ExperimentConfig`; the
CSV text and the JSON summary are byte-identical across reruns.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path

import numpy as np

from ._parallel import pmap
from .builders import (MAX_WORD_LENGTH, PASCAL_CODINGS, LevelSpec, build_iceberg, pascal_word,
                       random_seed_word, random_word, rank_one_words)
from .complexity import complexity_profile, saturated_complexity
from .matching import as_fraction, check_D, d_threshold, lower_bound_check, match_probability_mc
from .scaling import greedy_cover, pascal_scale_prediction

DEFAULTS: dict[str, dict] = {
    "upper-bound": {"instances": 50, "h1": [3, 8], "q": [3, 8], "spacers": [0, 0],
                    "engine": "fast"},
    "lower-bound": {"h": 30, "q": 5000, "beta": 0.1, "alphabet": "0123",
                    "max_draws": 100000, "engine": "fast"},
    "d-prob": {"seed_word": "10010", "q_values": [8, 16, 32], "trials": 200, "beta": 0.5},
    "pascal-complexity": {"level": 16, "l_min": 8, "l_max": 40, "engine": "fast",
                          "coding": "columns", "slope_range": [2.5, 3.5]},
    "scaling": {"rank_one_instances": 10, "iceberg_instances": 20,
                "pascal_levels": [10, 11, 12, 13, 14], "pascal_offset": 2,
                "h1": [3, 8], "q": [3, 8], "rank_one_seed": [2, 6],
                "rank_one_copies": [2, 4], "rank_one_spacers": [0, 3],
                "iceberg_floor": 0.45, "pascal_factor": 4.0, "pascal_W": "columns"},
}
KINDS = tuple(DEFAULTS)


class ConfigError(ValueError):
    def __init__(self, path: str, msg: str):
        super().__init__(f"{path}: {msg}")
        self.path = path


class InfeasibleError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    kind: str
    seed: int = 0
    params: dict = field(default_factory=dict)
    csv_path: str | None = None
    summary_path: str | None = None
    max_length: int = MAX_WORD_LENGTH

    def resolved(self) -> dict:
        """Parameters with defaults filled in, after type checks."""
        if self.kind not in DEFAULTS:
            raise ConfigError("kind", f"unknown kind {self.kind!r}; choose from {KINDS}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ConfigError("seed", "must be an integer")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed", "must fit in 64 bits")
        defaults = DEFAULTS[self.kind]
        out = copy.deepcopy(defaults)
        for key, value in self.params.items():
            if key not in defaults:
                raise ConfigError(f"params.{key}", "unknown parameter")
            want = defaults[key]
            if isinstance(want, list):
                ok = isinstance(value, list) and all(isinstance(v, (int, float)) for v in value)
            elif isinstance(want, float):
                ok = isinstance(value, (int, float)) and not isinstance(value, bool)
            else:
                ok = isinstance(value, type(want)) and not isinstance(value, bool)
            if not ok:
                raise ConfigError(f"params.{key}", f"expected {type(want).__name__}, got {value!r}")
            out[key] = value
        for key, value in out.items():
            if isinstance(DEFAULTS[self.kind][key], list) and len(DEFAULTS[self.kind][key]) == 2 \
                    and key not in ("q_values", "pascal_levels") and value[0] > value[1]:
                raise ConfigError(f"params.{key}", "range must be [lo, hi] with lo <= hi")
        if out.get("engine", "fast") not in ("fast", "naive"):
            raise ConfigError("params.engine", "must be 'fast' or 'naive'")
        for key in ("coding", "pascal_W"):
            if key in out and out[key] not in PASCAL_CODINGS:
                raise ConfigError(f"params.{key}", f"must be one of {sorted(PASCAL_CODINGS)}")
        return out

    def to_dict(self) -> dict:
        return {"kind": self.kind, "seed": self.seed, "params": self.params,
                "outputs": {"csv": self.csv_path, "summary": self.summary_path},
                "max_length": self.max_length}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> ExperimentConfig:
        if not isinstance(d, dict):
            raise ConfigError("$", "config must be a JSON object")
        extra = set(d) - {"kind", "seed", "params", "outputs", "max_length"}
        if extra:
            raise ConfigError(sorted(extra)[0], "unknown field")
        if "kind" not in d:
            raise ConfigError("kind", "missing")
        outputs = d.get("outputs") or {}
        params = d.get("params") or {}
        if not isinstance(params, dict):
            raise ConfigError("params", "must be an object")
        return cls(d["kind"], d.get("seed", 0), dict(params), outputs.get("csv"),
                   outputs.get("summary"), d.get("max_length", MAX_WORD_LENGTH))

    @classmethod
    def from_json(cls, text: str) -> ExperimentConfig:
        try:
            d = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError("$", f"invalid JSON: {e}") from None
        return cls.from_dict(d)


@dataclass
class Assertion:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    header: list[str]
    rows: list[list]
    assertions: list[Assertion]
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    def csv_text(self) -> str:
        lines = [",".join(self.header)]
        lines += [",".join(_cell(v) for v in row) for row in self.rows]
        return "\n".join(lines) + "\n"

    def summary(self) -> dict:
        return {"kind": self.config.kind, "config": self.config.to_dict(), "pass": self.passed,
                "assertions": [{"name": a.name, "pass": a.passed, "detail": a.detail}
                               for a in self.assertions],
                "info": self.info}

    def summary_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True, indent=2) + "\n"

    def write(self, csv_path=None, summary_path=None) -> None:
        csv_path = csv_path or self.config.csv_path
        summary_path = summary_path or self.config.summary_path
        for path, text in ((csv_path, self.csv_text()), (summary_path, self.summary_json())):
            if path:
                Path(path).parent.mkdir(parents=True, exist_ok=True)
                with open(path, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(text)


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _rng(seed_seq) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed_seq))


def _children(seed: int, n: int) -> list:
    return np.random.SeedSequence(seed).spawn(n)


def _guard(length: int, cap: int) -> None:
    if length > cap:
        raise InfeasibleError(f"instance needs a word of length {length} > cap {cap}")


def _rand_in(rng, lo_hi) -> int:
    return int(rng.integers(lo_hi[0], lo_hi[1] + 1))


def random_two_level_instance(rng, h1_range, q_range, spacer_range=(0, 0)):
    """Words w_1, w_2, w_3 of a random iceberg system (optionally with
    spacers) and the block counts q_1, q_2."""
    w = random_seed_word(rng, _rand_in(rng, h1_range))
    words, qs = [w], []
    for _ in range(2):
        h, q = len(words[-1]), _rand_in(rng, q_range)
        alphas = [0] + rng.integers(0, h, size=q - 1).tolist()
        spacers = [_rand_in(rng, spacer_range) for _ in range(q)]
        words.append(build_iceberg(words[-1], [LevelSpec(q, alphas, spacers)])[-1])
        qs.append(q)
    return words, qs


def _upper_instance(seed_seq, p, cap):
    rng = _rng(seed_seq)
    q, s = p["q"][1], p["spacers"][1]
    _guard(q * (q * (p["h1"][1] + s) + s), cap)
    (w1, w2, w3), (q1, q2) = random_two_level_instance(rng, p["h1"], p["q"], p["spacers"])
    h2 = len(w2)
    prof = complexity_profile(w3, h2 + 1, p["engine"])
    row = [len(w1), q1, q2, h2, len(w3), prof[h2], h2**3 - h2**2 + h2,
           prof[h2 + 1], h2**3]
    if p["spacers"][1] > 0:
        row.append(saturated_complexity(w3, h2 + 1))
    return row


def run_upper_bound(cfg: ExperimentConfig, p: dict) -> ExperimentResult:
    with_spacers = p["spacers"][1] > 0
    rows = pmap(partial(_upper_instance, p=p, cap=cfg.max_length),
                _children(cfg.seed, p["instances"]))
    rows = [[i] + r for i, r in enumerate(rows)]
    header = ["instance", "h1", "q1", "q2", "h2", "len_w3", "p_h2", "bound_h2", "p_h2_plus_1",
              "bound_h2_plus_1"]
    checks = [Assertion("p(h+1) <= h^3", all(r[8] <= r[9] for r in rows),
                        {"violations": [r[0] for r in rows if r[8] > r[9]]}),
              Assertion("p(h) <= h^3 - h^2 + h", all(r[6] <= r[7] for r in rows),
                        {"violations": [r[0] for r in rows if r[6] > r[7]]})]
    info = {"instances": len(rows)}
    if with_spacers:
        # the plain bounds are only claimed without spacers; report them
        info["plain_bounds"] = {a.name: a.passed for a in checks}
        header.append("p_bar_h2_plus_1")
        checks = [Assertion("saturated p(h+1) <= h^3", all(r[10] <= r[9] for r in rows),
                            {"violations": [r[0] for r in rows if r[10] > r[9]]})]
    return ExperimentResult(cfg, header, rows, checks, info)


def draw_d_word(seed: int, h: int, beta, alphabet: str, max_draws: int) -> tuple[str, int, np.random.Generator]:
    """Rejection-sample a word satisfying D(beta), trying seed, seed+1, ...

    Returns the word, the number of draws, and the accepted draw's generator
    (positioned just after the word) for any further randomness.
    """
    m = d_threshold(h, beta)
    if len(set(alphabet)) ** m < h:
        # h cyclic windows of length m must all differ
        raise InfeasibleError(f"D({beta}) is impossible at length {h} over {alphabet!r}: "
                              f"only {len(set(alphabet)) ** m} words of length {m}")
    for d in range(max_draws):
        rng = _rng(np.random.SeedSequence(seed + d))
        w = random_word(rng, h, alphabet)
        if len(set(w)) > 1 and check_D(w, beta).holds:
            return w, d + 1, rng
    raise InfeasibleError(f"no word of length {h} over {alphabet!r} satisfied D({beta}) "
                          f"in {max_draws} draws")


def _lower_instance(seed: int, p: dict) -> tuple[str, int, str]:
    h, q = p["h"], p["q"]
    w, draws, rng = draw_d_word(seed, h, as_fraction(p["beta"]), p["alphabet"], p["max_draws"])
    alphas = [0] + rng.integers(0, h, size=q - 1).tolist()
    return w, draws, build_iceberg(w, [LevelSpec(q, alphas)])[-1]


def run_lower_bound(cfg: ExperimentConfig, p: dict) -> ExperimentResult:
    h, q = p["h"], p["q"]
    _guard(h * q, cfg.max_length)
    beta = as_fraction(p["beta"])
    w, draws, w_next = _lower_instance(cfg.seed, p)
    rep = lower_bound_check(w_next, w, beta, p["engine"])
    header = ["h", "q", "beta", "draws", "p_h", "bound", "margin", "sigma_size",
              "sigma_realized", "sigma_realized_distinct"]
    rows = [[h, q, float(beta), draws, rep.p_h, float(rep.bound), float(rep.margin),
             rep.sigma_size, rep.sigma_realized, rep.sigma_realized_distinct]]
    checks = [Assertion("D(beta) holds for w", rep.d_holds, {"draws": draws}),
              Assertion("p(h) >= (1-4beta)/beta (h^2-h)", rep.p_h >= rep.bound,
                        {"p_h": rep.p_h, "bound": float(rep.bound)}),
              Assertion("realized sigma words pairwise distinct",
                        rep.sigma_realized == rep.sigma_realized_distinct,
                        {"realized": rep.sigma_realized,
                         "distinct": rep.sigma_realized_distinct})]
    return ExperimentResult(cfg, header, rows, checks, {"word": w, "draws": draws})


def run_d_prob(cfg: ExperimentConfig, p: dict) -> ExperimentResult:
    header = ["q", "h", "trials", "failures", "estimate", "eta", "bound", "bound_flipped",
              "chain_bound"]
    rows, stats = [], []
    for q in p["q_values"]:
        _guard(q * len(p["seed_word"]), cfg.max_length)
        s = match_probability_mc(p["seed_word"], q, p["trials"], p["beta"], cfg.seed)
        stats.append(s)
        rows.append([q, s.h, s.trials, s.failures, s.estimate, s.eta_param, s.bound,
                     s.bound_flipped, s.chain_bound])
    rates = [s.estimate for s in stats]
    ok = all(a >= b for a, b in zip(rates, rates[1:]))
    return ExperimentResult(cfg, header, rows,
                            [Assertion("failure rate nonincreasing in q", ok, {"rates": rates})])


def loglog_slope(ls, ps) -> float:
    return float(np.polyfit(np.log(np.asarray(ls, float)), np.log(np.asarray(ps, float)), 1)[0])


def run_pascal_complexity(cfg: ExperimentConfig, p: dict) -> ExperimentResult:
    n = p["level"]
    _guard(2 ** (n - 1), cfg.max_length)
    w = pascal_word(n, p["coding"])
    prof = complexity_profile(w, p["l_max"], p["engine"])
    ls = list(range(p["l_min"], p["l_max"] + 1))
    ps = [prof[l] for l in ls]
    rows = [[l, pl, l**3 / 6, 6 * pl / l**3] for l, pl in zip(ls, ps)]
    slope = loglog_slope(ls, ps)
    lo, hi = p["slope_range"]
    monotone = all(a <= b for a, b in zip(ps, ps[1:]))
    checks = [Assertion("log-log slope in range", lo <= slope <= hi,
                        {"slope": slope, "range": [lo, hi]}),
              Assertion("p(l) nondecreasing", monotone, {})]
    return ExperimentResult(cfg, ["l", "p_l", "l3_over_6", "ratio"], rows, checks,
                            {"word_length": len(w), "slope": slope})


def _rank_one_words(rng, p) -> tuple[list[str], list[list[int]]]:
    k = _rand_in(rng, p["rank_one_seed"])
    # seeds start and end with a non-spacer letter so copies have sharp edges
    inner = random_word(rng, max(0, k - 2)) if k > 2 else ""
    v1 = "1" + inner + "1" if k >= 2 else "1"
    sched = []
    for _ in range(2):
        copies = _rand_in(rng, p["rank_one_copies"])
        sched.append([_rand_in(rng, p["rank_one_spacers"]) for _ in range(copies - 1)])
    return rank_one_words(v1, sched), sched


def _rank_one_instance(seed_seq, p):
    (v1, v2, v3), sched = _rank_one_words(_rng(seed_seq), p)
    cover = greedy_cover(v3, v2, "subword", gap_symbol="0")
    copies = len(sched[1]) + 1
    starts, pos = [], 0
    for s in sched[1] + [0]:
        starts.append(pos)
        pos += len(v2) + s
    exact = ([f.start for f in cover.fragments] == starts
             and all(f.length == len(v2) for f in cover.fragments))
    return len(v2), cover, exact, copies


def _iceberg_cover_instance(seed_seq, p):
    rng = _rng(seed_seq)
    (_, w2, w3), _ = random_two_level_instance(rng, p["h1"], p["q"])
    return len(w2), greedy_cover(w3, w2, "subword")


def run_scaling(cfg: ExperimentConfig, p: dict) -> ExperimentResult:
    root = np.random.SeedSequence(cfg.seed).spawn(2)
    rank = pmap(partial(_rank_one_instance, p=p), root[0].spawn(p["rank_one_instances"]))
    ice = pmap(partial(_iceberg_cover_instance, p=p), root[1].spawn(p["iceberg_instances"]))
    rows = []
    for i, (h, c, _, _) in enumerate(rank):
        rows.append(["rank-one", i, h, c.avg_fragment_length, c.scale_estimate, 1.0])
    for i, (h, c) in enumerate(ice):
        rows.append(["iceberg", i, h, c.avg_fragment_length, c.scale_estimate, 0.5])
    pascal = []
    for n in p["pascal_levels"]:
        _guard(2 ** (n - 1 + p["pascal_offset"]), cfg.max_length)
        # h is the generalized tower height 2^(n-1) whichever W is used
        h = 2 ** (n - 1)
        W = pascal_word(n, p["pascal_W"])
        c = greedy_cover(pascal_word(n + p["pascal_offset"]), W, "subword")
        pred = pascal_scale_prediction(h)
        ratio = c.scale_estimate / pred
        pascal.append({"n": n, "h": h, "W_length": len(W), "scale": c.scale_estimate,
                       "prediction": pred,
                       "within_factor": 1 / p["pascal_factor"] <= ratio <= p["pascal_factor"]})
        rows.append(["pascal", n, h, c.avg_fragment_length, c.scale_estimate, pred])
    floor = p["iceberg_floor"]
    checks = [
        Assertion("rank-one cover exact copies, scale 1", all(r[2] for r in rank),
                  {"failed": [i for i, r in enumerate(rank) if not r[2]]}),
        Assertion("iceberg avg fragment >= floor * h",
                  all(c.avg_fragment_length >= floor * h and c.covered_fraction == 1.0
                      for h, c in ice),
                  {"min_ratio": min((c.avg_fragment_length / h for h, c in ice), default=None)}),
    ]
    return ExperimentResult(cfg, ["family", "n", "h", "avg_fragment_length", "scale_estimate",
                                  "prediction"], rows, checks, {"pascal": pascal})


RUNNERS = {"upper-bound": run_upper_bound, "lower-bound": run_lower_bound,
           "d-prob": run_d_prob, "pascal-complexity": run_pascal_complexity,
           "scaling": run_scaling}


def instance_words(cfg: ExperimentConfig) -> list[str]:
    """Every word whose complexity or cover the experiment computes, in run order."""
    p = cfg.resolved()
    if cfg.kind == "upper-bound":
        return [random_two_level_instance(_rng(c), p["h1"], p["q"], p["spacers"])[0][2]
                for c in _children(cfg.seed, p["instances"])]
    if cfg.kind == "lower-bound":
        w, _, w_next = _lower_instance(cfg.seed, p)
        return [w, w_next]
    if cfg.kind == "pascal-complexity":
        return [pascal_word(p["level"], p["coding"])]
    if cfg.kind == "scaling":
        root = np.random.SeedSequence(cfg.seed).spawn(2)
        out = []
        for c in root[0].spawn(p["rank_one_instances"]):
            out += _rank_one_words(_rng(c), p)[0][1:]
        for c in root[1].spawn(p["iceberg_instances"]):
            out += random_two_level_instance(_rng(c), p["h1"], p["q"])[0][1:]
        for n in p["pascal_levels"]:
            out += [pascal_word(n, p["pascal_W"]), pascal_word(n + p["pascal_offset"])]
        return out
    return []  # d-prob only runs the D checker


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    params = cfg.resolved()
    return RUNNERS[cfg.kind](cfg, params)
