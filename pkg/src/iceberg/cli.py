"""Command line front end: ``iceberg gen | complexity | check-d | cover | exp``.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .builders import (IcebergSchedule, RandomSpec, ScheduleError, build_iceberg,
                       pascal_word, random_schedule, rank_one_words)
from .complexity import complexity_profile, empirical_frequencies, saturated_complexity
from .experiments import ConfigError, ExperimentConfig, InfeasibleError, run_experiment
from .matching import check_D
from .scaling import MODES, greedy_cover
from .words import WordError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def read_word(path: str, line: int | None = None) -> str:
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    words = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not words:
        raise UsageError(f"{path}: no words")
    try:
        return words[-1 if line is None else line]
    except IndexError:
        raise UsageError(f"{path}: no line {line}") from None


def emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def cmd_gen(args) -> int:
    if args.kind == "pascal":
        words = [pascal_word(n) for n in range(1, args.levels + 1)]
        schedule = None
    elif args.kind == "rank-one":
        if args.spacers is None:
            raise UsageError("rank-one needs --spacers, e.g. '[[1],[0,2]]'")
        words = rank_one_words(args.seed_word, json.loads(args.spacers), args.levels)
        schedule = None
    else:
        if args.config:
            spec = RandomSpec.from_dict(json.loads(Path(args.config).read_text()))
        else:
            if args.q is None and args.gamma is None:
                raise UsageError("iceberg needs --q or --gamma (or --config)")
            q_list = None if args.q is None else (args.q * args.levels if len(args.q) == 1
                                                  else args.q)
            spacers = json.loads(args.spacers) if args.spacers else None
            spec = RandomSpec(args.seed, q_list, args.gamma, spacers)
        schedule = random_schedule(spec, args.seed_word, args.levels)
        words = build_iceberg(args.seed_word, schedule)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    emit("\n".join(words) + "\n", str(out / "words.txt"))
    if schedule is not None:
        emit(json.dumps(schedule.to_dict(), sort_keys=True) + "\n", str(out / "schedule.json"))
        emit(json.dumps(spec.to_dict(), sort_keys=True) + "\n", str(out / "random_spec.json"))
    return EXIT_OK


def cmd_complexity(args) -> int:
    w = read_word(args.input, args.line)
    if args.frequencies is not None:
        emit(empirical_frequencies(w, args.frequencies).to_json() + "\n", args.out)
        return EXIT_OK
    prof = complexity_profile(w, args.lmax or len(w), args.engine)
    sat = ({l: saturated_complexity(w, l) for l in range(1, prof.l_max + 1)}
           if args.saturated else None)
    if args.format == "json":
        d = {"word_length": prof.word_length, "engine": prof.engine,
             "values": [{"l": l, "p_l": p, **({"p_bar_l": sat[l]} if sat else {})}
                        for l, p in enumerate(prof.values, 1)]}
        emit(dumps(d), args.out)
    else:
        emit(prof.to_csv(sat), args.out)
    return EXIT_OK


def cmd_check_d(args) -> int:
    rep = check_D(read_word(args.input, args.line), args.beta)
    emit(dumps(rep.to_dict()), args.out)
    return EXIT_OK if rep.holds else EXIT_FAIL


def cmd_cover(args) -> int:
    stats = greedy_cover(read_word(args.orbit, args.line), read_word(args.word), args.mode,
                         args.epsilon, args.gap_symbol)
    emit(dumps(stats.to_dict(not args.no_fragments)), args.out)
    return EXIT_OK if stats.succeeded else EXIT_FAIL


def cmd_exp(args) -> int:
    if not args.config:
        raise UsageError("exp needs --config <json>")
    cfg = ExperimentConfig.from_json(Path(args.config).read_text(encoding="utf-8"))
    if args.seed is not None:
        cfg.seed = args.seed
    if args.engine is not None:
        cfg.params["engine"] = args.engine
    result = run_experiment(cfg)
    if args.out:
        out = Path(args.out)
        result.write(out / f"{cfg.kind}.csv", out / f"{cfg.kind}.summary.json")
    else:
        result.write()
    if args.format == "csv":
        sys.stdout.write(result.csv_text())
    else:
        sys.stdout.write(result.summary_json())
    return EXIT_OK if result.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="64-bit RNG seed")
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--out", help="output path (file or directory)")
    common.add_argument("--engine", choices=("naive", "fast"), default=None)
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="iceberg", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="build words and schedules")
    g.add_argument("--kind", choices=("iceberg", "rank-one", "pascal"), default="iceberg")
    g.add_argument("--seed-word", default="10")
    g.add_argument("--levels", type=int, default=2)
    g.add_argument("--q", type=int, nargs="+", help="block count (one per level, or one for all)")
    g.add_argument("--gamma", type=float, help="q_n = ceil(h_n ** gamma)")
    g.add_argument("--spacers", help="per-level spacer lists as JSON")
    g.set_defaults(fn=cmd_gen)

    c = sub.add_parser("complexity", parents=[common], help="subword complexity profile")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--line", type=int, default=None, help="word index in file (default: last)")
    c.add_argument("--lmax", type=int)
    c.add_argument("--saturated", action="store_true", help="add p_bar_l column")
    c.add_argument("--frequencies", type=int, metavar="L", help="emit length-L frequencies JSON")
    c.set_defaults(fn=cmd_complexity)

    d = sub.add_parser("check-d", parents=[common], help="check the matching axiom D(beta)")
    d.add_argument("--in", dest="input", required=True)
    d.add_argument("--line", type=int, default=None)
    d.add_argument("--beta", default="1/2", help="threshold, e.g. 0.5 or 1/2")
    d.set_defaults(fn=cmd_check_d)

    v = sub.add_parser("cover", parents=[common], help="greedy cover of an orbit by W")
    v.add_argument("--orbit", required=True)
    v.add_argument("--word", required=True)
    v.add_argument("--line", type=int, default=None, help="orbit word index")
    v.add_argument("--mode", choices=MODES, default="subword")
    v.add_argument("--epsilon", type=float, default=0.0)
    v.add_argument("--gap-symbol", default=None)
    v.add_argument("--no-fragments", action="store_true")
    v.set_defaults(fn=cmd_cover)

    e = sub.add_parser("exp", parents=[common], help="run an experiment config")
    e.set_defaults(fn=cmd_exp)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.engine is None and args.command != "exp":
        args.engine = "fast"
    if args.seed is None and args.command == "gen":
        args.seed = 0
    if args.format is None:
        args.format = "json" if args.command == "exp" else "csv"
    try:
        return args.fn(args)
    except (UsageError, ConfigError, InfeasibleError, ScheduleError, WordError,
            ValueError, OSError) as e:
        print(f"iceberg {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
